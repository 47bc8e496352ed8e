#include "tsclust/validation.hpp"

#include "tsclust/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <map>

namespace tsclust {

namespace {

/// Maps arbitrary label values onto 0..k-1 in order of first appearance.
std::vector<int> encode(std::span<const int> labels, int& k) {
    std::map<int, int> index;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) {
        auto [it, inserted] = index.emplace(l, static_cast<int>(index.size()));
        out.push_back(it->second);
    }
    k = static_cast<int>(index.size());
    return out;
}

std::int64_t choose2(std::int64_t n) { return n * (n - 1) / 2; }

}  // namespace

std::string_view to_string(DistanceBasis basis) {
    return basis == DistanceBasis::Native ? "native" : "flattened-euclidean";
}

Eigen::MatrixXd pairwise_distances(const Dataset& dataset, const PairDistance& dist, bool symmetric) {
    const auto n = static_cast<Eigen::Index>(dataset.size());
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = symmetric ? i : 0; j < n; ++j) {
            d(i, j) = dist(dataset[static_cast<std::size_t>(i)].span(),
                           dataset[static_cast<std::size_t>(j)].span());
            if (symmetric) d(j, i) = d(i, j);
        }
    }
    return d;
}

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("euclidean distance needs equal lengths");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
}

double silhouette(const Eigen::MatrixXd& distances, std::span<const int> labels) {
    const auto n = labels.size();
    if (n < 2) throw ParameterError("silhouette needs at least 2 series");
    if (static_cast<std::size_t>(distances.rows()) != n || static_cast<std::size_t>(distances.cols()) != n) {
        throw ParameterError("distance matrix does not match the label count");
    }
    int k = 0;
    const std::vector<int> enc = encode(labels, k);
    if (k < 2) throw ParameterError("silhouette needs at least 2 clusters");

    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int l : enc) ++sizes[static_cast<std::size_t>(l)];

    double total = 0.0;
    std::vector<double> sums(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(enc[i]);
        if (sizes[own] == 1) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[static_cast<std::size_t>(enc[j])] +=
                distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sums.size(); ++c) {
            if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        }
        const double scale = std::max(a, b);
        const double s = scale == 0.0 ? 0.0 : (b - a) / scale;
        total += std::clamp(s, -1.0, 1.0);
    }
    return total / static_cast<double>(n);
}

double silhouette(const Dataset& dataset, std::span<const int> labels, const PairDistance& dist) {
    if (labels.size() != dataset.size()) throw ParameterError("one label per series required");
    return silhouette(pairwise_distances(dataset, dist), labels);
}

double calinski_harabasz(const Dataset& dataset, std::span<const int> labels) {
    const std::size_t n = dataset.size();
    if (labels.size() != n) throw ParameterError("one label per series required");
    int k = 0;
    const std::vector<int> enc = encode(labels, k);
    if (k < 2 || static_cast<std::size_t>(k) >= n) {
        throw ParameterError("Calinski-Harabasz needs 2 <= k < n (k = " + std::to_string(k) +
                             ", n = " + std::to_string(n) + ")");
    }
    const std::size_t m = dataset.length();
    std::vector<double> overall(m, 0.0);
    std::vector<std::vector<double>> centroid(static_cast<std::size_t>(k), std::vector<double>(m, 0.0));
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& c = centroid[static_cast<std::size_t>(enc[i])];
        ++sizes[static_cast<std::size_t>(enc[i])];
        for (std::size_t t = 0; t < m; ++t) {
            c[t] += dataset[i][t];
            overall[t] += dataset[i][t];
        }
    }
    for (std::size_t t = 0; t < m; ++t) overall[t] /= static_cast<double>(n);
    for (std::size_t c = 0; c < centroid.size(); ++c) {
        for (double& v : centroid[c]) v /= static_cast<double>(sizes[c]);
    }

    double between = 0.0;
    for (std::size_t c = 0; c < centroid.size(); ++c) {
        double d = 0.0;
        for (std::size_t t = 0; t < m; ++t) d += (centroid[c][t] - overall[t]) * (centroid[c][t] - overall[t]);
        between += sizes[c] * d;
    }
    double within = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = centroid[static_cast<std::size_t>(enc[i])];
        for (std::size_t t = 0; t < m; ++t) within += (dataset[i][t] - c[t]) * (dataset[i][t] - c[t]);
    }
    if (within == 0.0) return std::numeric_limits<double>::infinity();
    return (between / (k - 1)) / (within / static_cast<double>(n - static_cast<std::size_t>(k)));
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw ParameterError("ARI needs labelings of equal length");
    if (a.size() < 2) throw ParameterError("ARI needs at least 2 series");
    int ka = 0;
    int kb = 0;
    const auto ea = encode(a, ka);
    const auto eb = encode(b, kb);
    std::vector<std::int64_t> table(static_cast<std::size_t>(ka) * static_cast<std::size_t>(kb), 0);
    std::vector<std::int64_t> rows(static_cast<std::size_t>(ka), 0);
    std::vector<std::int64_t> cols(static_cast<std::size_t>(kb), 0);
    for (std::size_t i = 0; i < ea.size(); ++i) {
        ++table[static_cast<std::size_t>(ea[i]) * static_cast<std::size_t>(kb) + static_cast<std::size_t>(eb[i])];
        ++rows[static_cast<std::size_t>(ea[i])];
        ++cols[static_cast<std::size_t>(eb[i])];
    }
    __int128 pairs_both = 0, pairs_a = 0, pairs_b = 0;
    for (auto v : table) pairs_both += choose2(v);
    for (auto v : rows) pairs_a += choose2(v);
    for (auto v : cols) pairs_b += choose2(v);
    const __int128 total = choose2(static_cast<std::int64_t>(a.size()));

    // (S - AB/T) / ((A + B)/2 - AB/T), scaled by 2T to stay in integers.
    const __int128 numerator = 2 * (total * pairs_both - pairs_a * pairs_b);
    const __int128 denominator = total * (pairs_a + pairs_b) - 2 * pairs_a * pairs_b;
    if (denominator == 0) return 1.0;
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

double AgreementReport::coverage() const {
    if (n == 0) return 0.0;
    int covered = 0;
    for (const auto& c : consensus) covered += c.count;
    return static_cast<double>(covered) / n;
}

AgreementReport agreement_matrix(std::span<const int> a, std::span<const int> b,
                                 const std::vector<std::string>& ids) {
    if (a.size() != b.size() || a.size() != ids.size()) {
        throw ParameterError("agreement matrix needs equal-length labelings and ids");
    }
    const auto negative = [](int l) { return l < 0; };
    if (std::any_of(a.begin(), a.end(), negative) || std::any_of(b.begin(), b.end(), negative)) {
        throw ParameterError("cluster labels must be non-negative");
    }
    AgreementReport report;
    report.n = static_cast<int>(a.size());
    const int ka = a.empty() ? 0 : *std::max_element(a.begin(), a.end()) + 1;
    const int kb = b.empty() ? 0 : *std::max_element(b.begin(), b.end()) + 1;
    report.contingency.assign(static_cast<std::size_t>(ka), std::vector<int>(static_cast<std::size_t>(kb), 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++report.contingency[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])];
    }
    report.ari = a.size() >= 2 ? adjusted_rand_index(a, b) : 1.0;

    std::vector<bool> row_used(static_cast<std::size_t>(ka), false);
    std::vector<bool> col_used(static_cast<std::size_t>(kb), false);
    std::vector<std::vector<bool>> matched(static_cast<std::size_t>(ka), std::vector<bool>(static_cast<std::size_t>(kb), false));
    while (true) {
        int best_r = -1, best_c = -1, best = 0;
        for (int r = 0; r < ka; ++r) {
            if (row_used[static_cast<std::size_t>(r)]) continue;
            for (int c = 0; c < kb; ++c) {
                if (col_used[static_cast<std::size_t>(c)]) continue;
                const int v = report.contingency[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                if (v > best) {
                    best = v;
                    best_r = r;
                    best_c = c;
                }
            }
        }
        if (best_r < 0) break;
        row_used[static_cast<std::size_t>(best_r)] = true;
        col_used[static_cast<std::size_t>(best_c)] = true;
        matched[static_cast<std::size_t>(best_r)][static_cast<std::size_t>(best_c)] = true;
        ConsensusCell cell{best_r, best_c, best, static_cast<double>(best) / report.n, {}};
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == best_r && b[i] == best_c) cell.members.push_back(ids[i]);
        }
        std::sort(cell.members.begin(), cell.members.end());
        report.consensus.push_back(std::move(cell));
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!matched[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])]) {
            report.outliers.push_back(ids[i]);
        }
    }
    std::sort(report.outliers.begin(), report.outliers.end());
    return report;
}

std::vector<ConsensusCell> consensus_groups(const AgreementReport& report) {
    std::vector<ConsensusCell> groups;
    for (const auto& c : report.consensus) {
        if (c.count > 0) groups.push_back(c);
    }
    std::stable_sort(groups.begin(), groups.end(), [](const ConsensusCell& x, const ConsensusCell& y) {
        if (x.count != y.count) return x.count > y.count;
        if (x.label_a != y.label_a) return x.label_a < y.label_a;
        return x.label_b < y.label_b;
    });
    return groups;
}

}  // namespace tsclust
