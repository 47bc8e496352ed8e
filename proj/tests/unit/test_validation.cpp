#include <doctest.h>

#include "oracles.hpp"
#include "tsclust/errors.hpp"
#include "tsclust/softdtw.hpp"
#include "tsclust/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace tsclust;
using Vec = std::vector<double>;

namespace {

Dataset points(const std::vector<Vec>& rows) {
    std::vector<TimeSeries> s;
    for (std::size_t i = 0; i < rows.size(); ++i) s.emplace_back("p" + std::to_string(i), rows[i]);
    return Dataset(std::move(s));
}

// Silhouette straight from the definition on a 1-D point set.
double direct_silhouette(const Vec& x, const std::vector<int>& labels) {
    const int k = *std::max_element(labels.begin(), labels.end()) + 1;
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
        std::vector<int> count(static_cast<std::size_t>(k), 0);
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (j == i) continue;
            sum[static_cast<std::size_t>(labels[j])] += std::abs(x[i] - x[j]);
            ++count[static_cast<std::size_t>(labels[j])];
        }
        const auto own = static_cast<std::size_t>(labels[i]);
        if (count[own] == 0) continue;
        const double a = sum[own] / count[own];
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sum.size(); ++c)
            if (c != own && count[c] > 0) b = std::min(b, sum[c] / count[c]);
        total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(x.size());
}

Eigen::MatrixXd abs_distances(const Vec& x) {
    Eigen::MatrixXd d(x.size(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) d(i, j) = std::abs(x[i] - x[j]);
    return d;
}

// Calinski-Harabasz from the definition on row vectors.
double direct_ch(const std::vector<Vec>& rows, const std::vector<int>& labels) {
    const std::size_t n = rows.size(), m = rows[0].size();
    const int k = *std::max_element(labels.begin(), labels.end()) + 1;
    Vec grand(m, 0.0);
    for (const auto& r : rows)
        for (std::size_t t = 0; t < m; ++t) grand[t] += r[t] / static_cast<double>(n);
    double between = 0.0, within = 0.0;
    for (int c = 0; c < k; ++c) {
        Vec mean(m, 0.0);
        int size = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (labels[i] == c) {
                ++size;
                for (std::size_t t = 0; t < m; ++t) mean[t] += rows[i][t];
            }
        for (auto& v : mean) v /= size;
        for (std::size_t t = 0; t < m; ++t) between += size * std::pow(mean[t] - grand[t], 2);
        for (std::size_t i = 0; i < n; ++i)
            if (labels[i] == c)
                for (std::size_t t = 0; t < m; ++t) within += std::pow(rows[i][t] - mean[t], 2);
    }
    return (between / (k - 1)) / (within / static_cast<double>(n - static_cast<std::size_t>(k)));
}

std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n, int k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> l(n);
    for (auto& v : l) v = pick(rng);
    return l;
}

std::vector<std::string> ids_for(std::size_t n) {
    std::vector<std::string> ids;
    char buf[16];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "S%03zu", i);
        ids.emplace_back(buf);
    }
    return ids;
}

}  // namespace

TEST_CASE("silhouette on the 1-D toy") {
    const Vec x{0.0, 0.1, 10.0, 10.1};
    const std::vector<int> labels{0, 0, 1, 1};
    const double s = silhouette(abs_distances(x), labels);
    CHECK(s == doctest::Approx(direct_silhouette(x, labels)).epsilon(1e-14));
    // By hand: a = 0.1 everywhere, b = 10.05 or 9.95.
    CHECK(s == doctest::Approx(0.5 * ((1 - 0.1 / 10.05) + (1 - 0.1 / 9.95))).epsilon(1e-14));
    CHECK(std::abs(s - 0.985) < 0.01);

    const auto d = points({{0.0, 0.0}, {0.1, 0.1}, {10.0, 10.0}, {10.1, 10.1}});
    CHECK(silhouette(d, labels, euclidean_distance) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("silhouette with swapped members is negative") {
    const Vec x{0.0, 1.0, 10.0, 11.0};
    const std::vector<int> swapped{0, 1, 0, 1};
    const double s = silhouette(abs_distances(x), swapped);
    CHECK(s < 0.0);
    CHECK(s == doctest::Approx(direct_silhouette(x, swapped)).epsilon(1e-14));
}

TEST_CASE("silhouette of separated duplicates is one") {
    const Vec x{3.0, 3.0, 3.0, 50.0, 50.0};
    CHECK(silhouette(abs_distances(x), std::vector<int>{0, 0, 0, 1, 1}) > 0.99);
    CHECK(silhouette(abs_distances(x), std::vector<int>{0, 0, 0, 1, 1}) == 1.0);
    // A singleton contributes 0.
    const Vec y{0.0, 0.1, 10.0};
    CHECK(silhouette(abs_distances(y), std::vector<int>{0, 0, 1}) ==
          doctest::Approx(direct_silhouette(y, {0, 0, 1})).epsilon(1e-14));
}

TEST_CASE("silhouette errors") {
    const Vec x{0.0, 1.0, 2.0};
    CHECK_THROWS_AS(silhouette(abs_distances(x), std::vector<int>{0, 0, 0}), ParameterError);
    CHECK_THROWS_AS(silhouette(abs_distances(Vec{1.0}), std::vector<int>{0}), ParameterError);
    CHECK_THROWS_AS(silhouette(abs_distances(x), std::vector<int>{0, 1}), ParameterError);
}

TEST_CASE("silhouette properties") {
    std::mt19937_64 rng(131);
    std::uniform_real_distribution<double> u(-5.0, 5.0), scale(0.01, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        Vec x(12);
        for (auto& v : x) v = u(rng);
        auto labels = random_labels(rng, 12, 3);
        labels[0] = 0, labels[1] = 1, labels[2] = 2;
        const double s = silhouette(abs_distances(x), labels);
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
        CHECK(s == doctest::Approx(direct_silhouette(x, labels)).epsilon(1e-12));
        const double a = scale(rng);
        CHECK(std::abs(silhouette(a * abs_distances(x), labels) - s) < 1e-12);
    }

    // Soft-DTW distances can be negative; the score stays in range.
    std::vector<Vec> rows;
    for (int i = 0; i < 8; ++i) rows.push_back(oracle::random_series(rng, 6, 0.05));
    const auto d = points(rows);
    const std::vector<int> labels{0, 1, 0, 1, 0, 1, 0, 1};
    const double s = silhouette(d, labels, [](std::span<const double> a, std::span<const double> b) {
        return soft_dtw_value(a, b, 1.0);
    });
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
}

TEST_CASE("pairwise distances keep the diagonal") {
    const auto d = points({{0.0, 1.0}, {1.0, 0.0}});
    const auto m = pairwise_distances(d, [](std::span<const double> a, std::span<const double> b) {
        return soft_dtw_value(a, b, 1.0);
    });
    CHECK(m(0, 0) < 0.0);
    CHECK(m(0, 1) == doctest::Approx(m(1, 0)));
}

TEST_CASE("calinski_harabasz") {
    const std::vector<Vec> tight{{0.0, 0.0}, {0.1, 0.0}, {0.0, 0.1}, {10.0, 10.0}, {10.1, 10.0}, {10.0, 10.1}};
    const std::vector<int> labels{0, 0, 0, 1, 1, 1};
    const double ch = calinski_harabasz(points(tight), labels);
    CHECK(ch > 100.0);
    CHECK(ch == doctest::Approx(direct_ch(tight, labels)).epsilon(1e-12));

    const std::vector<Vec> dup{{1.0, 2.0}, {1.0, 2.0}, {5.0, 5.0}, {5.0, 5.0}};
    CHECK(std::isinf(calinski_harabasz(points(dup), std::vector<int>{0, 0, 1, 1})));

    CHECK_THROWS_AS(calinski_harabasz(points(tight), std::vector<int>(6, 0)), ParameterError);
    CHECK_THROWS_AS(calinski_harabasz(points(dup), std::vector<int>{0, 1, 2, 3}), ParameterError);
}

TEST_CASE("calinski_harabasz prefers the structured labels") {
    std::mt19937_64 rng(137);
    std::normal_distribution<double> noise(0.0, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec> rows;
        std::vector<int> truth;
        for (int i = 0; i < 15; ++i) {
            const int c = i % 3;
            rows.push_back({3.0 * c + noise(rng), -2.0 * c + noise(rng), noise(rng)});
            truth.push_back(c);
        }
        auto random = random_labels(rng, 15, 3);
        random[0] = 0, random[1] = 1, random[2] = 2;
        const auto d = points(rows);
        CHECK(calinski_harabasz(d, truth) >= calinski_harabasz(d, random));
        CHECK(calinski_harabasz(d, random) == doctest::Approx(direct_ch(rows, random)).epsilon(1e-10));
    }
}

TEST_CASE("adjusted_rand_index on small examples") {
    const std::vector<int> a{0, 0, 1, 1};
    CHECK(adjusted_rand_index(a, a) == 1.0);
    CHECK(adjusted_rand_index(a, std::vector<int>{1, 1, 0, 0}) == 1.0);
    CHECK(adjusted_rand_index(a, std::vector<int>{0, 1, 0, 1}) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(adjusted_rand_index(std::vector<int>{0, 0, 0}, std::vector<int>{1, 1, 1}) == 1.0);
    CHECK_THROWS_AS(adjusted_rand_index(a, std::vector<int>{0, 1}), ParameterError);
    CHECK_THROWS_AS(adjusted_rand_index(std::vector<int>{0}, std::vector<int>{0}), ParameterError);
}

TEST_CASE("adjusted_rand_index matches pair counting and is symmetric") {
    std::mt19937_64 rng(139);
    std::uniform_int_distribution<int> len(2, 30), kk(1, 5);
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = static_cast<std::size_t>(len(rng));
        const auto a = random_labels(rng, n, kk(rng)), b = random_labels(rng, n, kk(rng));
        const double ari = adjusted_rand_index(a, b);
        CHECK(ari == adjusted_rand_index(b, a));
        CHECK(ari <= 1.0);
        CHECK(std::abs(ari - oracle::brute_ari(a, b)) < 1e-12);
    }
}

TEST_CASE("adjusted_rand_index is one exactly for relabelings") {
    std::mt19937_64 rng(149);
    std::uniform_int_distribution<int> len(2, 12), kk(1, 4);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(len(rng));
        const int k = kk(rng);
        const auto a = random_labels(rng, n, k);
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> relabeled;
        for (int l : a) relabeled.push_back(perm[static_cast<std::size_t>(l)] + 7);
        CHECK(adjusted_rand_index(a, relabeled) == 1.0);

        // Converse: ARI of 1 implies some relabeling maps one to the other.
        const auto b = random_labels(rng, n, k);
        if (adjusted_rand_index(a, b) == 1.0) {
            bool equivalent = true;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) equivalent &= (a[i] == a[j]) == (b[i] == b[j]);
            CHECK(equivalent);
        }
    }
}

TEST_CASE("adjusted_rand_index of independent labelings averages zero") {
    std::mt19937_64 rng(151);
    double sum = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        sum += adjusted_rand_index(random_labels(rng, 48, 3), random_labels(rng, 48, 3));
    }
    CHECK(std::abs(sum / 1000.0) < 0.02);
}

TEST_CASE("agreement_matrix for identical labelings") {
    const std::vector<int> a{0, 1, 2, 0, 1, 2, 2};
    const auto r = agreement_matrix(a, a, ids_for(7));
    CHECK(r.contingency == std::vector<std::vector<int>>{{2, 0, 0}, {0, 2, 0}, {0, 0, 3}});
    CHECK(r.outliers.empty());
    CHECK(r.ari == 1.0);
    CHECK(r.coverage() == 1.0);
    const auto groups = consensus_groups(r);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0].count == 3);
    CHECK(groups[0].label_a == 2);
    CHECK(groups[1].label_a == 0);
    CHECK(groups[2].label_a == 1);
}

TEST_CASE("agreement_matrix with one defector") {
    const std::vector<int> a{0, 0, 0, 1, 1, 1};
    const std::vector<int> b{2, 2, 2, 0, 0, 2};
    const auto r = agreement_matrix(a, b, {"f", "e", "d", "c", "b", "a"});
    REQUIRE(r.outliers.size() == 1);
    CHECK(r.outliers[0] == "a");
    REQUIRE(r.consensus.size() == 2);
    CHECK(r.consensus[0].members == std::vector<std::string>{"d", "e", "f"});
    CHECK(r.consensus[0].label_b == 2);
    CHECK(r.consensus[1].members == std::vector<std::string>{"b", "c"});
    CHECK_THROWS_AS(agreement_matrix(a, b, {"x"}), ParameterError);
    CHECK_THROWS_AS(agreement_matrix(std::vector<int>{-1, 0}, std::vector<int>{0, 0}, {"x", "y"}), ParameterError);
}

TEST_CASE("empty intersection cells never become groups") {
    // Row 1 and column 1 only meet in an empty cell once the big cells are taken.
    const std::vector<int> a{0, 0, 0, 1};
    const std::vector<int> b{0, 0, 0, 0};
    const auto r = agreement_matrix(a, b, ids_for(4));
    const auto groups = consensus_groups(r);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].count == 3);
    for (const auto& g : groups) CHECK(g.count > 0);
}

TEST_CASE("greedy matching breaks ties by the lowest label pair") {
    const std::vector<int> a{0, 0, 1, 1};
    const std::vector<int> b{0, 1, 0, 1};
    const auto r = agreement_matrix(a, b, ids_for(4));
    REQUIRE(r.consensus.size() == 2);
    CHECK(r.consensus[0].label_a == 0);
    CHECK(r.consensus[0].label_b == 0);
    CHECK(r.consensus[1].label_a == 1);
    CHECK(r.consensus[1].label_b == 1);
}

TEST_CASE("agreement invariants on random labelings") {
    std::mt19937_64 rng(157);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 20;
        const auto a = random_labels(rng, n, 3), b = random_labels(rng, n, 4);
        const auto ids = ids_for(n);
        const auto r = agreement_matrix(a, b, ids);
        int total = 0;
        for (const auto& row : r.contingency) total += std::accumulate(row.begin(), row.end(), 0);
        CHECK(total == static_cast<int>(n));
        int covered = 0;
        double shares = 0.0;
        for (const auto& c : r.consensus) {
            covered += c.count;
            shares += c.share;
            CHECK(std::is_sorted(c.members.begin(), c.members.end()));
        }
        CHECK(shares <= 1.0 + 1e-12);
        CHECK(r.outliers.size() == n - static_cast<std::size_t>(covered));
        CHECK(std::is_sorted(r.outliers.begin(), r.outliers.end()));
        CHECK(r.ari == adjusted_rand_index(a, b));

        // Dropping one series decrements exactly one cell.
        const std::vector<int> a2(a.begin() + 1, a.end()), b2(b.begin() + 1, b.end());
        const auto r2 = agreement_matrix(a2, b2, std::vector<std::string>(ids.begin() + 1, ids.end()));
        int diff = 0;
        for (std::size_t i = 0; i < r2.contingency.size(); ++i)
            for (std::size_t j = 0; j < r2.contingency[i].size(); ++j)
                diff += r.contingency[i][j] - r2.contingency[i][j];
        CHECK(diff == 1);
        CHECK(r.contingency[static_cast<std::size_t>(a[0])][static_cast<std::size_t>(b[0])] -
                  r2.contingency[static_cast<std::size_t>(a[0])][static_cast<std::size_t>(b[0])] ==
              1);
    }
}

namespace {

// Builds labelings whose matched cells have the given sizes; the remaining
// series are spread so that none of them lands in a matched cell.
std::pair<std::vector<int>, std::vector<int>> shaped(const std::vector<int>& cells, int outliers) {
    std::vector<int> a, b;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (int i = 0; i < cells[c]; ++i) {
            a.push_back(static_cast<int>(c));
            b.push_back(static_cast<int>(c));
        }
    for (int i = 0; i < outliers; ++i) {
        a.push_back(i % 3);
        b.push_back((i % 3 + 1) % 3);
    }
    return {a, b};
}

}  // namespace

TEST_CASE("consensus shares on a 48-state panel round to 56/17/21 percent") {
    // 27 + 8 + 10 + 3 = 48; the 10-member cell is the "21%" group.
    const auto [a, b] = shaped({27, 8, 10}, 3);
    const auto r = agreement_matrix(a, b, ids_for(48));
    const auto groups = consensus_groups(r);
    REQUIRE(groups.size() == 3);
    CHECK(std::lround(100 * groups[0].share) == 56);
    CHECK(std::lround(100 * groups[1].share) == 21);
    CHECK(std::lround(100 * groups[2].share) == 17);
    CHECK(r.outliers.size() == 3);
}

TEST_CASE("consensus groups sized 27/9/8 leave three states ungrouped") {
    const auto [a, b] = shaped({27, 8, 9}, 3);
    const auto r = agreement_matrix(a, b, ids_for(47));
    const auto groups = consensus_groups(r);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0].count == 27);
    CHECK(groups[1].count == 9);
    CHECK(groups[2].count == 8);
    CHECK(r.outliers.size() == 3);
}
