#include "tsclust/kshape.hpp"

#include "lloyd.hpp"
#include "tsclust/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

namespace tsclust {

namespace {

constexpr double kRoundSlack = 1e-9;

double squared_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double dot_at_shift(std::span<const double> x, std::span<const double> y, int shift) {
    const std::size_t m = x.size();
    const auto s = static_cast<std::size_t>(std::abs(shift));
    double total = 0.0;
    for (std::size_t l = 0; l + s < m; ++l) {
        total += shift >= 0 ? x[l + s] * y[l] : y[l + s] * x[l];
    }
    return total;
}

Eigen::VectorXd principal_direction(const Eigen::MatrixXd& centered,
                                    const Eigen::VectorXd& start,
                                    const ShapeExtractionOptions& options) {
    const Eigen::Index m = centered.cols();
    if (static_cast<std::size_t>(m) <= options.dense_limit) {
        const Eigen::MatrixXd gram = centered.transpose() * centered;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
        return solver.eigenvectors().col(m - 1);
    }
    Eigen::VectorXd v = start;
    for (int it = 0; it < options.power_max_iter; ++it) {
        Eigen::VectorXd next = centered.transpose() * (centered * v);
        const double norm = next.norm();
        if (norm == 0.0) break;
        next /= norm;
        const double change = (next - v).norm();
        v = std::move(next);
        if (change < options.power_tol) break;
    }
    return v;
}

}  // namespace

std::vector<double> shift_series(std::span<const double> series, int shift) {
    const auto m = static_cast<std::ptrdiff_t>(series.size());
    std::vector<double> out(series.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const std::ptrdiff_t src = i - shift;
        if (src >= 0 && src < m) out[static_cast<std::size_t>(i)] = series[static_cast<std::size_t>(src)];
    }
    return out;
}

SbdResult sbd(std::span<const double> x, std::span<const double> y) {
    const double denom = std::sqrt(squared_norm(x) * squared_norm(y));
    if (!(denom > 0.0)) throw DegenerateInputError("SBD is undefined for an all-zero series");
    const CrossCorrelation cc = cross_correlation_fft(x, y);

    const int m = static_cast<int>(x.size());
    // Visit shifts in tie-break order: 0, -1, +1, -2, +2, ...
    int best_shift = 0;
    double best = cc.values[static_cast<std::size_t>(m - 1)];
    for (int a = 1; a < m; ++a) {
        for (int s : {-a, a}) {
            const double v = cc.values[static_cast<std::size_t>(s + m - 1)];
            if (v > best) {
                best = v;
                best_shift = s;
            }
        }
    }
    const double ncc = std::clamp(dot_at_shift(x, y, best_shift) / denom, -1.0, 1.0);
    return {1.0 - ncc, best_shift, shift_series(y, best_shift)};
}

double sbd_distance_or_unit(std::span<const double> x, std::span<const double> y) {
    if (squared_norm(x) == 0.0 || squared_norm(y) == 0.0) return 1.0;
    return sbd(x, y).distance;
}

std::vector<double> shape_extraction(std::span<const std::span<const double>> members,
                                     std::span<const double> reference,
                                     const ShapeExtractionOptions& options) {
    if (members.empty()) throw ParameterError("shape extraction needs at least one member");
    const std::size_t m = reference.size();
    const bool align = squared_norm(reference) > 0.0;

    Eigen::MatrixXd aligned(static_cast<Eigen::Index>(members.size()), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < members.size(); ++r) {
        const auto& member = members[r];
        if (member.size() != m) throw ParameterError("shape extraction members must match the reference length");
        std::vector<double> row = (align && squared_norm(member) > 0.0)
                                      ? sbd(reference, member).aligned
                                      : std::vector<double>(member.begin(), member.end());
        for (std::size_t t = 0; t < m; ++t) aligned(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) = row[t];
    }

    const Eigen::VectorXd mean = aligned.colwise().mean().transpose();
    // X Q: every aligned row with its own mean removed.
    const Eigen::MatrixXd centered = aligned.colwise() - aligned.rowwise().mean();
    if (centered.squaredNorm() == 0.0) return std::vector<double>(m, 0.0);

    Eigen::VectorXd start = mean.array() - mean.mean();
    if (start.norm() == 0.0) {
        start = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(m), 0.0, 1.0);
        start.array() -= start.mean();
    }
    start.normalize();

    Eigen::VectorXd v = principal_direction(centered, start, options);
    if (v.dot(mean) < 0.0) v = -v;
    return znormalized(std::span<const double>(v.data(), m));
}

std::vector<double> shape_extraction(const std::vector<std::vector<double>>& members,
                                     std::span<const double> reference,
                                     const ShapeExtractionOptions& options) {
    std::vector<std::span<const double>> views(members.begin(), members.end());
    return shape_extraction(std::span<const std::span<const double>>(views), reference, options);
}

namespace {

ClusterModel fit_restart(const Dataset& dataset, const KShapeConfig& config, int restart) {
    const detail::DistanceFn dist = [](std::span<const double> a, std::span<const double> b) {
        return sbd_distance_or_unit(a, b);
    };
    auto rng = detail::restart_engine(config.seed, restart);
    std::uniform_int_distribution<int> pick(0, config.k - 1);

    detail::Partition part;
    part.labels.resize(dataset.size());
    for (auto& l : part.labels) l = pick(rng);
    // Random labels can leave a cluster empty; feed it from the largest cluster.
    std::vector<int> counts(static_cast<std::size_t>(config.k), 0);
    for (int l : part.labels) ++counts[static_cast<std::size_t>(l)];
    for (int c = 0; c < config.k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) continue;
        const int donor = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        const auto it = std::find(part.labels.begin(), part.labels.end(), donor);
        *it = c;
        --counts[static_cast<std::size_t>(donor)];
        ++counts[static_cast<std::size_t>(c)];
    }

    detail::Centers centers(static_cast<std::size_t>(config.k), std::vector<double>(dataset.length(), 0.0));
    double current = std::numeric_limits<double>::infinity();

    ClusterModel model;
    model.algorithm = Algorithm::KShape;
    model.k = config.k;
    model.seed = config.seed;
    model.restart = restart;
    bool assigned = false;
    int repairs = 0;

    for (int it = 0; it < config.max_iter; ++it) {
        detail::Centers next_centers(centers.size());
        for (int c = 0; c < config.k; ++c) {
            std::vector<std::span<const double>> members;
            for (auto i : detail::members_of(part.labels, c)) members.push_back(dataset[i].span());
            next_centers[static_cast<std::size_t>(c)] =
                shape_extraction(std::span<const std::span<const double>>(members),
                                 centers[static_cast<std::size_t>(c)], config.extraction);
        }
        detail::Partition next = detail::assign_all(dataset, next_centers, dist);
        const int fixed = detail::repair_empty_clusters(dataset, config.k, next, next_centers, dist);
        const double next_inertia = next.total();
        if (assigned && next_inertia > current + kRoundSlack) break;

        repairs += fixed;
        const bool stable = next.labels == part.labels;
        const double improvement = detail::relative_improvement(current, next_inertia);
        centers = std::move(next_centers);
        part = std::move(next);
        current = next_inertia;
        assigned = true;
        model.inertia_trace.push_back(current);
        ++model.iterations;
        if (stable || improvement < config.tol) {
            model.converged = true;
            break;
        }
    }
    if (!assigned) {
        // max_iter == 0: score the initial labels against their extracted shapes.
        for (int c = 0; c < config.k; ++c) {
            std::vector<std::span<const double>> members;
            for (auto i : detail::members_of(part.labels, c)) members.push_back(dataset[i].span());
            centers[static_cast<std::size_t>(c)] = shape_extraction(
                std::span<const std::span<const double>>(members), centers[static_cast<std::size_t>(c)],
                config.extraction);
        }
        current = 0.0;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            current += dist(dataset[i].span(), centers[static_cast<std::size_t>(part.labels[i])]);
        }
    }
    if (repairs > 0) model.diagnostics.push_back("empty-cluster repairs: " + std::to_string(repairs));
    model.labels = std::move(part.labels);
    model.centers = std::move(centers);
    model.inertia = current;
    return model;
}

}  // namespace

ClusterModel fit_kshape(const Dataset& dataset, const KShapeConfig& config) {
    detail::check_k(dataset, config.k, config.n_init);
    if (config.max_iter < 0) throw ParameterError("max_iter must be non-negative");

    ClusterModel best = detail::best_of_restarts(
        config.n_init, config.threads, [&](int r) { return fit_restart(dataset, config, r); });
    if (!is_znormalized(dataset)) {
        best.diagnostics.push_back("warning: input series are not z-normalized");
    }
    const auto zero = std::count_if(dataset.begin(), dataset.end(),
                                    [](const TimeSeries& s) { return squared_norm(s.span()) == 0.0; });
    if (zero > 0) {
        best.diagnostics.push_back(std::to_string(zero) +
                                   " all-zero series scored at distance 1 from every center");
    }
    return best;
}

}  // namespace tsclust
