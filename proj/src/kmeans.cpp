#include "tsclust/kmeans.hpp"

#include "lloyd.hpp"
#include "tsclust/barycenter.hpp"
#include "tsclust/errors.hpp"
#include "tsclust/softdtw.hpp"

#include <algorithm>
#include <numeric>

namespace tsclust {

namespace {

// Rounds may raise inertia by at most this much before they are rejected;
// it absorbs the barycenter stopping tolerance.
constexpr double kRoundSlack = 1e-6;

ClusterModel fit_restart(const Dataset& dataset, const KMeansConfig& config, int restart) {
    const detail::DistanceFn dist = [gamma = config.gamma](std::span<const double> a,
                                                           std::span<const double> b) {
        return soft_dtw_value(a, b, gamma);
    };
    auto rng = detail::restart_engine(config.seed, restart);

    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    detail::Centers centers;
    for (int c = 0; c < config.k; ++c) centers.push_back(dataset[order[static_cast<std::size_t>(c)]].values());

    ClusterModel model;
    model.algorithm = Algorithm::SoftDtwKMeans;
    model.k = config.k;
    model.seed = config.seed;
    model.restart = restart;

    int repairs = 0;
    detail::Partition part = detail::assign_all(dataset, centers, dist);
    repairs += detail::repair_empty_clusters(dataset, config.k, part, centers, dist);
    double current = part.total();
    model.inertia_trace.push_back(current);

    BarycenterOptions bopts;
    bopts.gamma = config.gamma;
    bopts.max_iter = config.barycenter_max_iter;
    bopts.tol = config.barycenter_tol;

    for (int it = 0; it < config.max_iter; ++it) {
        detail::Centers next_centers(centers.size());
        for (int c = 0; c < config.k; ++c) {
            const auto idx = detail::members_of(part.labels, c);
            std::vector<std::span<const double>> members;
            for (auto i : idx) members.push_back(dataset[i].span());
            bopts.init = centers[static_cast<std::size_t>(c)];
            next_centers[static_cast<std::size_t>(c)] =
                soft_dtw_barycenter(std::span<const std::span<const double>>(members), bopts).center;
        }
        detail::Partition next = detail::assign_all(dataset, next_centers, dist);
        const int fixed = detail::repair_empty_clusters(dataset, config.k, next, next_centers, dist);
        const double next_inertia = next.total();
        if (next_inertia > current + kRoundSlack) break;

        repairs += fixed;
        const bool stable = next.labels == part.labels;
        const double improvement = detail::relative_improvement(current, next_inertia);
        centers = std::move(next_centers);
        part = std::move(next);
        current = next_inertia;
        model.inertia_trace.push_back(current);
        ++model.iterations;
        if (stable || improvement < config.tol) {
            model.converged = true;
            break;
        }
    }
    if (repairs > 0) {
        model.diagnostics.push_back("empty-cluster repairs: " + std::to_string(repairs));
    }
    model.labels = std::move(part.labels);
    model.centers = std::move(centers);
    model.inertia = current;
    return model;
}

}  // namespace

Assignment assign(std::span<const double> series, const std::vector<std::vector<double>>& centers,
                  double gamma) {
    if (centers.empty()) throw ParameterError("assign needs at least one center");
    Assignment best{0, 0.0};
    for (std::size_t c = 0; c < centers.size(); ++c) {
        if (centers[c].size() != series.size()) {
            throw ParameterError("center " + std::to_string(c) + " length does not match series");
        }
        const double d = soft_dtw_value(series, centers[c], gamma);
        if (c == 0 || d < best.distance) best = {static_cast<int>(c), d};
    }
    return best;
}

double inertia(const Dataset& dataset, const std::vector<int>& labels,
               const std::vector<std::vector<double>>& centers, double gamma) {
    if (labels.size() != dataset.size()) throw ParameterError("one label per series required");
    double total = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const int l = labels[i];
        if (l < 0 || static_cast<std::size_t>(l) >= centers.size()) {
            throw ParameterError("label " + std::to_string(l) + " out of range");
        }
        total += soft_dtw_value(dataset[i].span(), centers[static_cast<std::size_t>(l)], gamma);
    }
    return total;
}

ClusterModel fit_soft_dtw_kmeans(const Dataset& dataset, const KMeansConfig& config) {
    detail::check_k(dataset, config.k, config.n_init);
    if (!(config.gamma > 0.0)) throw ParameterError("k-means gamma must be positive");
    if (config.max_iter < 0) throw ParameterError("max_iter must be non-negative");

    ClusterModel best = detail::best_of_restarts(
        config.n_init, config.threads, [&](int r) { return fit_restart(dataset, config, r); });
    if (!is_znormalized(dataset)) {
        best.diagnostics.push_back("warning: input series are not z-normalized");
    }
    return best;
}

}  // namespace tsclust
