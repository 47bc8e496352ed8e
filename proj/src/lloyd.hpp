#pragma once

// Pieces shared by the two k-means style fitters: seeding, nearest-center
// assignment, empty-cluster repair and restart selection.

#include "tsclust/cluster_model.hpp"
#include "tsclust/errors.hpp"
#include "tsclust/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace tsclust::detail {

using Centers = std::vector<std::vector<double>>;
using DistanceFn = std::function<double(std::span<const double>, std::span<const double>)>;

inline std::mt19937_64 restart_engine(std::uint64_t seed, int restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    return std::mt19937_64(seq);
}

inline void check_k(const Dataset& dataset, int k, int n_init) {
    if (k < 1) throw ParameterError("k must be at least 1");
    if (static_cast<std::size_t>(k) > dataset.size()) {
        throw ParameterError("k = " + std::to_string(k) + " exceeds the number of series (" +
                             std::to_string(dataset.size()) + ")");
    }
    if (n_init < 1) throw ParameterError("n_init must be at least 1");
}

struct Partition {
    std::vector<int> labels;
    std::vector<double> distances;

    double total() const {
        double s = 0.0;
        for (double d : distances) s += d;
        return s;
    }
};

/// Nearest center per series, ties to the lowest center index.
inline Partition assign_all(const Dataset& dataset, const Centers& centers, const DistanceFn& dist) {
    Partition p;
    p.labels.resize(dataset.size());
    p.distances.resize(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        int best = 0;
        double best_d = dist(dataset[i].span(), centers[0]);
        for (std::size_t c = 1; c < centers.size(); ++c) {
            const double d = dist(dataset[i].span(), centers[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        p.labels[i] = best;
        p.distances[i] = best_d;
    }
    return p;
}

/// Every empty cluster takes over the series farthest from its own center
/// (among series whose cluster would not become empty; ties to the lowest
/// index) and uses that series as its new center. Returns the number of repairs.
inline int repair_empty_clusters(const Dataset& dataset, int k, Partition& p, Centers& centers,
                                 const DistanceFn& dist) {
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int l : p.labels) ++counts[static_cast<std::size_t>(l)];
    int repairs = 0;
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) continue;
        std::size_t pick = dataset.size();
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (counts[static_cast<std::size_t>(p.labels[i])] < 2) continue;
            if (pick == dataset.size() || p.distances[i] > p.distances[pick]) pick = i;
        }
        --counts[static_cast<std::size_t>(p.labels[pick])];
        ++counts[static_cast<std::size_t>(c)];
        centers[static_cast<std::size_t>(c)] = dataset[pick].values();
        p.labels[pick] = c;
        p.distances[pick] = dist(dataset[pick].span(), centers[static_cast<std::size_t>(c)]);
        ++repairs;
    }
    return repairs;
}

inline std::vector<std::size_t> members_of(const std::vector<int>& labels, int cluster) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == cluster) out.push_back(i);
    }
    return out;
}

inline double relative_improvement(double previous, double current) {
    if (!std::isfinite(previous)) return std::numeric_limits<double>::infinity();
    return (previous - current) / std::max(std::abs(previous), 1e-300);
}

/// Runs `fit_one(restart)` for every restart, possibly on several threads, and
/// returns the lowest-inertia model (ties to the lowest restart index).
template <class FitOne>
ClusterModel best_of_restarts(int n_init, int threads, FitOne fit_one) {
    std::vector<ClusterModel> models(static_cast<std::size_t>(n_init));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_init));
    auto work = [&](int first, int stride) {
        for (int r = first; r < n_init; r += stride) {
            try {
                models[static_cast<std::size_t>(r)] = fit_one(r);
            } catch (...) {
                errors[static_cast<std::size_t>(r)] = std::current_exception();
            }
        }
    };
    const int workers = std::clamp(threads, 1, n_init);
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::size_t best = 0;
    for (std::size_t r = 1; r < models.size(); ++r) {
        if (models[r].inertia < models[best].inertia) best = r;
    }
    return std::move(models[best]);
}

}  // namespace tsclust::detail
