#pragma once

#include "tsclust/cluster_model.hpp"
#include "tsclust/timeseries.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tsclust {

struct KMeansConfig {
    int k = 3;
    double gamma = 0.1;
    int n_init = 16;
    int max_iter = 50;
    /// Relative inertia improvement below which a restart stops.
    double tol = 1e-6;
    std::uint64_t seed = 0;
    /// Barycenter refit budget per round.
    int barycenter_max_iter = 100;
    double barycenter_tol = 1e-5;
    /// Worker threads for restarts; results do not depend on this.
    int threads = 1;
};

struct Assignment {
    int label;
    double distance;
};

/// Nearest center under soft-DTW; ties go to the lowest index.
Assignment assign(std::span<const double> series, const std::vector<std::vector<double>>& centers,
                  double gamma);

/// Sum of soft_dtw(x_i, centers[labels[i]]).
double inertia(const Dataset& dataset, const std::vector<int>& labels,
               const std::vector<std::vector<double>>& centers, double gamma);

/// Soft-DTW k-means with n_init seeded restarts; the lowest-inertia restart wins
/// (ties to the lower restart index).
ClusterModel fit_soft_dtw_kmeans(const Dataset& dataset, const KMeansConfig& config);

}  // namespace tsclust
