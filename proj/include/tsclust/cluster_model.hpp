#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tsclust {

enum class Algorithm { SoftDtwKMeans, KShape };

std::string_view to_string(Algorithm algorithm);

/// Result of a clustering fit.
struct ClusterModel {
    Algorithm algorithm = Algorithm::SoftDtwKMeans;
    int k = 0;
    std::vector<int> labels;
    std::vector<std::vector<double>> centers;
    /// Sum over series of the distance to the assigned center.
    double inertia = 0.0;
    /// Inertia after every accepted round of the winning restart.
    std::vector<double> inertia_trace;
    int iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    /// Index of the restart that produced this model.
    int restart = 0;
    std::vector<std::string> diagnostics;
};

}  // namespace tsclust
