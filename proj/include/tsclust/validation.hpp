#pragma once

#include "tsclust/timeseries.hpp"

#include <Eigen/Core>

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsclust {

using PairDistance = std::function<double(std::span<const double>, std::span<const double>)>;

enum class DistanceBasis { Native, FlattenedEuclidean };

std::string_view to_string(DistanceBasis basis);

struct ValidityReport {
    double silhouette = 0.0;
    /// +infinity when the within-cluster dispersion is zero.
    double calinski_harabasz = 0.0;
    DistanceBasis basis = DistanceBasis::FlattenedEuclidean;
    std::vector<std::string> diagnostics;
};

/// Full n x n matrix of dist(x_i, x_j), diagonal included (soft-DTW has a
/// non-zero self-distance). With `symmetric`, only j >= i is evaluated and
/// mirrored.
Eigen::MatrixXd pairwise_distances(const Dataset& dataset, const PairDistance& dist,
                                   bool symmetric = false);

double euclidean_distance(std::span<const double> x, std::span<const double> y);

/// Mean silhouette. Intra-cluster means exclude the self pair; singleton
/// clusters score 0. Per-point scores are clamped to [-1, 1], which only
/// matters for distances that can be negative (soft-DTW).
double silhouette(const Eigen::MatrixXd& distances, std::span<const int> labels);
double silhouette(const Dataset& dataset, std::span<const int> labels, const PairDistance& dist);

/// Variance ratio criterion on the series as flat Euclidean vectors.
double calinski_harabasz(const Dataset& dataset, std::span<const int> labels);

/// Chance-corrected pair-counting agreement. Two trivial partitions (the
/// denominator vanishes) score 1.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

struct ConsensusCell {
    int label_a;
    int label_b;
    int count;
    double share;
    /// Alphabetical.
    std::vector<std::string> members;
};

struct AgreementReport {
    /// k_a x k_b co-assignment counts.
    std::vector<std::vector<int>> contingency;
    double ari = 0.0;
    /// Greedy largest-cell matching, one cell per row and column at most,
    /// in the order the cells were matched.
    std::vector<ConsensusCell> consensus;
    /// Ids outside every matched cell, alphabetical.
    std::vector<std::string> outliers;
    int n = 0;

    double coverage() const;
};

AgreementReport agreement_matrix(std::span<const int> a, std::span<const int> b,
                                 const std::vector<std::string>& ids);

/// Matched cells by descending size (ties to the lower label pair).
std::vector<ConsensusCell> consensus_groups(const AgreementReport& report);

}  // namespace tsclust
