#pragma once

#include "tsclust/cluster_model.hpp"
#include "tsclust/timeseries.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tsclust {

/// Cross-correlation over every shift. Entry w (0-based) holds shift
/// s = w - (m - 1): for s >= 0 it is sum_l x[l + s] * y[l], and negative
/// shifts mirror the arguments, value(-s) = sum_l y[l + s] * x[l]. Equivalently,
/// the inner product of x with y moved right by s and zero padded.
struct CrossCorrelation {
    std::vector<double> values;

    std::size_t series_length() const noexcept { return (values.size() + 1) / 2; }
    int shift_at(std::size_t w) const noexcept {
        return static_cast<int>(w) - static_cast<int>(series_length()) + 1;
    }
};

/// Direct O(m^2) evaluation.
CrossCorrelation cross_correlation_naive(std::span<const double> x, std::span<const double> y);

/// FFT evaluation: zero-pad both inputs to the smallest power of two >= 2m - 1,
/// inverse-transform F(x) * conj(F(y)).
CrossCorrelation cross_correlation_fft(std::span<const double> x, std::span<const double> y);

struct SbdResult {
    /// 1 - max normalized cross-correlation, in [0, 2].
    double distance;
    /// Maximizing shift; ties prefer the smallest |s|, then negative s.
    int shift;
    /// y moved right by `shift` with zero padding, i.e. y aligned onto x.
    std::vector<double> aligned;
};

/// Shape-based distance. Throws DegenerateInputError if either input has zero norm.
SbdResult sbd(std::span<const double> x, std::span<const double> y);

/// `series` moved right by `shift` (left for negative), zero padded.
std::vector<double> shift_series(std::span<const double> series, int shift);

struct ShapeExtractionOptions {
    /// Above this length the principal eigenvector comes from power iteration.
    std::size_t dense_limit = 512;
    double power_tol = 1e-9;
    int power_max_iter = 1000;
};

/// Shape centroid: align members to `reference` by their SBD shift (no
/// alignment when the reference is all zeros), then return the z-normalized
/// principal eigenvector of Q S Q, where S is the Gram matrix of the aligned
/// members and Q the centering projector. The sign is chosen so the result
/// correlates non-negatively with the mean aligned member. Returns all zeros
/// when the aligned data has no variance.
std::vector<double> shape_extraction(std::span<const std::span<const double>> members,
                                     std::span<const double> reference,
                                     const ShapeExtractionOptions& options = {});
std::vector<double> shape_extraction(const std::vector<std::vector<double>>& members,
                                     std::span<const double> reference,
                                     const ShapeExtractionOptions& options = {});

struct KShapeConfig {
    int k = 3;
    int n_init = 16;
    int max_iter = 100;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    int threads = 1;
    ShapeExtractionOptions extraction;
};

/// SBD with the all-zero convention used during clustering: distance 1 when
/// either side has zero norm.
double sbd_distance_or_unit(std::span<const double> x, std::span<const double> y);

/// k-shape with random initial labels and n_init seeded restarts; lowest total
/// SBD wins. A round that would raise the inertia by more than 1e-9 is
/// rejected and ends the restart.
ClusterModel fit_kshape(const Dataset& dataset, const KShapeConfig& config);

}  // namespace tsclust
