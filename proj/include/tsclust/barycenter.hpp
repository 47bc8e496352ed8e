#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tsclust {

struct BarycenterOptions {
    double gamma = 0.1;
    int max_iter = 100;
    /// Stop once the gradient infinity-norm falls below this.
    double tol = 1e-5;
    /// Armijo sufficient-decrease constant.
    double armijo_c = 1e-4;
    /// Starting point; the elementwise mean of the members when empty.
    std::optional<std::vector<double>> init;
};

struct BarycenterResult {
    std::vector<double> center;
    double variance = 0.0;
    int iterations = 0;
    /// Objective at the initial point followed by one entry per accepted step.
    std::vector<double> variance_trace;
    /// Gradient infinity-norm fell below tol.
    bool converged = false;
};

using SeriesView = std::span<const double>;

/// Sum over members of soft_dtw(candidate, member, gamma).
double frechet_variance(SeriesView candidate, std::span<const SeriesView> members, double gamma);
double frechet_variance(SeriesView candidate, const std::vector<std::vector<double>>& members,
                        double gamma);

/// Objective value and its gradient with respect to the candidate.
std::pair<double, std::vector<double>> frechet_variance_and_grad(
    SeriesView candidate, std::span<const SeriesView> members, double gamma);

/// Soft-DTW barycenter by gradient descent with a halving Armijo line search.
/// The trial step of each iteration is the Barzilai-Borwein step from the
/// previous accepted move, so the accepted sequence is monotone in the objective.
/// Members that are all identical short-circuit to that series.
BarycenterResult soft_dtw_barycenter(std::span<const SeriesView> members,
                                     const BarycenterOptions& options = {});
BarycenterResult soft_dtw_barycenter(const std::vector<std::vector<double>>& members,
                                     const BarycenterOptions& options = {});

std::vector<double> euclidean_mean(std::span<const SeriesView> members);

}  // namespace tsclust
