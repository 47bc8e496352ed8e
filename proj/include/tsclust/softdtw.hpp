#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace tsclust {

/// Pairwise squared-Euclidean ground cost, entry (i, j) = (x_i - y_j)^2.
struct CostMatrix {
    Eigen::MatrixXd entries;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(entries.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(entries.cols()); }
    double operator()(std::size_t i, std::size_t j) const {
        return entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
};

/// One monotone warping path from (0, 0) to (rows-1, cols-1), stored as its
/// ordered list of cells. Consecutive cells differ by (1,0), (0,1) or (1,1).
class AlignmentMatrix {
public:
    using Cell = std::pair<std::size_t, std::size_t>;

    AlignmentMatrix(std::size_t rows, std::size_t cols, std::vector<Cell> path);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const std::vector<Cell>& path() const noexcept { return path_; }

    /// Dense {0,1} matrix view.
    Eigen::MatrixXd dense() const;
    /// <A, cost>.
    double inner_product(const CostMatrix& cost) const;

    friend bool operator==(const AlignmentMatrix&, const AlignmentMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Cell> path_;
};

struct DtwResult {
    double value;
    AlignmentMatrix path;
};

/// Soft-DTW value plus the DP state needed for the backward pass.
struct SoftDtwEvaluation {
    double value;
    double gamma;
    CostMatrix cost;
    /// (t_x + 1) x (t_y + 1); row 0 and column 0 are +inf except forward(0, 0) = 0.
    Eigen::MatrixXd forward;
};

CostMatrix cost_matrix(std::span<const double> x, std::span<const double> y);

/// min^gamma: hard minimum for gamma == 0, otherwise -gamma * log sum exp(-a_i / gamma)
/// evaluated with a max shift. +inf entries contribute nothing.
double soft_min(std::span<const double> values, double gamma);

/// Classical DTW with one optimal path (ties prefer diagonal, then (i-1, j), then (i, j-1)).
DtwResult dtw(std::span<const double> x, std::span<const double> y);

/// Forward soft-DTW recursion. gamma == 0 runs the exact DTW recursion.
SoftDtwEvaluation soft_dtw(std::span<const double> x, std::span<const double> y, double gamma);

/// Convenience: soft_dtw(...).value.
double soft_dtw_value(std::span<const double> x, std::span<const double> y, double gamma);

/// Global alignment kernel, exp(-soft_dtw / gamma). Requires gamma > 0.
double gak(std::span<const double> x, std::span<const double> y, double gamma);

/// Expected alignment matrix under the Gibbs distribution over alignments,
/// obtained by the backward recursion on a retained forward table.
Eigen::MatrixXd expected_alignment(const SoftDtwEvaluation& eval);

/// d soft_dtw(x, y) / dx. Requires gamma > 0.
std::vector<double> soft_dtw_grad(std::span<const double> x, std::span<const double> y,
                                  double gamma);

/// d soft_dtw(x, y) / dy, through the transposed expected alignment.
std::vector<double> soft_dtw_grad_y(std::span<const double> x, std::span<const double> y,
                                    double gamma);

/// Value and x-gradient from a single forward pass.
std::pair<double, std::vector<double>> soft_dtw_value_and_grad(std::span<const double> x,
                                                               std::span<const double> y,
                                                               double gamma);

/// Every alignment matrix of the given shape, each exactly once. Both sizes
/// must be in [1, 8].
std::vector<AlignmentMatrix> enumerate_alignments(std::size_t rows, std::size_t cols);

}  // namespace tsclust
