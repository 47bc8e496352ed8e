#include "tsclust/softdtw.hpp"

#include "tsclust/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace tsclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonempty(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw ParameterError("soft-DTW inputs must be non-empty");
}

void require_gamma(double gamma, bool allow_zero) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw ParameterError("gamma must be a finite non-negative number, got " +
                             std::to_string(gamma));
    }
    if (!allow_zero && gamma == 0.0) throw ParameterError("gamma must be strictly positive");
}

// The smallest argument contributes exp(0) = 1, so only two exponentials
// are needed per call.
inline double softmin3(double a, double b, double c, double inv_gamma, double gamma) {
    double lo = a, o1 = b, o2 = c;
    if (b < lo) std::swap(lo, o1);
    if (c < lo) std::swap(lo, o2);
    if (lo == kInf) return kInf;
    const double s = 1.0 + std::exp((lo - o1) * inv_gamma) + std::exp((lo - o2) * inv_gamma);
    return lo - gamma * std::log(s);
}

Eigen::MatrixXd forward_table(const CostMatrix& cost, double gamma) {
    const Eigen::Index n = cost.entries.rows();
    const Eigen::Index m = cost.entries.cols();
    Eigen::MatrixXd r = Eigen::MatrixXd::Constant(n + 1, m + 1, kInf);
    r(0, 0) = 0.0;
    const double inv_gamma = gamma > 0.0 ? 1.0 / gamma : 0.0;
    auto cell = [&](Eigen::Index i, Eigen::Index j) {
        const double up = r(i - 1, j);
        const double left = r(i, j - 1);
        const double diag = r(i - 1, j - 1);
        const double best = gamma == 0.0 ? std::min({up, left, diag})
                                         : softmin3(up, left, diag, inv_gamma, gamma);
        r(i, j) = cost.entries(i - 1, j - 1) + best;
    };
    // Each cell depends on the one above it, so a plain column sweep is bound
    // by exp/log latency. Sweeping kBand columns on a skewed front keeps
    // kBand independent chains in flight.
    constexpr Eigen::Index kBand = 4;
    for (Eigen::Index j0 = 1; j0 <= m; j0 += kBand) {
        const Eigen::Index width = std::min(kBand, m - j0 + 1);
        for (Eigen::Index t = 1; t <= n + width - 1; ++t) {
            for (Eigen::Index b = 0; b < width; ++b) {
                const Eigen::Index i = t - b;
                if (i >= 1 && i <= n) cell(i, j0 + b);
            }
        }
    }
    return r;
}

void enumerate_from(std::size_t i, std::size_t j, std::size_t rows, std::size_t cols,
                    std::vector<AlignmentMatrix::Cell>& path, std::vector<AlignmentMatrix>& out) {
    path.emplace_back(i, j);
    if (i + 1 == rows && j + 1 == cols) {
        out.emplace_back(rows, cols, path);
    } else {
        if (i + 1 < rows && j + 1 < cols) enumerate_from(i + 1, j + 1, rows, cols, path, out);
        if (i + 1 < rows) enumerate_from(i + 1, j, rows, cols, path, out);
        if (j + 1 < cols) enumerate_from(i, j + 1, rows, cols, path, out);
    }
    path.pop_back();
}

}  // namespace

AlignmentMatrix::AlignmentMatrix(std::size_t rows, std::size_t cols, std::vector<Cell> path)
    : rows_(rows), cols_(cols), path_(std::move(path)) {
    if (path_.empty() || path_.front() != Cell{0, 0} || path_.back() != Cell{rows - 1, cols - 1}) {
        throw ParameterError("alignment path must run from (0,0) to the opposite corner");
    }
    for (std::size_t k = 1; k < path_.size(); ++k) {
        const auto di = path_[k].first - path_[k - 1].first;
        const auto dj = path_[k].second - path_[k - 1].second;
        if (di > 1 || dj > 1 || (di == 0 && dj == 0)) {
            throw ParameterError("alignment path has an invalid step");
        }
    }
}

Eigen::MatrixXd AlignmentMatrix::dense() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_),
                                              static_cast<Eigen::Index>(cols_));
    for (const auto& [i, j] : path_) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    return a;
}

double AlignmentMatrix::inner_product(const CostMatrix& cost) const {
    double total = 0.0;
    for (const auto& [i, j] : path_) total += cost(i, j);
    return total;
}

CostMatrix cost_matrix(std::span<const double> x, std::span<const double> y) {
    require_nonempty(x, y);
    const auto n = static_cast<Eigen::Index>(x.size());
    const auto m = static_cast<Eigen::Index>(y.size());
    CostMatrix c{Eigen::MatrixXd(n, m)};
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)];
            c.entries(i, j) = d * d;
        }
    }
    return c;
}

double soft_min(std::span<const double> values, double gamma) {
    if (values.empty()) throw ParameterError("soft_min of an empty set");
    require_gamma(gamma, true);
    const double lo = *std::min_element(values.begin(), values.end());
    if (gamma == 0.0 || lo == kInf) return lo;
    double s = 0.0;
    for (double v : values) s += std::exp((lo - v) / gamma);
    return lo - gamma * std::log(s);
}

DtwResult dtw(std::span<const double> x, std::span<const double> y) {
    const CostMatrix cost = cost_matrix(x, y);
    const Eigen::MatrixXd r = forward_table(cost, 0.0);
    Eigen::Index i = r.rows() - 1;
    Eigen::Index j = r.cols() - 1;
    std::vector<AlignmentMatrix::Cell> path;
    while (true) {
        path.emplace_back(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
        if (i == 1 && j == 1) break;
        Eigen::Index ni = i - 1;
        Eigen::Index nj = j - 1;
        double best = r(i - 1, j - 1);
        if (r(i - 1, j) < best) {
            best = r(i - 1, j);
            ni = i - 1;
            nj = j;
        }
        if (r(i, j - 1) < best) {
            ni = i;
            nj = j - 1;
        }
        i = ni;
        j = nj;
    }
    std::reverse(path.begin(), path.end());
    return {r(r.rows() - 1, r.cols() - 1), AlignmentMatrix(x.size(), y.size(), std::move(path))};
}

SoftDtwEvaluation soft_dtw(std::span<const double> x, std::span<const double> y, double gamma) {
    require_gamma(gamma, true);
    CostMatrix cost = cost_matrix(x, y);
    Eigen::MatrixXd r = forward_table(cost, gamma);
    const double value = r(r.rows() - 1, r.cols() - 1);
    return {value, gamma, std::move(cost), std::move(r)};
}

double soft_dtw_value(std::span<const double> x, std::span<const double> y, double gamma) {
    return soft_dtw(x, y, gamma).value;
}

double gak(std::span<const double> x, std::span<const double> y, double gamma) {
    require_gamma(gamma, false);
    return std::exp(-soft_dtw_value(x, y, gamma) / gamma);
}

Eigen::MatrixXd expected_alignment(const SoftDtwEvaluation& eval) {
    require_gamma(eval.gamma, false);
    const double gamma = eval.gamma;
    const Eigen::Index n = eval.cost.entries.rows();
    const Eigen::Index m = eval.cost.entries.cols();

    // Padded copies: row n+1 and column m+1 hold -inf, except the far corner
    // which mirrors the final value so the recursion starts at weight 1.
    Eigen::MatrixXd r = Eigen::MatrixXd::Constant(n + 2, m + 2, -kInf);
    r.topLeftCorner(n + 1, m + 1) = eval.forward;
    r(n + 1, m + 1) = eval.forward(n, m);
    auto cost_at = [&](Eigen::Index i, Eigen::Index j) {
        return (i <= n && j <= m) ? eval.cost.entries(i - 1, j - 1) : 0.0;
    };

    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n + 2, m + 2);
    e(n + 1, m + 1) = 1.0;
    for (Eigen::Index j = m; j >= 1; --j) {
        for (Eigen::Index i = n; i >= 1; --i) {
            const double here = r(i, j);
            const double a = std::exp((r(i + 1, j) - here - cost_at(i + 1, j)) / gamma);
            const double b = std::exp((r(i, j + 1) - here - cost_at(i, j + 1)) / gamma);
            const double c = std::exp((r(i + 1, j + 1) - here - cost_at(i + 1, j + 1)) / gamma);
            e(i, j) = e(i + 1, j) * a + e(i, j + 1) * b + e(i + 1, j + 1) * c;
        }
    }
    return e.block(1, 1, n, m);
}

std::pair<double, std::vector<double>> soft_dtw_value_and_grad(std::span<const double> x,
                                                               std::span<const double> y,
                                                               double gamma) {
    require_gamma(gamma, false);
    const SoftDtwEvaluation eval = soft_dtw(x, y, gamma);
    const Eigen::MatrixXd e = expected_alignment(eval);
    std::vector<double> grad(x.size(), 0.0);
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
        const double yj = y[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < e.rows(); ++i) {
            grad[static_cast<std::size_t>(i)] += e(i, j) * 2.0 * (x[static_cast<std::size_t>(i)] - yj);
        }
    }
    return {eval.value, std::move(grad)};
}

std::vector<double> soft_dtw_grad(std::span<const double> x, std::span<const double> y,
                                  double gamma) {
    return soft_dtw_value_and_grad(x, y, gamma).second;
}

std::vector<double> soft_dtw_grad_y(std::span<const double> x, std::span<const double> y,
                                    double gamma) {
    return soft_dtw_value_and_grad(y, x, gamma).second;
}

std::vector<AlignmentMatrix> enumerate_alignments(std::size_t rows, std::size_t cols) {
    constexpr std::size_t kCap = 8;
    if (rows < 1 || cols < 1 || rows > kCap || cols > kCap) {
        throw ParameterError("enumerate_alignments sizes must lie in [1, 8]");
    }
    std::vector<AlignmentMatrix> out;
    std::vector<AlignmentMatrix::Cell> path;
    enumerate_from(0, 0, rows, cols, path, out);
    return out;
}

}  // namespace tsclust
