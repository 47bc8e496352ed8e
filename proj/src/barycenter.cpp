#include "tsclust/barycenter.hpp"

#include "tsclust/errors.hpp"
#include "tsclust/softdtw.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tsclust {

namespace {

void check_members(std::span<const SeriesView> members, std::size_t length) {
    if (members.empty()) throw ParameterError("barycenter needs at least one member");
    for (const auto& m : members) {
        if (m.size() != length) {
            throw ParameterError("barycenter members must share length " + std::to_string(length));
        }
    }
}

double inf_norm(const std::vector<double>& v) {
    double out = 0.0;
    for (double x : v) out = std::max(out, std::abs(x));
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
    return out;
}

std::vector<SeriesView> views(const std::vector<std::vector<double>>& members) {
    return {members.begin(), members.end()};
}

/// Forward passes against every member, kept so the gradient can be formed
/// without re-running them once a trial point is accepted.
struct Evaluation {
    double value = 0.0;
    std::vector<SoftDtwEvaluation> passes;
};

Evaluation evaluate(SeriesView candidate, std::span<const SeriesView> members, double gamma) {
    Evaluation ev;
    ev.passes.reserve(members.size());
    for (const auto& m : members) {
        ev.passes.push_back(soft_dtw(candidate, m, gamma));
        ev.value += ev.passes.back().value;
    }
    return ev;
}

std::vector<double> gradient(const Evaluation& ev, SeriesView candidate,
                             std::span<const SeriesView> members) {
    std::vector<double> grad(candidate.size(), 0.0);
    for (std::size_t k = 0; k < members.size(); ++k) {
        const Eigen::MatrixXd e = expected_alignment(ev.passes[k]);
        const SeriesView y = members[k];
        for (Eigen::Index j = 0; j < e.cols(); ++j) {
            const double yj = y[static_cast<std::size_t>(j)];
            for (Eigen::Index i = 0; i < e.rows(); ++i) {
                const auto ii = static_cast<std::size_t>(i);
                grad[ii] += e(i, j) * 2.0 * (candidate[ii] - yj);
            }
        }
    }
    return grad;
}

}  // namespace

std::vector<double> euclidean_mean(std::span<const SeriesView> members) {
    if (members.empty()) throw ParameterError("mean of an empty member list");
    std::vector<double> mean(members.front().size(), 0.0);
    for (const auto& m : members) {
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += m[i];
    }
    for (double& v : mean) v /= static_cast<double>(members.size());
    return mean;
}

double frechet_variance(SeriesView candidate, std::span<const SeriesView> members, double gamma) {
    check_members(members, candidate.size());
    double total = 0.0;
    for (const auto& m : members) total += soft_dtw_value(candidate, m, gamma);
    return total;
}

double frechet_variance(SeriesView candidate, const std::vector<std::vector<double>>& members,
                        double gamma) {
    const auto v = views(members);
    return frechet_variance(candidate, std::span<const SeriesView>(v), gamma);
}

std::pair<double, std::vector<double>> frechet_variance_and_grad(
    SeriesView candidate, std::span<const SeriesView> members, double gamma) {
    check_members(members, candidate.size());
    if (!(gamma > 0.0)) throw ParameterError("barycenter gamma must be positive");
    const Evaluation ev = evaluate(candidate, members, gamma);
    return {ev.value, gradient(ev, candidate, members)};
}

BarycenterResult soft_dtw_barycenter(std::span<const SeriesView> members,
                                     const BarycenterOptions& options) {
    if (members.empty()) throw ParameterError("barycenter needs at least one member");
    const std::size_t length = members.front().size();
    check_members(members, length);
    if (!(options.gamma > 0.0) || !std::isfinite(options.gamma)) {
        throw ParameterError("barycenter gamma must be positive");
    }
    if (options.max_iter < 0) throw ParameterError("max_iter must be non-negative");

    BarycenterResult result;
    const bool all_same = std::all_of(members.begin(), members.end(), [&](SeriesView m) {
        return std::equal(m.begin(), m.end(), members.front().begin());
    });
    if (all_same) {
        result.center.assign(members.front().begin(), members.front().end());
        result.variance = frechet_variance(result.center, members, options.gamma);
        result.variance_trace = {result.variance};
        result.converged = true;
        return result;
    }

    std::vector<double> center;
    if (options.init) {
        if (options.init->size() != length) throw ParameterError("barycenter init has wrong length");
        center = *options.init;
    } else {
        center = euclidean_mean(members);
    }

    Evaluation current = evaluate(center, members, options.gamma);
    std::vector<double> grad = gradient(current, center, members);
    result.variance_trace.push_back(current.value);

    // Squared-Euclidean curvature is 2 per member; start from its inverse.
    double step = 1.0 / (2.0 * static_cast<double>(members.size()));
    std::vector<double> trial(length);
    for (int it = 0; it < options.max_iter; ++it) {
        if (inf_norm(grad) < options.tol) {
            result.converged = true;
            break;
        }
        const double gg = dot(grad, grad);
        bool accepted = false;
        Evaluation candidate;
        for (int halvings = 0; halvings < 60; ++halvings) {
            for (std::size_t i = 0; i < length; ++i) trial[i] = center[i] - step * grad[i];
            candidate = evaluate(trial, members, options.gamma);
            if (candidate.value <= current.value - options.armijo_c * step * gg) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> next_grad = gradient(candidate, trial, members);
        double ss = 0.0;
        double sy = 0.0;
        for (std::size_t i = 0; i < length; ++i) {
            const double s = trial[i] - center[i];
            ss += s * s;
            sy += s * (next_grad[i] - grad[i]);
        }
        step = sy > 0.0 ? ss / sy : 2.0 * step;

        center = trial;
        grad = std::move(next_grad);
        current = std::move(candidate);
        result.variance_trace.push_back(current.value);
        ++result.iterations;
    }
    if (!result.converged && inf_norm(grad) < options.tol) result.converged = true;

    result.center = std::move(center);
    result.variance = current.value;
    return result;
}

BarycenterResult soft_dtw_barycenter(const std::vector<std::vector<double>>& members,
                                     const BarycenterOptions& options) {
    const auto v = views(members);
    return soft_dtw_barycenter(std::span<const SeriesView>(v), options);
}

}  // namespace tsclust
