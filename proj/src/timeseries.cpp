#include "tsclust/timeseries.hpp"

#include "tsclust/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace tsclust {

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::ostringstream out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out << "; ";
        out << parts[i];
    }
    return out.str();
}

std::vector<std::size_t> nonfinite_positions(std::span<const double> values) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) bad.push_back(i);
    }
    return bad;
}

std::string describe_positions(const std::vector<std::size_t>& positions) {
    std::ostringstream out;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (i > 0) out << ',';
        out << positions[i];
    }
    return out.str();
}

struct Moments {
    double mean;
    double stddev;
};

Moments moments(std::span<const double> values) {
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / n)};
}

bool is_degenerate(const Moments& mo) {
    return mo.stddev < 1e-12 * std::max(1.0, std::abs(mo.mean));
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::invalid_argument("invalid input: " + join(violations)),
      violations_(std::move(violations)) {}

TimeSeries::TimeSeries(std::string id, std::vector<double> values)
    : id_(std::move(id)), values_(std::move(values)) {
    std::vector<std::string> problems;
    if (values_.size() < 2) {
        problems.push_back("series '" + id_ + "' has length " + std::to_string(values_.size()) +
                           " (need >= 2)");
    }
    if (auto bad = nonfinite_positions(values_); !bad.empty()) {
        problems.push_back("series '" + id_ + "' has non-finite values at positions " +
                           describe_positions(bad));
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

Dataset::Dataset(std::vector<TimeSeries> series) : series_(std::move(series)) {
    std::vector<std::string> problems;
    if (series_.empty()) {
        throw ValidationError({"dataset is empty"});
    }
    length_ = series_.front().size();
    std::set<std::string> seen;
    for (const auto& s : series_) {
        if (s.size() != length_) {
            problems.push_back("series '" + s.id() + "' has length " + std::to_string(s.size()) +
                               ", expected " + std::to_string(length_));
        }
        if (!seen.insert(s.id()).second) {
            problems.push_back("duplicate id '" + s.id() + "'");
        }
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::vector<std::string> Dataset::ids() const {
    std::vector<std::string> out;
    out.reserve(series_.size());
    for (const auto& s : series_) out.push_back(s.id());
    return out;
}

Dataset validate_dataset(const std::vector<RawSeries>& raw) {
    if (raw.empty()) throw ValidationError({"dataset is empty"});

    std::vector<std::string> problems;
    const std::size_t expected = raw.front().second.size();
    std::set<std::string> seen;
    for (const auto& [id, values] : raw) {
        if (values.size() < 2) {
            problems.push_back("series '" + id + "' has length " + std::to_string(values.size()) +
                               " (need >= 2)");
        }
        if (values.size() != expected) {
            problems.push_back("series '" + id + "' has length " + std::to_string(values.size()) +
                               ", expected " + std::to_string(expected));
        }
        if (auto bad = nonfinite_positions(values); !bad.empty()) {
            problems.push_back("series '" + id + "' has non-finite values at positions " +
                               describe_positions(bad));
        }
        if (!seen.insert(id).second) {
            problems.push_back("duplicate id '" + id + "'");
        }
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));

    std::vector<TimeSeries> series;
    series.reserve(raw.size());
    for (const auto& [id, values] : raw) series.emplace_back(id, values);
    return Dataset(std::move(series));
}

std::vector<double> znormalized(std::span<const double> values) {
    if (values.empty()) throw ValidationError({"cannot normalize an empty series"});
    if (auto bad = nonfinite_positions(values); !bad.empty()) {
        throw ValidationError({"non-finite values at positions " + describe_positions(bad)});
    }
    const Moments mo = moments(values);
    std::vector<double> out(values.size(), 0.0);
    if (is_degenerate(mo)) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mo.mean) / mo.stddev;
    return out;
}

std::pair<TimeSeries, ScalingReport> znormalize(const TimeSeries& series) {
    const Moments mo = moments(series.span());
    ScalingReport report{series.id(), mo.mean, mo.stddev, is_degenerate(mo)};
    return {TimeSeries(series.id(), znormalized(series.span())), report};
}

std::pair<Dataset, std::vector<ScalingReport>> normalize_dataset(const Dataset& dataset) {
    std::vector<TimeSeries> out;
    std::vector<ScalingReport> reports;
    out.reserve(dataset.size());
    reports.reserve(dataset.size());
    for (const auto& s : dataset) {
        try {
            auto [normed, report] = znormalize(s);
            out.push_back(std::move(normed));
            reports.push_back(std::move(report));
        } catch (const ValidationError& e) {
            std::vector<std::string> tagged;
            for (const auto& v : e.violations()) tagged.push_back("series '" + s.id() + "': " + v);
            throw ValidationError(std::move(tagged));
        }
    }
    return {Dataset(std::move(out)), std::move(reports)};
}

bool is_znormalized(const Dataset& dataset, double tol) {
    return std::all_of(dataset.begin(), dataset.end(), [tol](const TimeSeries& s) {
        const Moments mo = moments(s.span());
        const bool zero = std::all_of(s.values().begin(), s.values().end(),
                                      [](double v) { return v == 0.0; });
        return zero || (std::abs(mo.mean) <= tol && std::abs(mo.stddev - 1.0) <= tol);
    });
}

}  // namespace tsclust
