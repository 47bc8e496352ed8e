#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tsclust {

/// One labeled, uniformly sampled real-valued sequence.
///
/// Construction validates the invariants: at least two samples, all finite.
/// Numeric kernels elsewhere in the library take `std::span<const double>`
/// and do not require a TimeSeries.
class TimeSeries {
public:
    TimeSeries(std::string id, std::vector<double> values);

    const std::string& id() const noexcept { return id_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::string id_;
    std::vector<double> values_;
};

/// Ordered collection of equal-length series with pairwise distinct ids.
class Dataset {
public:
    /// Throws ValidationError listing every violated invariant.
    explicit Dataset(std::vector<TimeSeries> series);

    std::size_t size() const noexcept { return series_.size(); }
    std::size_t length() const noexcept { return length_; }
    const TimeSeries& operator[](std::size_t i) const noexcept { return series_[i]; }
    const std::vector<TimeSeries>& series() const noexcept { return series_; }
    std::vector<std::string> ids() const;

    auto begin() const noexcept { return series_.begin(); }
    auto end() const noexcept { return series_.end(); }

private:
    std::vector<TimeSeries> series_;
    std::size_t length_ = 0;
};

/// Provenance of one z-normalization.
struct ScalingReport {
    std::string id;
    double mean = 0.0;
    double stddev = 0.0;  // population (divide-by-m)
    bool degenerate = false;
};

using RawSeries = std::pair<std::string, std::vector<double>>;

/// Builds a Dataset from untyped input. The expected length is taken from the
/// first series; every violation (empty input, short or ragged series,
/// non-finite values with positions, duplicate ids) is collected before throwing.
Dataset validate_dataset(const std::vector<RawSeries>& raw);

/// Mean 0 / population standard deviation 1 scaling. A series whose standard
/// deviation is below 1e-12 * max(1, |mean|) maps to all zeros with the
/// degenerate flag set.
std::pair<TimeSeries, ScalingReport> znormalize(const TimeSeries& series);

/// Span variant; throws ValidationError on non-finite input.
std::vector<double> znormalized(std::span<const double> values);

std::pair<Dataset, std::vector<ScalingReport>> normalize_dataset(const Dataset& dataset);

/// True when every series has |mean| <= tol and |std - 1| <= tol, or is all zeros.
bool is_znormalized(const Dataset& dataset, double tol = 1e-6);

}  // namespace tsclust
