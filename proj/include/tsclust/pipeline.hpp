#pragma once

#include "tsclust/cluster_model.hpp"
#include "tsclust/timeseries.hpp"
#include "tsclust/validation.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsclust {

enum class Transform { Cumulative, Daily };

std::string_view to_string(Transform transform);
/// Accepts "cumulative" and "daily"; throws ParameterError otherwise.
Transform parse_transform(std::string_view text);
/// Accepts "native" and "flattened-euclidean".
DistanceBasis parse_distance_basis(std::string_view text);

struct PipelineConfig {
    std::filesystem::path input;
    std::string id_column = "state";
    std::string date_column = "date";
    std::string value_column = "cases";
    /// Rows are kept only when `case_type_column` equals `case_type`. Both
    /// empty means no filtering.
    std::string case_type_column;
    std::string case_type;
    Transform transform = Transform::Cumulative;

    int k = 3;
    double gamma = 0.1;
    int n_init = 16;
    std::uint64_t kmeans_seed = 0;
    std::uint64_t kshape_seed = 0;
    int kmeans_max_iter = 50;
    int kshape_max_iter = 100;
    double tol = 1e-6;
    int barycenter_max_iter = 100;
    int threads = 1;

    std::filesystem::path output_dir = "tsclust-out";
    /// Which silhouette is reported as the headline value; both are computed.
    DistanceBasis silhouette_basis = DistanceBasis::FlattenedEuclidean;

    /// Throws ParameterError naming the first bad field.
    void validate() const;
};

/// A failure inside run_pipeline, tagged with the stage that raised it
/// ("ingest", "kmeans", "kshape", "validation", "agreement", "outputs").
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string stage, const std::string& what);

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct IngestResult {
    /// Pivoted series before z-normalization, ids in ascending order.
    Dataset raw;
    Dataset normalized;
    std::vector<ScalingReport> scaling;
    /// Date axis of `raw` (after differencing, the dates of the differences).
    std::vector<std::string> dates;
    int rows_read = 0;
    /// Rows left after the case-type filter.
    int rows_kept = 0;
    int negative_clamps = 0;
    std::vector<std::string> diagnostics;
};

/// Long-format CSV (one row per id and date) to a normalized Dataset.
/// Duplicate (id, date) rows are summed, which aggregates sub-units such as
/// counties into their state. The date axis is every distinct observed date
/// inside the range all ids share; a missing date repeats the id's last
/// value. Throws ValidationError for malformed input.
IngestResult ingest_cases(const PipelineConfig& config);

/// Same, reading CSV text that is already in memory.
IngestResult ingest_cases_text(std::string_view csv_text, const PipelineConfig& config);

struct ModelReport {
    ClusterModel model;
    /// Silhouette under the clusterer's own distance (soft-DTW with the fit's
    /// gamma, or SBD) and under flattened Euclidean geometry.
    ValidityReport native;
    ValidityReport flattened;

    /// The report in the configured headline basis.
    const ValidityReport& headline(DistanceBasis basis) const {
        return basis == DistanceBasis::Native ? native : flattened;
    }
};

struct RunReport {
    PipelineConfig config;
    IngestResult data;
    ModelReport kmeans;
    ModelReport kshape;
    AgreementReport agreement;
    std::vector<std::filesystem::path> manifest;
};

/// Scores a model: both silhouettes and the Calinski-Harabasz index.
ModelReport score_model(const Dataset& dataset, ClusterModel model, double gamma);

/// Ingest, fit both models, score them, compare them and write every artifact.
/// Errors are rethrown as PipelineError naming the failing stage.
RunReport run_pipeline(const PipelineConfig& config);

/// Writes assignments.csv, centers.csv, metrics.json and the SVG figures into
/// `outdir` (created if needed) and returns their paths.
std::vector<std::filesystem::path> emit_outputs(const RunReport& report,
                                                const std::filesystem::path& outdir);

/// Metrics document with lexicographically ordered keys and no timestamps.
std::string metrics_json(const RunReport& report);

/// One consensus group index per series (position in consensus_groups order),
/// -1 for outliers.
std::vector<int> consensus_membership(const AgreementReport& agreement,
                                      const std::vector<std::string>& ids);

}  // namespace tsclust
