#include "tsclust/errors.hpp"
#include "tsclust/kmeans.hpp"
#include "tsclust/kshape.hpp"
#include "tsclust/pipeline.hpp"
#include "tsclust/softdtw.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace tsclust {

std::string_view to_string(Transform transform) {
    return transform == Transform::Daily ? "daily" : "cumulative";
}

Transform parse_transform(std::string_view text) {
    if (text == "cumulative") return Transform::Cumulative;
    if (text == "daily") return Transform::Daily;
    throw ParameterError("transform must be 'cumulative' or 'daily', got '" + std::string(text) + "'");
}

DistanceBasis parse_distance_basis(std::string_view text) {
    if (text == "native") return DistanceBasis::Native;
    if (text == "flattened-euclidean") return DistanceBasis::FlattenedEuclidean;
    throw ParameterError("silhouette basis must be 'native' or 'flattened-euclidean', got '" +
                         std::string(text) + "'");
}

void PipelineConfig::validate() const {
    if (input.empty()) throw ParameterError("input path is empty");
    if (output_dir.empty()) throw ParameterError("output directory is empty");
    if (id_column.empty() || date_column.empty() || value_column.empty()) {
        throw ParameterError("id, date and value column names must be non-empty");
    }
    if (case_type_column.empty() != case_type.empty()) {
        throw ParameterError("case-type filtering needs both a column and a value");
    }
    if (k < 1) throw ParameterError("k must be at least 1");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("gamma must be positive");
    if (n_init < 1) throw ParameterError("n_init must be at least 1");
    if (kmeans_max_iter < 0 || kshape_max_iter < 0 || barycenter_max_iter < 0) {
        throw ParameterError("iteration limits must be non-negative");
    }
    if (!(tol >= 0.0)) throw ParameterError("tol must be non-negative");
    if (threads < 1) throw ParameterError("threads must be at least 1");
}

PipelineError::PipelineError(std::string stage, const std::string& what)
    : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

namespace {

ValidityReport score(const Dataset& dataset, std::span<const int> labels, DistanceBasis basis,
                     const PairDistance& native, int k) {
    ValidityReport r;
    r.basis = basis;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (k < 2) {
        r.silhouette = nan;
        r.diagnostics.push_back("silhouette is undefined for a single cluster");
    } else if (basis == DistanceBasis::Native) {
        r.silhouette = silhouette(pairwise_distances(dataset, native, true), labels);
    } else {
        r.silhouette = silhouette(pairwise_distances(dataset, euclidean_distance, true), labels);
    }
    if (k < 2 || static_cast<std::size_t>(k) >= dataset.size()) {
        r.calinski_harabasz = nan;
        r.diagnostics.push_back("Calinski-Harabasz needs 2 <= k < n");
    } else {
        r.calinski_harabasz = calinski_harabasz(dataset, labels);
        if (std::isinf(r.calinski_harabasz)) {
            r.diagnostics.push_back("within-cluster dispersion is zero; Calinski-Harabasz is +infinity");
        }
    }
    return r;
}

}  // namespace

ModelReport score_model(const Dataset& dataset, ClusterModel model, double gamma) {
    PairDistance native;
    if (model.algorithm == Algorithm::SoftDtwKMeans) {
        native = [gamma](std::span<const double> a, std::span<const double> b) { return soft_dtw_value(a, b, gamma); };
    } else {
        native = sbd_distance_or_unit;
    }
    ModelReport out{std::move(model), {}, {}};
    out.native = score(dataset, out.model.labels, DistanceBasis::Native, native, out.model.k);
    out.flattened = score(dataset, out.model.labels, DistanceBasis::FlattenedEuclidean, native, out.model.k);
    return out;
}

std::vector<int> consensus_membership(const AgreementReport& agreement, const std::vector<std::string>& ids) {
    std::map<std::string, int> group;
    const auto groups = consensus_groups(agreement);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const auto& id : groups[g].members) group[id] = static_cast<int>(g);
    std::vector<int> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        const auto it = group.find(id);
        out.push_back(it == group.end() ? -1 : it->second);
    }
    return out;
}

RunReport run_pipeline(const PipelineConfig& config) {
    std::string stage = "config";
    try {
        config.validate();

        stage = "ingest";
        IngestResult data = ingest_cases(config);
        const Dataset& dataset = data.normalized;

        stage = "kmeans";
        KMeansConfig km{.k = config.k,
                        .gamma = config.gamma,
                        .n_init = config.n_init,
                        .max_iter = config.kmeans_max_iter,
                        .tol = config.tol,
                        .seed = config.kmeans_seed,
                        .barycenter_max_iter = config.barycenter_max_iter,
                        .threads = config.threads};
        ClusterModel kmeans = fit_soft_dtw_kmeans(dataset, km);

        stage = "kshape";
        KShapeConfig ks{.k = config.k,
                        .n_init = config.n_init,
                        .max_iter = config.kshape_max_iter,
                        .tol = config.tol,
                        .seed = config.kshape_seed,
                        .threads = config.threads,
                        .extraction = {}};
        ClusterModel kshape = fit_kshape(dataset, ks);

        stage = "validation";
        ModelReport kmeans_report = score_model(dataset, std::move(kmeans), config.gamma);
        ModelReport kshape_report = score_model(dataset, std::move(kshape), config.gamma);

        stage = "agreement";
        AgreementReport agreement =
            agreement_matrix(kmeans_report.model.labels, kshape_report.model.labels, dataset.ids());

        RunReport report{config, std::move(data), std::move(kmeans_report), std::move(kshape_report),
                         std::move(agreement), {}};

        stage = "outputs";
        report.manifest = emit_outputs(report, config.output_dir);
        return report;
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(stage, e.what());
    }
}

}  // namespace tsclust
