#include "svg.hpp"

#include "tsclust/csv.hpp"
#include "tsclust/pipeline.hpp"
#include "tsclust/version.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numeric>
#include <system_error>

namespace tsclust {

namespace {

using nlohmann::json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json model_json(const ModelReport& r, DistanceBasis headline) {
    std::vector<int> sizes(static_cast<std::size_t>(r.model.k), 0);
    for (int l : r.model.labels) ++sizes[static_cast<std::size_t>(l)];
    json validity_notes = json::array();
    for (const auto* v : {&r.native, &r.flattened})
        for (const auto& d : v->diagnostics) validity_notes.push_back(std::string(to_string(v->basis)) + ": " + d);
    return {
        {"algorithm", std::string(to_string(r.model.algorithm))},
        {"k", r.model.k},
        {"inertia", finite_or_null(r.model.inertia)},
        {"iterations", r.model.iterations},
        {"converged", r.model.converged},
        {"seed", r.model.seed},
        {"restart", r.model.restart},
        {"cluster_sizes", sizes},
        {"silhouette", finite_or_null(r.headline(headline).silhouette)},
        {"silhouette_basis", std::string(to_string(headline))},
        {"silhouette_by_basis",
         {{std::string(to_string(DistanceBasis::Native)), finite_or_null(r.native.silhouette)},
          {std::string(to_string(DistanceBasis::FlattenedEuclidean)), finite_or_null(r.flattened.silhouette)}}},
        // Calinski-Harabasz is always computed on flattened vectors.
        {"calinski_harabasz", finite_or_null(r.flattened.calinski_harabasz)},
        {"calinski_harabasz_basis", std::string(to_string(DistanceBasis::FlattenedEuclidean))},
        {"diagnostics", r.model.diagnostics},
        {"validity_diagnostics", validity_notes},
    };
}

json config_json(const PipelineConfig& c) {
    return {
        {"input", c.input.string()},
        {"id_column", c.id_column},
        {"date_column", c.date_column},
        {"value_column", c.value_column},
        {"case_type_column", c.case_type_column},
        {"case_type", c.case_type},
        {"transform", std::string(to_string(c.transform))},
        {"k", c.k},
        {"gamma", c.gamma},
        {"n_init", c.n_init},
        {"kmeans_seed", c.kmeans_seed},
        {"kshape_seed", c.kshape_seed},
        {"kmeans_max_iter", c.kmeans_max_iter},
        {"kshape_max_iter", c.kshape_max_iter},
        {"tol", c.tol},
        {"barycenter_max_iter", c.barycenter_max_iter},
        {"silhouette_basis", std::string(to_string(c.silhouette_basis))},
    };
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << body;
    if (!out) throw std::runtime_error("failed while writing '" + path.string() + "'");
}

}  // namespace

std::string metrics_json(const RunReport& report) {
    const auto& data = report.data;
    json degenerate = json::array();
    for (const auto& s : data.scaling)
        if (s.degenerate) degenerate.push_back(s.id);

    json groups = json::array();
    for (const auto& g : consensus_groups(report.agreement)) {
        groups.push_back({{"kmeans_label", g.label_a},
                          {"kshape_label", g.label_b},
                          {"count", g.count},
                          {"share", g.share},
                          {"members", g.members}});
    }

    json doc = {
        {"tool", {{"name", "tsclust"}, {"version", std::string(kVersion)}}},
        {"config", config_json(report.config)},
        {"seeds", {{"kmeans", report.config.kmeans_seed}, {"kshape", report.config.kshape_seed}}},
        {"dataset",
         {{"n", data.normalized.size()},
          {"m", data.normalized.length()},
          {"first_date", data.dates.empty() ? "" : data.dates.front()},
          {"last_date", data.dates.empty() ? "" : data.dates.back()},
          {"transform", std::string(to_string(report.config.transform))},
          {"rows_read", data.rows_read},
          {"rows_kept", data.rows_kept},
          {"negative_clamps", data.negative_clamps},
          {"degenerate_series", degenerate},
          {"diagnostics", data.diagnostics}}},
        {"models",
         {{"kmeans", model_json(report.kmeans, report.config.silhouette_basis)},
          {"kshape", model_json(report.kshape, report.config.silhouette_basis)}}},
        {"agreement",
         {{"ari", report.agreement.ari},
          {"contingency", report.agreement.contingency},
          {"rows", "kmeans"},
          {"columns", "kshape"},
          {"consensus_groups", groups},
          {"coverage", report.agreement.coverage()},
          {"outliers", report.agreement.outliers}}},
    };
    return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_outputs(const RunReport& report, const std::filesystem::path& outdir) {
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec || !std::filesystem::is_directory(outdir)) {
        throw std::runtime_error("cannot create output directory '" + outdir.string() + "'" +
                                 (ec ? ": " + ec.message() : std::string()));
    }
    const Dataset& dataset = report.data.normalized;
    const auto ids = dataset.ids();
    std::vector<std::filesystem::path> manifest;

    std::string assignments = "id,kmeans_label,kshape_label,consensus_group\n";
    const auto groups = consensus_membership(report.agreement, ids);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        assignments += csv_field(ids[i]) + "," + std::to_string(report.kmeans.model.labels[i]) + "," +
                       std::to_string(report.kshape.model.labels[i]) + "," + std::to_string(groups[i]) + "\n";
    }
    manifest.push_back(outdir / "assignments.csv");
    write_file(manifest.back(), assignments);

    std::string centers = "algorithm,cluster,t,value\n";
    for (const auto* r : {&report.kmeans, &report.kshape}) {
        const std::string name(to_string(r->model.algorithm));
        for (std::size_t c = 0; c < r->model.centers.size(); ++c)
            for (std::size_t t = 0; t < r->model.centers[c].size(); ++t)
                centers += name + "," + std::to_string(c) + "," + std::to_string(t) + "," +
                           format_double(r->model.centers[c][t]) + "\n";
    }
    manifest.push_back(outdir / "centers.csv");
    write_file(manifest.back(), centers);

    manifest.push_back(outdir / "metrics.json");
    write_file(manifest.back(), metrics_json(report));

    manifest.push_back(outdir / "kmeans_clusters.svg");
    write_file(manifest.back(), svg::cluster_panels(dataset, report.kmeans.model,
                                                    "Soft-DTW k-means (gamma " + format_double(report.config.gamma) +
                                                        "), barycenters in red"));
    manifest.push_back(outdir / "kshape_clusters.svg");
    write_file(manifest.back(), svg::cluster_panels(dataset, report.kshape.model, "k-shape, centroids in red"));
    manifest.push_back(outdir / "agreement.svg");
    write_file(manifest.back(), svg::agreement_heatmap(report.agreement, "soft-DTW k-means cluster", "k-shape cluster"));
    return manifest;
}

}  // namespace tsclust
