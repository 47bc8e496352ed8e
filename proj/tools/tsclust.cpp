// tsclust: cluster case-count panels with soft-DTW k-means and k-shape.

#include "tsclust/csv.hpp"
#include "tsclust/errors.hpp"
#include "tsclust/kshape.hpp"
#include "tsclust/pipeline.hpp"
#include "tsclust/softdtw.hpp"
#include "tsclust/validation.hpp"
#include "tsclust/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>

namespace {

using nlohmann::json;
using namespace tsclust;

constexpr const char* kOutputEnv = "TSCLUST_OUTPUT_DIR";

struct IngestFlags {
    std::string transform = "cumulative";
};

void add_ingest_options(CLI::App* cmd, PipelineConfig& c, IngestFlags& f) {
    cmd->add_option("--input,-i", c.input, "Long-format CSV with one row per id and date");
    cmd->add_option("--id-column", c.id_column, "Series id column")->capture_default_str();
    cmd->add_option("--date-column", c.date_column, "ISO-8601 date column")->capture_default_str();
    cmd->add_option("--value-column", c.value_column, "Case count column")->capture_default_str();
    cmd->add_option("--case-type-column", c.case_type_column, "Column used for row filtering");
    cmd->add_option("--case-type", c.case_type, "Keep rows whose case-type column has this value");
    cmd->add_option("--transform", f.transform, "cumulative or daily")
        ->check(CLI::IsMember({"cumulative", "daily"}))
        ->capture_default_str();
}

/// Applies `key = value` entries from a config file to options the command
/// line left unset, so explicit flags always win.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    CLI::ConfigTOML reader;
    std::vector<CLI::ConfigItem> items;
    try {
        items = reader.from_file(path);
    } catch (const CLI::FileError& e) {
        throw ParameterError(std::string("config file: ") + e.what());
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        std::string key = item.name;
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "config") throw ParameterError("config files cannot include other config files");
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr) throw ParameterError("config file: unknown key '" + item.name + "'");
        if (opt->count() > 0) continue;
        opt->add_result(item.inputs);
        opt->run_callback();
    }
}

std::string resolve_output_dir(CLI::Option* opt, const std::string& current) {
    if (opt->count() > 0) return current;
    if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0') return env;
    return current;
}

std::string number(double v) { return std::isfinite(v) ? format_double(v) : "n/a"; }

int run_cluster(const PipelineConfig& config) {
    const RunReport r = run_pipeline(config);
    const auto& d = r.data.normalized;
    std::cout << "series " << d.size() << ", length " << d.length();
    if (!r.data.dates.empty()) std::cout << ", " << r.data.dates.front() << " .. " << r.data.dates.back();
    std::cout << "\n";
    for (const auto& note : r.data.diagnostics) std::cout << "note: " << note << "\n";
    for (const auto* m : {&r.kmeans, &r.kshape}) {
        const auto& v = m->headline(config.silhouette_basis);
        std::cout << to_string(m->model.algorithm) << ": inertia " << number(m->model.inertia) << ", silhouette ("
                  << to_string(v.basis) << ") " << number(v.silhouette) << ", Calinski-Harabasz "
                  << number(m->flattened.calinski_harabasz) << "\n";
        for (const auto& note : m->model.diagnostics) std::cout << "note: " << note << "\n";
    }
    std::cout << "ARI " << number(r.agreement.ari) << ", consensus coverage " << number(r.agreement.coverage())
              << ", outliers " << r.agreement.outliers.size() << "\n";
    for (const auto& p : r.manifest) std::cout << "wrote " << p.string() << "\n";
    return 0;
}

/// Reads one integer label per id from `column` of a CSV.
std::map<std::string, int> read_labels(const std::string& path, const std::string& id_column,
                                       const std::string& column) {
    const CsvTable t = read_csv(path);
    const auto ic = t.column(id_column), lc = t.column(column);
    std::map<std::string, int> out;
    for (const auto& row : t.rows) {
        int v = 0;
        const auto& s = row[lc];
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size()) {
            throw ValidationError({path + ": label '" + s + "' for id '" + row[ic] + "' is not an integer"});
        }
        if (!out.emplace(row[ic], v).second) throw ValidationError({path + ": duplicate id '" + row[ic] + "'"});
    }
    return out;
}

std::vector<int> labels_for(const std::vector<std::string>& ids, const std::map<std::string, int>& table,
                            const std::string& source) {
    std::vector<int> out;
    for (const auto& id : ids) {
        const auto it = table.find(id);
        if (it == table.end()) throw ValidationError({source + " has no label for id '" + id + "'"});
        out.push_back(it->second);
    }
    return out;
}

PairDistance distance_named(const std::string& name, double gamma) {
    if (name == "softdtw")
        return [gamma](std::span<const double> a, std::span<const double> b) { return soft_dtw_value(a, b, gamma); };
    if (name == "sbd") return sbd_distance_or_unit;
    return euclidean_distance;
}

int run_metrics(const PipelineConfig& config, const std::string& labels_path, const std::string& id_column,
                const std::string& label_column, const std::string& distance) {
    const IngestResult data = ingest_cases(config);
    const Dataset& d = data.normalized;
    const auto labels = labels_for(d.ids(), read_labels(labels_path, id_column, label_column), labels_path);
    json out = {{"n", d.size()}, {"m", d.length()}, {"labels", label_column}, {"distance", distance}};
    out["silhouette"] = silhouette(pairwise_distances(d, distance_named(distance, config.gamma), true), labels);
    const double ch = calinski_harabasz(d, labels);
    out["calinski_harabasz"] = std::isfinite(ch) ? json(ch) : json(nullptr);
    if (distance == "softdtw") out["gamma"] = config.gamma;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_compare(const std::string& path_a, std::string path_b, const std::string& id_column,
                const std::string& column_a, const std::string& column_b) {
    if (path_b.empty()) path_b = path_a;
    const auto a = read_labels(path_a, id_column, column_a);
    const auto b = read_labels(path_b, id_column, column_b);
    std::vector<std::string> ids;
    for (const auto& [id, label] : a) ids.push_back(id);
    if (b.size() != a.size()) throw ValidationError({"the two label files cover different ids"});
    const auto la = labels_for(ids, a, path_a), lb = labels_for(ids, b, path_b);
    const AgreementReport r = agreement_matrix(la, lb, ids);
    json groups = json::array();
    for (const auto& g : consensus_groups(r)) {
        groups.push_back({{"label_a", g.label_a}, {"label_b", g.label_b}, {"count", g.count},
                          {"share", g.share}, {"members", g.members}});
    }
    const json out = {{"n", r.n},
                      {"ari", r.ari},
                      {"contingency", r.contingency},
                      {"consensus_groups", groups},
                      {"coverage", r.coverage()},
                      {"outliers", r.outliers}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

std::vector<double> numeric_column(const CsvTable& t, const std::string& name) {
    const auto c = t.column(name);
    std::vector<double> out;
    for (const auto& row : t.rows) {
        double v = 0.0;
        const auto& s = row[c];
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
            throw ValidationError({"column '" + name + "': '" + s + "' is not a finite number"});
        }
        out.push_back(v);
    }
    return out;
}

int run_distance(const std::string& path, const std::string& xcol, const std::string& ycol,
                 const std::string& metric, double gamma, bool normalize) {
    const CsvTable t = read_csv(path);
    auto x = numeric_column(t, xcol), y = numeric_column(t, ycol);
    if (normalize) {
        x = znormalized(x);
        y = znormalized(y);
    }
    json out = {{"metric", metric}, {"x", xcol}, {"y", ycol}, {"length", x.size()}};
    if (metric == "softdtw") {
        out["gamma"] = gamma;
        out["value"] = soft_dtw_value(x, y, gamma);
    } else if (metric == "dtw") {
        out["value"] = dtw(x, y).value;
    } else if (metric == "gak") {
        out["gamma"] = gamma;
        out["value"] = gak(x, y, gamma);
    } else {
        const SbdResult r = sbd(x, y);
        out["value"] = r.distance;
        out["shift"] = r.shift;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-series clustering with soft-DTW k-means and k-shape", "tsclust"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // cluster
    PipelineConfig cfg;
    IngestFlags cluster_ingest;
    std::string output_dir = cfg.output_dir.string();
    std::string basis = "flattened-euclidean";
    std::string cluster_config;
    std::uint64_t seed = 0;
    auto* cluster = app.add_subcommand("cluster", "Run the full pipeline and write every artifact");
    add_ingest_options(cluster, cfg, cluster_ingest);
    cluster->add_option("--k", cfg.k, "Number of clusters")->capture_default_str();
    cluster->add_option("--gamma", cfg.gamma, "Soft-DTW smoothing")->capture_default_str();
    cluster->add_option("--n-init", cfg.n_init, "Restarts per algorithm")->capture_default_str();
    auto* seed_opt = cluster->add_option("--seed", seed, "Seed for both algorithms");
    auto* kmeans_seed_opt = cluster->add_option("--kmeans-seed", cfg.kmeans_seed, "Seed for k-means");
    auto* kshape_seed_opt = cluster->add_option("--kshape-seed", cfg.kshape_seed, "Seed for k-shape");
    cluster->add_option("--kmeans-max-iter", cfg.kmeans_max_iter)->capture_default_str();
    cluster->add_option("--kshape-max-iter", cfg.kshape_max_iter)->capture_default_str();
    cluster->add_option("--tol", cfg.tol, "Relative inertia change that ends a restart")->capture_default_str();
    cluster->add_option("--barycenter-max-iter", cfg.barycenter_max_iter)->capture_default_str();
    cluster->add_option("--threads", cfg.threads, "Restarts run on this many threads")->capture_default_str();
    auto* out_opt = cluster->add_option("--output-dir,-o", output_dir,
                                        std::string("Artifact directory (default: $") + kOutputEnv + " or " +
                                            output_dir + ")");
    cluster->add_option("--silhouette-basis", basis, "Headline silhouette basis")
        ->check(CLI::IsMember({"native", "flattened-euclidean"}))
        ->capture_default_str();
    cluster->add_option("--config", cluster_config, "key = value file; flags override its entries");

    // metrics
    PipelineConfig mcfg;
    IngestFlags metrics_ingest;
    std::string labels_path, label_column = "label", label_id_column = "id", metric_distance = "euclidean";
    auto* metrics = app.add_subcommand("metrics", "Silhouette and Calinski-Harabasz for precomputed labels");
    add_ingest_options(metrics, mcfg, metrics_ingest);
    metrics->add_option("--labels", labels_path, "CSV with an id column and a label column")->required();
    metrics->add_option("--label-column", label_column)->capture_default_str();
    metrics->add_option("--labels-id-column", label_id_column)->capture_default_str();
    metrics->add_option("--distance", metric_distance, "Silhouette distance")
        ->check(CLI::IsMember({"euclidean", "softdtw", "sbd"}))
        ->capture_default_str();
    metrics->add_option("--gamma", mcfg.gamma, "Soft-DTW smoothing")->capture_default_str();

    // compare
    std::string cmp_a, cmp_b, cmp_id = "id", cmp_col_a = "kmeans_label", cmp_col_b = "kshape_label";
    auto* compare = app.add_subcommand("compare", "ARI and consensus groups between two labelings");
    compare->add_option("--a", cmp_a, "First label CSV")->required();
    compare->add_option("--b", cmp_b, "Second label CSV (default: the first)");
    compare->add_option("--id-column", cmp_id)->capture_default_str();
    compare->add_option("--column-a", cmp_col_a)->capture_default_str();
    compare->add_option("--column-b", cmp_col_b)->capture_default_str();

    // distance
    std::string dist_input, dist_x, dist_y, dist_metric = "softdtw";
    double dist_gamma = 0.1;
    bool dist_normalize = false;
    auto* distance = app.add_subcommand("distance", "One distance between two CSV columns");
    distance->add_option("--input,-i", dist_input)->required();
    distance->add_option("--x", dist_x, "First column")->required();
    distance->add_option("--y", dist_y, "Second column")->required();
    distance->add_option("--metric", dist_metric)
        ->check(CLI::IsMember({"softdtw", "dtw", "gak", "sbd"}))
        ->capture_default_str();
    distance->add_option("--gamma", dist_gamma)->capture_default_str();
    distance->add_flag("--znormalize", dist_normalize, "Z-normalize both columns first");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cluster->parsed()) {
            if (!cluster_config.empty()) apply_config_file(cluster, cluster_config);
            if (cfg.input.empty()) throw ParameterError("--input is required");
            cfg.transform = parse_transform(cluster_ingest.transform);
            cfg.silhouette_basis = parse_distance_basis(basis);
            if (seed_opt->count() > 0) {
                if (kmeans_seed_opt->count() == 0) cfg.kmeans_seed = seed;
                if (kshape_seed_opt->count() == 0) cfg.kshape_seed = seed;
            }
            cfg.output_dir = resolve_output_dir(out_opt, output_dir);
            return run_cluster(cfg);
        }
        if (metrics->parsed()) {
            if (mcfg.input.empty()) throw ParameterError("--input is required");
            mcfg.transform = parse_transform(metrics_ingest.transform);
            return run_metrics(mcfg, labels_path, label_id_column, label_column, metric_distance);
        }
        if (compare->parsed()) return run_compare(cmp_a, cmp_b, cmp_id, cmp_col_a, cmp_col_b);
        if (distance->parsed()) {
            return run_distance(dist_input, dist_x, dist_y, dist_metric, dist_gamma, dist_normalize);
        }
    } catch (const ValidationError& e) {
        std::cerr << "tsclust: invalid input\n";
        for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "tsclust: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
