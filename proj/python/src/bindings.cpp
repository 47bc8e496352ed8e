#include "tsclust/barycenter.hpp"
#include "tsclust/errors.hpp"
#include "tsclust/kmeans.hpp"
#include "tsclust/kshape.hpp"
#include "tsclust/pipeline.hpp"
#include "tsclust/softdtw.hpp"
#include "tsclust/timeseries.hpp"
#include "tsclust/validation.hpp"
#include "tsclust/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace tsclust;

namespace {

using Matrix = std::vector<std::vector<double>>;

Dataset make_dataset(const Matrix& values, std::optional<std::vector<std::string>> ids) {
    if (ids && ids->size() != values.size()) throw ParameterError("ids and values differ in length");
    std::vector<TimeSeries> series;
    for (std::size_t i = 0; i < values.size(); ++i) {
        series.emplace_back(ids ? (*ids)[i] : "s" + std::to_string(i), values[i]);
    }
    return Dataset(std::move(series));
}

py::dict model_dict(const ClusterModel& m) {
    py::dict d;
    d["algorithm"] = std::string(to_string(m.algorithm));
    d["k"] = m.k;
    d["labels"] = m.labels;
    d["centers"] = m.centers;
    d["inertia"] = m.inertia;
    d["inertia_trace"] = m.inertia_trace;
    d["iterations"] = m.iterations;
    d["converged"] = m.converged;
    d["seed"] = m.seed;
    d["restart"] = m.restart;
    d["diagnostics"] = m.diagnostics;
    return d;
}

py::dict agreement_dict(const AgreementReport& r) {
    py::list groups;
    for (const auto& g : consensus_groups(r)) {
        py::dict c;
        c["label_a"] = g.label_a;
        c["label_b"] = g.label_b;
        c["count"] = g.count;
        c["share"] = g.share;
        c["members"] = g.members;
        groups.append(c);
    }
    py::dict d;
    d["ari"] = r.ari;
    d["contingency"] = r.contingency;
    d["consensus_groups"] = groups;
    d["outliers"] = r.outliers;
    d["coverage"] = r.coverage();
    d["n"] = r.n;
    return d;
}

PairDistance named_distance(const std::string& name, double gamma) {
    if (name == "euclidean") return euclidean_distance;
    if (name == "sbd") return sbd_distance_or_unit;
    if (name == "softdtw")
        return [gamma](std::span<const double> a, std::span<const double> b) { return soft_dtw_value(a, b, gamma); };
    throw ParameterError("distance must be 'euclidean', 'sbd' or 'softdtw', got '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Soft-DTW k-means, k-shape and cluster validity measures";
    m.attr("__version__") = std::string(kVersion);

    m.def("soft_dtw", [](const std::vector<double>& x, const std::vector<double>& y,
                         double gamma) { return soft_dtw_value(x, y, gamma); },
          py::arg("x"), py::arg("y"), py::arg("gamma") = 0.1);
    m.def("soft_dtw_grad", [](const std::vector<double>& x, const std::vector<double>& y,
                              double gamma) { return soft_dtw_grad(x, y, gamma); },
          py::arg("x"), py::arg("y"), py::arg("gamma") = 0.1, "Gradient of soft-DTW with respect to x.");
    m.def("dtw", [](const std::vector<double>& x, const std::vector<double>& y) { return dtw(x, y).value; },
          py::arg("x"), py::arg("y"));
    m.def("gak", [](const std::vector<double>& x, const std::vector<double>& y,
                    double gamma) { return gak(x, y, gamma); },
          py::arg("x"), py::arg("y"), py::arg("gamma") = 0.1);

    m.def("cross_correlation", [](const std::vector<double>& x, const std::vector<double>& y) {
        return cross_correlation_fft(x, y).values;
    }, py::arg("x"), py::arg("y"), "Raw cross-correlation for shifts -(m-1)..(m-1).");
    m.def("sbd", [](const std::vector<double>& x, const std::vector<double>& y) {
        const SbdResult r = sbd(x, y);
        return py::make_tuple(r.distance, r.shift, r.aligned);
    }, py::arg("x"), py::arg("y"), "Returns (distance, shift, y aligned to x).");

    m.def("znormalize", [](const std::vector<double>& x) { return znormalized(x); }, py::arg("x"));

    m.def("barycenter", [](const Matrix& members, double gamma, int max_iter,
                           std::optional<std::vector<double>> init) {
        BarycenterOptions o;
        o.gamma = gamma;
        o.max_iter = max_iter;
        o.init = std::move(init);
        const BarycenterResult r = soft_dtw_barycenter(members, o);
        py::dict d;
        d["center"] = r.center;
        d["variance"] = r.variance;
        d["iterations"] = r.iterations;
        d["variance_trace"] = r.variance_trace;
        d["converged"] = r.converged;
        return d;
    }, py::arg("members"), py::arg("gamma") = 0.1, py::arg("max_iter") = 100, py::arg("init") = py::none());

    m.def("fit_soft_dtw_kmeans", [](const Matrix& values, int k, double gamma, int n_init, int max_iter,
                                    double tol, std::uint64_t seed, int barycenter_max_iter, int threads,
                                    std::optional<std::vector<std::string>> ids) {
        const Dataset d = make_dataset(values, std::move(ids));
        KMeansConfig c;
        c.k = k;
        c.gamma = gamma;
        c.n_init = n_init;
        c.max_iter = max_iter;
        c.tol = tol;
        c.seed = seed;
        c.barycenter_max_iter = barycenter_max_iter;
        c.threads = threads;
        py::gil_scoped_release release;
        ClusterModel model = fit_soft_dtw_kmeans(d, c);
        py::gil_scoped_acquire acquire;
        return model_dict(model);
    }, py::arg("values"), py::arg("k") = 3, py::arg("gamma") = 0.1, py::arg("n_init") = 16,
       py::arg("max_iter") = 50, py::arg("tol") = 1e-6, py::arg("seed") = 0, py::arg("barycenter_max_iter") = 100,
       py::arg("threads") = 1, py::arg("ids") = py::none());

    m.def("fit_kshape", [](const Matrix& values, int k, int n_init, int max_iter, double tol, std::uint64_t seed,
                           int threads, std::optional<std::vector<std::string>> ids) {
        const Dataset d = make_dataset(values, std::move(ids));
        KShapeConfig c;
        c.k = k;
        c.n_init = n_init;
        c.max_iter = max_iter;
        c.tol = tol;
        c.seed = seed;
        c.threads = threads;
        py::gil_scoped_release release;
        ClusterModel model = fit_kshape(d, c);
        py::gil_scoped_acquire acquire;
        return model_dict(model);
    }, py::arg("values"), py::arg("k") = 3, py::arg("n_init") = 16, py::arg("max_iter") = 100,
       py::arg("tol") = 1e-6, py::arg("seed") = 0, py::arg("threads") = 1, py::arg("ids") = py::none());

    m.def("silhouette", [](const Matrix& values, const std::vector<int>& labels, const std::string& distance,
                           double gamma) {
        const Dataset d = make_dataset(values, std::nullopt);
        return silhouette(pairwise_distances(d, named_distance(distance, gamma), true), labels);
    }, py::arg("values"), py::arg("labels"), py::arg("distance") = "euclidean", py::arg("gamma") = 0.1);
    m.def("calinski_harabasz", [](const Matrix& values, const std::vector<int>& labels) {
        return calinski_harabasz(make_dataset(values, std::nullopt), labels);
    }, py::arg("values"), py::arg("labels"));
    m.def("adjusted_rand_index", [](const std::vector<int>& a, const std::vector<int>& b) {
        return adjusted_rand_index(a, b);
    }, py::arg("a"), py::arg("b"));
    m.def("agreement", [](const std::vector<int>& a, const std::vector<int>& b,
                          std::optional<std::vector<std::string>> ids) {
        std::vector<std::string> names;
        if (ids) {
            names = std::move(*ids);
        } else {
            for (std::size_t i = 0; i < a.size(); ++i) names.push_back("s" + std::to_string(i));
        }
        return agreement_dict(agreement_matrix(a, b, names));
    }, py::arg("a"), py::arg("b"), py::arg("ids") = py::none());

    m.def("run_pipeline", [](const std::string& input, const std::string& output_dir, int k, double gamma,
                             int n_init, std::uint64_t seed, const std::string& transform, int barycenter_max_iter,
                             int threads, const std::string& silhouette_basis) {
        PipelineConfig c;
        c.input = input;
        c.output_dir = output_dir;
        c.k = k;
        c.gamma = gamma;
        c.n_init = n_init;
        c.kmeans_seed = c.kshape_seed = seed;
        c.transform = parse_transform(transform);
        c.barycenter_max_iter = barycenter_max_iter;
        c.threads = threads;
        c.silhouette_basis = parse_distance_basis(silhouette_basis);
        py::gil_scoped_release release;
        const RunReport r = run_pipeline(c);
        py::gil_scoped_acquire acquire;
        py::dict d;
        d["ids"] = r.data.normalized.ids();
        d["dates"] = r.data.dates;
        d["kmeans"] = model_dict(r.kmeans.model);
        d["kshape"] = model_dict(r.kshape.model);
        d["agreement"] = agreement_dict(r.agreement);
        std::vector<std::string> files;
        for (const auto& p : r.manifest) files.push_back(p.string());
        d["files"] = files;
        return d;
    }, py::arg("input"), py::arg("output_dir"), py::arg("k") = 3, py::arg("gamma") = 0.1, py::arg("n_init") = 16,
       py::arg("seed") = 0, py::arg("transform") = "cumulative", py::arg("barycenter_max_iter") = 100,
       py::arg("threads") = 1, py::arg("silhouette_basis") = "flattened-euclidean");
}
