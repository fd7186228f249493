#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conebary/io.hpp"
#include "conebary/karcher.hpp"
#include "conebary/solver.hpp"

namespace py = pybind11;
using namespace conebary;

namespace {

PointTuple make_tuple(const std::vector<Mat>& pts) {
    std::vector<PosDefMatrix> v;
    v.reserve(pts.size());
    for (const auto& p : pts) v.emplace_back(p);
    return PointTuple(std::move(v));
}

GroupRep make_rep(const std::vector<Mat>& gens, const std::string& name) {
    std::vector<InvertibleMatrix> v;
    v.reserve(gens.size());
    for (const auto& g : gens) v.emplace_back(g);
    return GroupRep(name, std::move(v));
}

GroupKind kind_of(const std::string& group) {
    if (group == "z") return GroupKind::Z;
    if (group == "z2" || group == "z3") return GroupKind::ZPow;
    if (group == "finite") return GroupKind::Finite;
    throw UnsupportedGroup("unknown group kind '" + group + "'");
}

py::dict report_dict(const FixedPointReport& r) {
    py::dict d;
    d["fixed_point"] = r.fixed_point.entries();
    d["normalized"] = r.normalized.entries();
    d["unitariser"] = r.unitariser.entries();
    d["residual"] = r.residual;
    d["size_measured"] = r.size_measured;
    d["rep_size"] = r.rep_size_value;
    d["size_bound"] = r.size_bound;
    d["distance_to_identity"] = r.distance_to_identity;
    d["orbit_diam"] = r.orbit_diam;
    d["xpi_margin"] = r.xpi_margin;
    d["schedule_index_reached"] = r.schedule_index_reached;
    d["converged"] = r.converged;
    py::list hist;
    for (const auto& row : r.history) {
        py::dict h;
        h["n"] = row.n;
        h["residual"] = row.residual;
        h["size"] = row.size;
        h["distance"] = row.distance;
        hist.append(std::move(h));
    }
    d["history"] = std::move(hist);
    return d;
}

}  // namespace

PYBIND11_MODULE(_conebary, m) {
    m.doc() = "positive-definite cone geometry: Thompson metric, barycenters, unitarisers";

    py::register_exception<Error>(m, "ConebaryError");

    m.def(
        "thompson_dist",
        [](const Mat& x, const Mat& y) {
            return thompson_dist(PosDefMatrix(x), PosDefMatrix(y));
        },
        py::arg("x"), py::arg("y"));

    m.def(
        "geodesic",
        [](const Mat& x, const Mat& y, double t) {
            return geodesic(PosDefMatrix(x), PosDefMatrix(y), t).entries();
        },
        py::arg("x"), py::arg("y"), py::arg("t"));

    m.def(
        "tuple_dist",
        [](const std::vector<Mat>& a, const std::vector<Mat>& b) {
            return tuple_dist(make_tuple(a), make_tuple(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "tuple_diam",
        [](const std::vector<Mat>& a) { return tuple_diam(make_tuple(a)); }, py::arg("a"));

    m.def(
        "barycenter",
        [](const std::vector<Mat>& pts, double collapse_tol, int max_rounds) {
            BarycenterConfig cfg;
            cfg.collapse_tol = collapse_tol;
            cfg.max_rounds = max_rounds;
            return barycenter(make_tuple(pts), cfg).entries();
        },
        py::arg("points"), py::arg("collapse_tol") = 0.0, py::arg("max_rounds") = 200);

    m.def(
        "karcher_mean",
        [](const std::vector<Mat>& pts, double tol, int max_iter) {
            return karcher_mean(pts, tol, max_iter);
        },
        py::arg("points"), py::arg("tol") = 1e-12, py::arg("max_iter") = 200);

    m.def(
        "circumcenter",
        [](const std::vector<Mat>& pts, double tol, int max_iter) {
            CircumConfig cfg;
            cfg.tol = tol;
            cfg.max_iter = max_iter;
            const CircumReport r = circumcenter_estimate(make_tuple(pts), cfg);
            return py::make_tuple(r.center_estimate.entries(), r.radius_estimate);
        },
        py::arg("points"), py::arg("tol") = 1e-6, py::arg("max_iter") = 2000);

    m.def(
        "rep_size",
        [](const std::vector<Mat>& gens, int radius) {
            const SizeEstimate est = rep_size(make_rep(gens, "py"), radius);
            py::dict d;
            d["value"] = est.value;
            d["radius"] = est.radius;
            d["history"] = est.history;
            d["plateau"] = est.plateau;
            d["suspected_unbounded"] = est.suspected_unbounded;
            return d;
        },
        py::arg("generators"), py::arg("radius") = 8);

    m.def(
        "rep_diam",
        [](const std::vector<Mat>& gens, int radius) {
            return rep_diam(make_rep(gens, "py"), radius);
        },
        py::arg("generators"), py::arg("radius") = 8);

    m.def(
        "solve_amenable",
        [](const std::vector<Mat>& gens, const std::string& group, double tol,
           int schedule_cap) {
            const GroupRep rep = make_rep(gens, "py");
            SolveConfig cfg;
            cfg.schedule_cap = schedule_cap;
            const GroupKind kind = kind_of(group);
            const int rank = group == "z2" ? 2 : (group == "z3" ? 3 : 1);
            return report_dict(solve_amenable(rep, folner_for(kind, rank), cfg, tol));
        },
        py::arg("generators"), py::arg("group") = "finite", py::arg("tol") = 1e-6,
        py::arg("schedule_cap") = 4096);

    m.def(
        "verify_unitariser",
        [](const std::vector<Mat>& gens, const Mat& s, int radius) {
            const UnitariserReport r =
                verify_unitariser(make_rep(gens, "py"), InvertibleMatrix(s), radius);
            return py::make_tuple(r.defect, r.size);
        },
        py::arg("generators"), py::arg("unitariser"), py::arg("radius") = 8);
}
