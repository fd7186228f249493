#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conebary/io.hpp"
#include "conebary/karcher.hpp"
#include "conebary/solver.hpp"

namespace {

using conebary::io::fmt;
using json = nlohmann::json;

bool verbose() {
    const char* v = std::getenv("CONEBARY_LOG");
    return v != nullptr && std::string(v) != "" && std::string(v) != "0";
}

void log_line(const std::string& line) {
    if (verbose()) std::cerr << "[conebary] " << line << "\n";
}

void emit(const std::string& out_path, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        conebary::io::write_text(out_path, text);
    }
}

conebary::GroupKind parse_group(const std::string& name, int& rank) {
    if (name == "z") {
        rank = 1;
        return conebary::GroupKind::Z;
    }
    if (name == "z2" || name == "z3") {
        rank = name == "z2" ? 2 : 3;
        return conebary::GroupKind::ZPow;
    }
    if (name == "finite") {
        rank = 1;
        return conebary::GroupKind::Finite;
    }
    throw conebary::UnsupportedGroup("unknown group kind '" + name +
                                     "' (expected z, z2, z3, finite)");
}

std::vector<conebary::Word> parse_word_list(const json& j, const std::string& context) {
    if (!j.is_array()) throw conebary::ParseError(context + ": expected an array of words");
    std::vector<conebary::Word> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        out.push_back(conebary::io::parse_word(j[i], context + "[" + std::to_string(i) + "]"));
    }
    return out;
}

struct UnitariseArgs {
    std::string rep_path;
    std::string mode = "amenable";
    std::string group = "z";
    std::string aux_path;
    std::string out_path;
    std::string history_path;
    double tol = 1e-6;
    double defect_tol = 0.0;  // 0 selects 10 * tol
    int schedule_cap = 4096;
    int radius = 8;
    int max_rounds = 200;
};

int run_unitarise(const UnitariseArgs& args) {
    const conebary::GroupRep rep = conebary::io::read_rep(args.rep_path);
    conebary::SolveConfig cfg;
    cfg.schedule_cap = args.schedule_cap;
    cfg.bary.max_rounds = args.max_rounds;

    conebary::FixedPointReport report = [&] {
        if (args.mode == "amenable") {
            int rank = 1;
            const conebary::GroupKind kind = parse_group(args.group, rank);
            return conebary::solve_amenable(rep, conebary::folner_for(kind, rank), cfg,
                                            args.tol);
        }
        if (args.aux_path.empty()) {
            throw conebary::ParseError("mode '" + args.mode + "' needs --aux");
        }
        const json aux = conebary::io::load_json_file(args.aux_path);
        if (args.mode == "promote") {
            const auto sub_gens =
                parse_word_list(aux.at("subgroup_gens"), args.aux_path + ": subgroup_gens");
            const auto cosets =
                parse_word_list(aux.at("coset_reps"), args.aux_path + ": coset_reps");
            conebary::PosDefMatrix fixed = [&] {
                if (aux.contains("subgroup_fixed")) {
                    return conebary::PosDefMatrix(conebary::io::parse_matrix(
                        aux.at("subgroup_fixed"), args.aux_path + ": subgroup_fixed"));
                }
                // No precomputed point: solve the subgroup first.
                std::vector<conebary::InvertibleMatrix> gens;
                for (const auto& w : sub_gens) {
                    gens.emplace_back(conebary::evaluate_word(rep, w));
                }
                conebary::GroupRep sub(rep.name() + "_sub", std::move(gens));
                int rank = 1;
                const conebary::GroupKind kind = parse_group(
                    aux.value("subgroup_group", std::string("finite")), rank);
                return conebary::solve_amenable(sub, conebary::folner_for(kind, rank), cfg,
                                                args.tol)
                    .fixed_point;
            }();
            return conebary::promote_finite_index(rep, fixed, sub_gens, cosets, cfg);
        }
        if (args.mode == "extension") {
            conebary::ExtensionSpec ext;
            ext.normal_gens =
                parse_word_list(aux.at("normal_gens"), args.aux_path + ": normal_gens");
            ext.section_words =
                parse_word_list(aux.at("section_words"), args.aux_path + ": section_words");
            int rank = 1;
            const conebary::GroupKind sub_kind = parse_group(
                aux.value("subgroup_group", std::string("finite")), rank);
            ext.subgroup_schedule = conebary::folner_for(sub_kind, rank);
            const conebary::GroupKind q_kind = parse_group(
                aux.value("quotient_group", std::string("finite")), rank);
            ext.quotient_schedule = conebary::folner_for(q_kind, rank);
            ext.subgroup_bound.K = aux.value("subgroup_K", 1.0);
            ext.subgroup_bound.alpha = aux.value("subgroup_alpha", 2.0);
            // The certificate constants degrade across the extension:
            // s(S) <= K' |pi|^(alpha'+2).
            cfg.bound.K = ext.subgroup_bound.K;
            cfg.bound.alpha = ext.subgroup_bound.alpha + 2.0;
            return conebary::solve_extension(rep, ext, cfg, args.tol);
        }
        throw conebary::ParseError("unknown mode '" + args.mode +
                                   "' (expected amenable, promote, extension)");
    }();

    const conebary::SizeEstimate size_est =
        conebary::rep_size(rep, cfg.size_radius, cfg.schedule_cap);
    const conebary::UnitariserReport defect_report =
        conebary::verify_unitariser(rep, report.unitariser, args.radius, cfg.schedule_cap);
    const conebary::CertificateResult cert = conebary::bound_certificate(report, cfg.bound);

    json out = conebary::io::report_json(report, size_est.history);
    out["unitariser_defect"] = conebary::io::round_real(defect_report.defect);
    out["certificate_margin"] = conebary::io::round_real(cert.margin);
    out["certificate_holds"] = cert.holds;
    emit(args.out_path, out);
    if (!args.history_path.empty()) {
        conebary::io::write_text(args.history_path, conebary::io::history_csv(report.history));
    }

    const double defect_tol = args.defect_tol > 0.0 ? args.defect_tol : 10.0 * args.tol;
    std::cout << "residual " << fmt(report.residual) << " (target " << fmt(args.tol)
              << ")\n";
    std::cout << "unitariser defect " << fmt(defect_report.defect) << " (target "
              << fmt(defect_tol) << ")\n";
    std::cout << "size " << fmt(report.size_measured) << ", bound "
              << fmt(report.size_bound) << ", certificate margin " << fmt(cert.margin)
              << "\n";
    const bool ok = report.converged && report.residual <= args.tol &&
                    defect_report.defect <= defect_tol && cert.holds;
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"positive-definite cone geometry and group unitarisation toolkit"};
    app.require_subcommand(1);
    unsigned long long seed = 0;  // reserved: all bundled sampling is deterministic
    app.add_option("--seed", seed, "sampling seed (reserved; runs are deterministic)");

    std::string x_path, y_path, out_path, trace_path;
    double t = 0.5, tol = 1e-6;
    int radius = 8, max_rounds = 200, schedule_cap = 4096;

    auto* dist = app.add_subcommand("dist", "Thompson distance between two matrices");
    dist->add_option("x", x_path)->required();
    dist->add_option("y", y_path)->required();
    dist->add_option("--out", out_path);

    auto* geo = app.add_subcommand("geodesic", "geodesic point eta(x, y, t)");
    geo->add_option("x", x_path)->required();
    geo->add_option("y", y_path)->required();
    geo->add_option("--t", t)->required();
    geo->add_option("--out", out_path);

    auto* bary = app.add_subcommand("barycenter", "tuple barycenter with convergence trace");
    bary->add_option("tuple", x_path)->required();
    bary->add_option("--tol", tol);
    bary->add_option("--max-rounds", max_rounds);
    bary->add_option("--out", out_path);
    bary->add_option("--trace", trace_path, "CSV of (round, tuple_diam)");

    auto* circ = app.add_subcommand("circumcenter", "circumcenter estimate of a tuple");
    circ->add_option("tuple", x_path)->required();
    circ->add_option("--tol", tol);
    circ->add_option("--out", out_path);

    auto* rsize = app.add_subcommand("rep-size", "|pi| sampled on word balls");
    rsize->add_option("rep", x_path)->required();
    rsize->add_option("--radius", radius);
    rsize->add_option("--schedule-cap", schedule_cap);
    rsize->add_option("--out", out_path);

    auto* rdiam = app.add_subcommand("rep-diam", "orbit diameter of the identity");
    rdiam->add_option("rep", x_path)->required();
    rdiam->add_option("--radius", radius);
    rdiam->add_option("--schedule-cap", schedule_cap);
    rdiam->add_option("--out", out_path);

    UnitariseArgs uargs;
    auto* unit = app.add_subcommand("unitarise", "solve for a fixed point and unitariser");
    unit->add_option("rep", uargs.rep_path)->required();
    unit->add_option("--mode", uargs.mode, "amenable | promote | extension");
    unit->add_option("--group", uargs.group, "z | z2 | z3 | finite");
    unit->add_option("--aux", uargs.aux_path, "auxiliary words/fixed-point JSON");
    unit->add_option("--tol", uargs.tol);
    unit->add_option("--defect-tol", uargs.defect_tol);
    unit->add_option("--schedule-cap", uargs.schedule_cap);
    unit->add_option("--radius", uargs.radius, "verification ball radius");
    unit->add_option("--max-rounds", uargs.max_rounds);
    unit->add_option("--out", uargs.out_path);
    unit->add_option("--history", uargs.history_path, "CSV of (n, residual, size, distance)");

    double cert_k = 1.0, cert_alpha = 2.0;
    auto* verify = app.add_subcommand("verify", "unitariser defect and size certificate");
    verify->add_option("rep", x_path)->required();
    verify->add_option("unitariser", y_path)->required();
    verify->add_option("--radius", radius);
    verify->add_option("--tol", tol);
    verify->add_option("--K", cert_k);
    verify->add_option("--alpha", cert_alpha);
    verify->add_option("--out", out_path);

    auto* interp = app.add_subcommand("interpolate", "conjugation path pi_t toward unitarity");
    interp->add_option("rep", x_path)->required();
    interp->add_option("s", y_path, "positive definite conjugator")->required();
    interp->add_option("--t", t)->required();
    interp->add_option("--radius", radius);
    interp->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*dist) {
            const conebary::PosDefMatrix x = conebary::io::read_posdef(x_path);
            const conebary::PosDefMatrix y = conebary::io::read_posdef(y_path);
            const conebary::DistWithSpectrum d = conebary::thompson_dist_full(x, y);
            std::cout << "d = " << fmt(d.dist) << "\nrelative spectrum:";
            json spec = json::array();
            for (Eigen::Index i = 0; i < d.relative_spectrum.size(); ++i) {
                std::cout << " " << fmt(d.relative_spectrum(i));
                spec.push_back(conebary::io::round_real(d.relative_spectrum(i)));
            }
            std::cout << "\n";
            if (!out_path.empty()) {
                emit(out_path, json{{"distance", conebary::io::round_real(d.dist)},
                                    {"relative_spectrum", std::move(spec)}});
            }
            return 0;
        }
        if (*geo) {
            const conebary::PosDefMatrix x = conebary::io::read_posdef(x_path);
            const conebary::PosDefMatrix y = conebary::io::read_posdef(y_path);
            const conebary::PosDefMatrix z = conebary::geodesic(x, y, t);
            emit(out_path, conebary::io::matrix_json(z.entries()));
            return 0;
        }
        if (*bary) {
            const conebary::PointTuple tuple(conebary::io::read_tuple(x_path));
            conebary::BarycenterConfig cfg;
            cfg.collapse_tol = tol;
            cfg.max_rounds = max_rounds;
            std::vector<conebary::BarycenterTraceRow> trace;
            const conebary::PosDefMatrix b = conebary::barycenter_traced(tuple, trace, cfg);
            log_line("barycenter collapsed in " + std::to_string(trace.back().round) +
                     " rounds");
            emit(out_path, conebary::io::matrix_json(b.entries()));
            if (!trace_path.empty()) {
                conebary::io::write_text(trace_path, conebary::io::trace_csv(trace));
            }
            return 0;
        }
        if (*circ) {
            const conebary::PointTuple tuple(conebary::io::read_tuple(x_path));
            conebary::CircumConfig cfg;
            cfg.tol = tol;
            const conebary::CircumReport r = conebary::circumcenter_estimate(tuple, cfg);
            std::cout << "radius " << fmt(r.radius_estimate) << " after "
                      << r.iterations << " iterations\n";
            json out = conebary::io::matrix_json(r.center_estimate.entries());
            out["radius"] = conebary::io::round_real(r.radius_estimate);
            out["iterations"] = r.iterations;
            if (!out_path.empty()) emit(out_path, out);
            return r.converged ? 0 : 1;
        }
        if (*rsize) {
            const conebary::GroupRep rep = conebary::io::read_rep(x_path);
            const conebary::SizeEstimate est = conebary::rep_size(rep, radius, schedule_cap);
            std::cout << "|pi| = " << fmt(est.value) << " at radius " << est.radius
                      << (est.plateau ? " (plateau)" : "")
                      << (est.suspected_unbounded ? " (suspected unbounded)" : "") << "\n";
            json hist = json::array();
            for (double h : est.history) hist.push_back(conebary::io::round_real(h));
            if (!out_path.empty()) {
                emit(out_path, json{{"value", conebary::io::round_real(est.value)},
                                    {"radius", est.radius},
                                    {"history", std::move(hist)},
                                    {"plateau", est.plateau},
                                    {"suspected_unbounded", est.suspected_unbounded}});
            }
            return est.suspected_unbounded ? 3 : 0;
        }
        if (*rdiam) {
            const conebary::GroupRep rep = conebary::io::read_rep(x_path);
            const double d = conebary::rep_diam(rep, radius, schedule_cap);
            std::cout << "diam = " << fmt(d) << " at radius " << radius << "\n";
            if (!out_path.empty()) {
                emit(out_path, json{{"diam", conebary::io::round_real(d)},
                                    {"radius", radius}});
            }
            return 0;
        }
        if (*unit) return run_unitarise(uargs);
        if (*verify) {
            const conebary::GroupRep rep = conebary::io::read_rep(x_path);
            const conebary::InvertibleMatrix s(conebary::io::read_matrix(y_path));
            const conebary::UnitariserReport r =
                conebary::verify_unitariser(rep, s, radius, schedule_cap);
            const conebary::PosDefMatrix t_mat(
                conebary::symmetrize(s.entries() * s.entries().adjoint()));
            const conebary::PosDefMatrix normalized = conebary::normalize_fixed_point(t_mat);
            const double dist_id = conebary::thompson_dist(
                conebary::PosDefMatrix(conebary::Mat::Identity(rep.dim(), rep.dim())),
                normalized);
            const double orbit_diam = conebary::rep_diam(rep, radius, schedule_cap);
            const double bound = std::log(cert_k) + 0.5 * cert_alpha * orbit_diam;
            const double margin = bound - dist_id;
            const bool holds = margin >= -1e-6;
            std::cout << "defect " << fmt(r.defect) << " (target " << fmt(tol)
                      << "), size " << fmt(r.size) << "\n";
            std::cout << "certificate margin " << fmt(margin) << "\n";
            if (!out_path.empty()) {
                emit(out_path, json{{"defect", conebary::io::round_real(r.defect)},
                                    {"size", conebary::io::round_real(r.size)},
                                    {"radius", r.radius},
                                    {"orbit_diam", conebary::io::round_real(orbit_diam)},
                                    {"certificate_margin", conebary::io::round_real(margin)},
                                    {"certificate_holds", holds}});
            }
            return (r.defect <= tol && holds) ? 0 : 1;
        }
        if (*interp) {
            const conebary::GroupRep rep = conebary::io::read_rep(x_path);
            const conebary::PosDefMatrix s = conebary::io::read_posdef(y_path);
            const conebary::GroupRep rep_t = conebary::interpolate_rep(rep, s, t);
            const conebary::SizeEstimate est = conebary::rep_size(rep_t, radius, 4096);
            std::cout << "|pi_t| = " << fmt(est.value) << " at t = " << fmt(t) << "\n";
            emit(out_path, conebary::io::rep_json(rep_t));
            return 0;
        }
    } catch (const conebary::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
