#include "conebary/solver.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "conebary/karcher.hpp"

namespace conebary {

namespace {

Word power_word(int gen_index, int exponent) {
    Word w;
    w.reserve(static_cast<size_t>(exponent));
    for (int i = 0; i < exponent; ++i) w.push_back(gen_index + 1);
    return w;
}

// Word-level Folner defect check on exponent vectors (the words reduce freely
// in the abelian group).
void verify_defect(const FolnerSchedule& s, int check_cap) {
    const int d = s.kind == GroupKind::Z ? 1 : s.rank;
    for (int n = 1; n <= check_cap; ++n) {
        if (s.size_at(n) > 4096) break;
        std::set<std::vector<int>> base;
        std::vector<int> idx(static_cast<size_t>(d), 0);
        while (true) {
            base.insert(idx);
            int k = 0;
            while (k < d && ++idx[static_cast<size_t>(k)] == n) {
                idx[static_cast<size_t>(k)] = 0;
                ++k;
            }
            if (k == d) break;
        }
        for (int g = 0; g < d; ++g) {
            for (int sign : {+1, -1}) {
                std::size_t sym_diff = 0;
                for (const auto& v : base) {
                    auto shifted = v;
                    shifted[static_cast<size_t>(g)] += sign;
                    if (!base.count(shifted)) ++sym_diff;
                }
                sym_diff *= 2;  // the shift is a bijection: both sides match
                if (static_cast<double>(sym_diff) >=
                    s.epsilon(n) * static_cast<double>(base.size())) {
                    throw UnsupportedGroup(
                        "folner_for: defect " + std::to_string(sym_diff) + " at n=" +
                        std::to_string(n) + " violates epsilon_n * |F_n|");
                }
            }
        }
    }
}

Mat act_raw(const Mat& g, const Mat& p) { return symmetrize(g * p * g.adjoint()); }

double cond_of(const Mat& sym_pd) {
    const Spectrum s = detail::sym_eig_raw(sym_pd);
    return s.eigenvalues(s.eigenvalues.size() - 1) / s.eigenvalues(0);
}

struct DriveResult {
    Mat x;
    double residual = 0.0;
    long long n_reached = 0;
    bool converged = false;
    std::vector<HistoryRow> history;
};

std::vector<Mat> dedup_points(const std::vector<Mat>& pts, double tol) {
    std::vector<Mat> out;
    for (const auto& p : pts) {
        bool seen = false;
        for (const auto& q : out) {
            if ((p - q).norm() <= tol * std::max(1.0, q.norm())) {
                seen = true;
                break;
            }
        }
        if (!seen) out.push_back(p);
    }
    return out;
}

Mat mean_of(const std::vector<Mat>& pts, const SolveConfig& cfg, const Mat* warm) {
    if (static_cast<int>(pts.size()) <= cfg.exact_mean_max) {
        const double diam0 = detail::diam_raw(pts);
        const double tol =
            cfg.bary.collapse_tol > 0.0 ? cfg.bary.collapse_tol : 1e-9 * (1.0 + diam0);
        return detail::barycenter_raw(pts, tol / (3.0 * (1.0 + diam0)), cfg.bary.max_rounds);
    }
    return karcher_mean(pts, 1e-12, 300, warm);
}

double displacement(const Mat& x, const std::vector<Mat>& generator_images) {
    double worst = 0.0;
    for (const auto& g : generator_images) {
        worst = std::max(worst, detail::thompson_dist_raw(x, act_raw(g, x)));
    }
    return worst;
}

HistoryRow make_row(long long n, double residual, const Mat& x) {
    const double c = cond_of(x);
    return HistoryRow{n, residual, std::sqrt(c), 0.5 * std::log(c)};
}

// Folner averaging driver shared by the amenable solve and extension stage 2.
// `words_at` produces the Gamma-words of F_n, `size_of` its cardinality;
// `line_step`, when present, enables the fine scan for Z-type schedules (it is
// the image of the schedule's single generator inside Gamma).
DriveResult drive_folner(const GroupRep& rep, GroupKind kind,
                         const std::function<std::vector<Word>(long long)>& words_at,
                         const std::function<long long(long long)>& size_of,
                         long long first_index, const Mat* line_step, const Mat& start,
                         const std::vector<Mat>& displacement_images,
                         const std::function<void(const Mat&, long long)>& round_check,
                         const SolveConfig& cfg, double target) {
    DriveResult res;
    res.x = start;

    auto evaluate_at = [&](long long n, const Mat* warm) {
        std::vector<Mat> points;
        const std::vector<Word> words = words_at(n);
        points.reserve(words.size());
        for (const auto& w : words) points.push_back(act_raw(evaluate_word(rep, w), start));
        points = dedup_points(points, cfg.dedup_tol);
        Mat x = mean_of(points, cfg, warm);
        if (round_check) round_check(x, n);
        return x;
    };

    // Doubling phase.
    for (long long n = first_index;; n *= 2) {
        res.x = evaluate_at(n, res.history.empty() ? nullptr : &res.x);
        res.residual = displacement(res.x, displacement_images);
        res.n_reached = n;
        res.history.push_back(make_row(n, res.residual, res.x));
        if (res.residual <= target) {
            res.converged = true;
            return res;
        }
        if (kind == GroupKind::Finite) break;  // F_n is the whole group already
        if (size_of(2 * n) > cfg.schedule_cap) break;
    }

    // Screened fine scan: for interval schedules the one-point-exchange bound
    // d(P_0, P_n)/n dominates the displacement of any non-expansive mean, so
    // candidates are solved only where the bound already clears the target.
    if (kind == GroupKind::Z && cfg.scan_on_stall && line_step) {
        std::vector<Mat> line;
        line.reserve(static_cast<size_t>(cfg.schedule_cap) + 1);
        line.push_back(start);
        for (int k = 1; k <= cfg.schedule_cap; ++k) {
            line.push_back(act_raw(*line_step, line.back()));
        }
        Mat warm = res.x;
        int solved = 0;
        for (long long n = 2; n <= cfg.schedule_cap && solved < 16; ++n) {
            const double bound =
                detail::thompson_dist_raw(line[0], line[static_cast<size_t>(n)]) /
                static_cast<double>(n);
            if (bound > 0.9 * target) continue;
            std::vector<Mat> points(line.begin(), line.begin() + n);
            points = dedup_points(points, cfg.dedup_tol);
            Mat x = mean_of(points, cfg, &warm);
            if (round_check) round_check(x, n);
            warm = x;
            ++solved;
            const double r = displacement(x, displacement_images);
            res.history.push_back(make_row(n, r, x));
            if (r < res.residual) {
                res.x = x;
                res.residual = r;
                res.n_reached = n;
            }
            if (r <= target) {
                res.converged = true;
                break;
            }
        }
    }
    return res;
}

std::vector<Mat> generator_images(const GroupRep& rep) {
    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(rep.num_generators()));
    for (const auto& g : rep.generators()) out.push_back(g.entries());
    return out;
}

// Orbit of the identity sampled on a word ball; the action is by isometries,
// so the orbit diameter equals the largest distance to the identity.
struct OrbitSample {
    std::vector<Mat> points;
    double diam = 0.0;
};

OrbitSample orbit_sample(const GroupRep& rep, int radius, int cap) {
    OrbitSample s;
    const WordBall ball = enumerate_ball(rep, radius, cap);
    const Mat id = Mat::Identity(rep.dim(), rep.dim());
    s.points.reserve(ball.elements.size());
    for (const auto& g : ball.elements) {
        Mat p = symmetrize(g * g.adjoint());
        s.diam = std::max(s.diam, detail::thompson_dist_raw(id, p));
        s.points.push_back(std::move(p));
    }
    return s;
}

FixedPointReport finalize_report(const GroupRep& rep, const DriveResult& drive,
                                 const SizeEstimate& size_est, const SolveConfig& cfg) {
    const OrbitSample orbit = orbit_sample(rep, cfg.orbit_radius, cfg.schedule_cap);

    PosDefMatrix fixed(drive.x);
    PosDefMatrix normalized = normalize_fixed_point(fixed);
    InvertibleMatrix unitariser = extract_unitariser(fixed);
    const PosDefMatrix id(Mat::Identity(rep.dim(), rep.dim()));

    double xpi_worst = 0.0;
    for (const auto& p : orbit.points) {
        xpi_worst = std::max(xpi_worst, detail::thompson_dist_raw(fixed.entries(), p));
    }

    const double size_measured = operator_size(unitariser);
    const double dist_id = thompson_dist(id, normalized);
    return FixedPointReport{
        std::move(fixed),
        std::move(normalized),
        std::move(unitariser),
        drive.residual,
        size_measured,
        size_est.value,
        cfg.bound.K * std::pow(size_est.value, cfg.bound.alpha),
        dist_id,
        orbit.diam,
        xpi_worst - orbit.diam,
        drive.n_reached,
        cfg.orbit_radius,
        drive.converged,
        drive.history,
    };
}

}  // namespace

std::vector<Word> FolnerSchedule::set_at(int n) const {
    if (n < 1) throw TOutOfRange("FolnerSchedule::set_at: n must be positive");
    std::vector<Word> words;
    switch (kind) {
        case GroupKind::Z:
            words.reserve(static_cast<size_t>(n));
            for (int k = 0; k < n; ++k) words.push_back(power_word(0, k));
            break;
        case GroupKind::ZPow: {
            std::vector<int> idx(static_cast<size_t>(rank), 0);
            while (true) {
                Word w;
                for (int g = 0; g < rank; ++g) {
                    const Word part = power_word(g, idx[static_cast<size_t>(g)]);
                    w.insert(w.end(), part.begin(), part.end());
                }
                words.push_back(std::move(w));
                int k = 0;
                while (k < rank && ++idx[static_cast<size_t>(k)] == n) {
                    idx[static_cast<size_t>(k)] = 0;
                    ++k;
                }
                if (k == rank) break;
            }
            break;
        }
        case GroupKind::Finite:
            throw UnsupportedGroup(
                "FolnerSchedule::set_at: finite schedules are materialized from the "
                "stabilized word ball at solve time");
    }
    return words;
}

long long FolnerSchedule::size_at(int n) const {
    if (kind == GroupKind::ZPow) {
        long long s = 1;
        for (int i = 0; i < rank; ++i) s *= n;
        return s;
    }
    return n;
}

FolnerSchedule folner_for(GroupKind kind, int rank, double defect_scale) {
    if (defect_scale <= 2.0 && kind != GroupKind::Finite) {
        throw UnsupportedGroup(
            "folner_for: the interval/box families have defect 2/n; defect_scale must "
            "exceed 2");
    }
    FolnerSchedule s;
    s.kind = kind;
    s.rank = kind == GroupKind::ZPow ? rank : 1;
    s.defect_scale = defect_scale;
    if (kind == GroupKind::ZPow && rank < 1) {
        throw UnsupportedGroup("folner_for: Z^d requires rank >= 1");
    }
    if (kind != GroupKind::Finite) {
        verify_defect(s, kind == GroupKind::Z ? 64 : (s.rank >= 3 ? 8 : 16));
    }
    return s;
}

FixedPointReport solve_amenable(const GroupRep& rep, const FolnerSchedule& schedule,
                                const PosDefMatrix& start, const SolveConfig& cfg,
                                double target_residual) {
    if (start.dim() != rep.dim()) throw DimMismatch("solve_amenable: start dimension");
    const SizeEstimate size_est = rep_size(rep, cfg.size_radius, cfg.schedule_cap);
    if (!size_est.plateau || size_est.suspected_unbounded) {
        throw NotUniformlyBounded("solve_amenable: |pi| did not stabilize by radius " +
                                  std::to_string(cfg.size_radius) + " (last value " +
                                  std::to_string(size_est.value) + ")");
    }
    if (schedule.kind != GroupKind::Finite && rep.num_generators() < schedule.rank) {
        throw UnsupportedGroup("solve_amenable: schedule rank exceeds generator count");
    }

    std::function<std::vector<Word>(long long)> words_at;
    std::function<long long(long long)> size_of;
    long long first_index = 2;
    if (schedule.kind == GroupKind::Finite) {
        // Stabilized ball = the whole group; BallTooLarge propagates if it is not finite.
        const WordBall all = enumerate_ball(rep, cfg.schedule_cap, cfg.schedule_cap);
        first_index = static_cast<long long>(all.words.size());
        words_at = [words = all.words](long long) { return words; };
        size_of = [first_index](long long) { return first_index; };
    } else {
        words_at = [&schedule](long long n) { return schedule.set_at(static_cast<int>(n)); };
        size_of = [&schedule](long long n) { return schedule.size_at(static_cast<int>(n)); };
    }

    const Mat line_step =
        schedule.kind == GroupKind::Z ? rep.generators()[0].entries() : Mat();
    DriveResult drive = drive_folner(
        rep, schedule.kind, words_at, size_of, first_index,
        schedule.kind == GroupKind::Z ? &line_step : nullptr, start.entries(),
        generator_images(rep), nullptr, cfg, target_residual);
    return finalize_report(rep, drive, size_est, cfg);
}

FixedPointReport solve_amenable(const GroupRep& rep, const FolnerSchedule& schedule,
                                const SolveConfig& cfg, double target_residual) {
    return solve_amenable(rep, schedule, PosDefMatrix(Mat::Identity(rep.dim(), rep.dim())),
                          cfg, target_residual);
}

FixedPointReport promote_finite_index(const GroupRep& rep, const PosDefMatrix& subgroup_fixed,
                                      const std::vector<Word>& subgroup_gens,
                                      const std::vector<Word>& coset_reps,
                                      const SolveConfig& cfg) {
    if (subgroup_fixed.dim() != rep.dim()) {
        throw DimMismatch("promote_finite_index: fixed point dimension");
    }
    if (coset_reps.empty()) throw SizeMismatch("promote_finite_index: no coset reps");

    bool has_identity = false;
    for (const auto& w : coset_reps) {
        if (op_norm(evaluate_word(rep, w) - Mat::Identity(rep.dim(), rep.dim())) <=
            kRelationTol) {
            has_identity = true;
            break;
        }
    }
    if (!has_identity) {
        throw SizeMismatch("promote_finite_index: coset reps must contain the identity");
    }

    for (const auto& w : subgroup_gens) {
        const double moved = thompson_dist(subgroup_fixed, act(rep, w, subgroup_fixed));
        if (moved > kRelationTol) {
            throw NotSubgroupFixed("promote_finite_index: subgroup displacement " +
                                   std::to_string(moved));
        }
    }

    std::vector<Mat> points;
    points.reserve(coset_reps.size());
    for (const auto& w : coset_reps) {
        points.push_back(act_raw(evaluate_word(rep, w), subgroup_fixed.entries()));
    }
    points = dedup_points(points, cfg.dedup_tol);

    DriveResult drive;
    drive.x = mean_of(points, cfg, nullptr);
    drive.residual = displacement(drive.x, generator_images(rep));
    drive.n_reached = static_cast<long long>(coset_reps.size());
    drive.converged = true;
    drive.history.push_back(make_row(drive.n_reached, drive.residual, drive.x));

    return finalize_report(rep, drive, rep_size(rep, cfg.size_radius, cfg.schedule_cap), cfg);
}

namespace {

Word lift_word(const std::vector<Word>& section, const Word& quotient_word) {
    Word out;
    for (int tok : quotient_word) {
        const size_t idx = static_cast<size_t>(std::abs(tok) - 1);
        if (idx >= section.size()) {
            throw ParseError("quotient word references generator beyond the section");
        }
        const Word& s = section[idx];
        if (tok > 0) {
            out.insert(out.end(), s.begin(), s.end());
        } else {
            for (auto it = s.rbegin(); it != s.rend(); ++it) out.push_back(-*it);
        }
    }
    return out;
}

}  // namespace

FixedPointReport solve_extension(const GroupRep& rep, const ExtensionSpec& ext,
                                 const SolveConfig& cfg, double target_residual) {
    if (ext.normal_gens.empty()) throw SizeMismatch("solve_extension: no normal generators");
    if (ext.section_words.empty()) throw SizeMismatch("solve_extension: empty section");

    // Subgroup representation generated by the normal generators' images.
    std::vector<InvertibleMatrix> sub_gens;
    sub_gens.reserve(ext.normal_gens.size());
    for (const auto& w : ext.normal_gens) {
        sub_gens.emplace_back(evaluate_word(rep, w));
    }
    GroupRep sub_rep(rep.name() + "_normal", sub_gens);

    // Normality spot check: conjugates of normal generators by the main
    // generators must land inside the normal subgroup's ball.
    {
        const WordBall sub_ball =
            enumerate_ball(sub_rep, cfg.normality_radius, cfg.schedule_cap);
        for (const auto& g : rep.generators()) {
            for (const auto& h : sub_gens) {
                const Mat conj = g.entries() * h.entries() * g.inverse();
                bool found = false;
                for (const auto& e : sub_ball.elements) {
                    if ((conj - e).norm() <= cfg.dedup_tol * std::max(1.0, e.norm())) {
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    throw NormalityViolated(
                        "solve_extension: a conjugated normal generator is not a product "
                        "of normal generators (radius " +
                        std::to_string(cfg.normality_radius) + ")");
                }
            }
        }
    }

    // Stage 1: fixed point of the normal subgroup.
    FixedPointReport stage1 = solve_amenable(sub_rep, ext.subgroup_schedule, cfg,
                                             target_residual);
    if (!stage1.converged) {
        throw Stage1Failed("solve_extension: stage 1 residual " +
                           std::to_string(stage1.residual));
    }

    // Stage 2: average the stage-1 point over lifted quotient Folner sets,
    // rechecking subgroup fixedness every round.
    std::vector<Mat> sub_images;
    for (const auto& g : sub_gens) sub_images.push_back(g.entries());
    const double fixedness_tol = 10.0 * std::max(target_residual, stage1.residual);
    auto round_check = [&](const Mat& x, long long n) {
        const double moved = displacement(x, sub_images);
        if (moved > fixedness_tol) {
            throw NoConvergence("solve_extension: stage-2 iterate at n=" + std::to_string(n) +
                                " drifted " + std::to_string(moved) +
                                " from subgroup fixedness");
        }
    };

    std::function<std::vector<Word>(long long)> words_at;
    std::function<long long(long long)> size_of;
    long long first_index = 2;
    Mat line_step;
    const Mat* line_ptr = nullptr;
    if (ext.quotient_schedule.kind == GroupKind::Finite) {
        // The quotient is presented through the section words: its ball is the
        // finite set of coset representatives.
        std::vector<InvertibleMatrix> q_gens;
        for (const auto& w : ext.section_words) q_gens.emplace_back(evaluate_word(rep, w));
        GroupRep q_rep(rep.name() + "_quotient", q_gens);
        WordBall q_ball = enumerate_ball(q_rep, cfg.schedule_cap, cfg.schedule_cap);
        std::vector<Word> lifted;
        lifted.reserve(q_ball.words.size());
        for (const auto& w : q_ball.words) lifted.push_back(lift_word(ext.section_words, w));
        first_index = static_cast<long long>(lifted.size());
        words_at = [lifted](long long) { return lifted; };
        size_of = [first_index](long long) { return first_index; };
    } else {
        words_at = [&](long long n) {
            std::vector<Word> qs = ext.quotient_schedule.set_at(static_cast<int>(n));
            std::vector<Word> lifted;
            lifted.reserve(qs.size());
            for (const auto& w : qs) lifted.push_back(lift_word(ext.section_words, w));
            return lifted;
        };
        size_of = [&ext](long long n) {
            return ext.quotient_schedule.size_at(static_cast<int>(n));
        };
        if (ext.quotient_schedule.kind == GroupKind::Z) {
            line_step = evaluate_word(rep, ext.section_words[0]);
            line_ptr = &line_step;
        }
    }

    DriveResult drive =
        drive_folner(rep, ext.quotient_schedule.kind, words_at, size_of, first_index,
                     line_ptr, stage1.fixed_point.entries(), generator_images(rep),
                     round_check, cfg, target_residual);

    return finalize_report(rep, drive, rep_size(rep, cfg.size_radius, cfg.schedule_cap), cfg);
}

CertificateResult bound_certificate(const FixedPointReport& report, const BoundSpec& spec) {
    if (spec.K < 1.0 || spec.alpha <= 0.0) {
        throw TOutOfRange("bound_certificate: K >= 1 and alpha > 0 required");
    }
    const double bound = std::log(spec.K) + 0.5 * spec.alpha * report.orbit_diam;
    const double margin = bound - report.distance_to_identity;
    return CertificateResult{bound, margin, margin >= -1e-6};
}

}  // namespace conebary
