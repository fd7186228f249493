#pragma once

#include <optional>
#include <vector>

#include "conebary/barycenter.hpp"
#include "conebary/group.hpp"

namespace conebary {

enum class GroupKind { Z, ZPow, Finite };

// Averaging sets for amenable groups: intervals {0..n-1} for Z, boxes
// {0..n-1}^rank for Z^rank, the whole group for finite groups. The word-level
// Folner defect |F_n delta g F_n| < epsilon_n |F_n| with epsilon_n =
// defect_scale / n is verified symbolically at construction (the interval and
// box families have defect exactly 2/n, so the default scale 3 clears it).
struct FolnerSchedule {
    GroupKind kind = GroupKind::Z;
    int rank = 1;                // Z^rank dimension; 1 for Z
    double defect_scale = 3.0;

    double epsilon(int n) const { return defect_scale / n; }

    // F_n as words over the first `rank` generators. For Finite the set is the
    // whole group, produced at solve time from the stabilized word ball.
    std::vector<Word> set_at(int n) const;

    // Cardinality of F_n without materializing it.
    long long size_at(int n) const;
};

FolnerSchedule folner_for(GroupKind kind, int rank = 1, double defect_scale = 3.0);

// Certificate constants: s(S) <= K * |pi|^alpha, distance form
// d(I, fixed set) <= ln K + (alpha/2) * diam(pi).
struct BoundSpec {
    double K = 1.0;      // >= 1
    double alpha = 2.0;  // > 0
};

struct HistoryRow {
    long long n;      // Folner index (|F_n| for boxes and finite groups)
    double residual;  // max generator displacement at this step
    double size;      // operator_size of the step's unitariser
    double distance;  // d(I, normalized iterate)
};

struct FixedPointReport {
    PosDefMatrix fixed_point;
    PosDefMatrix normalized;
    InvertibleMatrix unitariser;
    double residual;
    double size_measured;         // operator_size(unitariser)
    double rep_size_value;        // |pi| sampled at size_radius
    double size_bound;            // K * |pi|^alpha
    double distance_to_identity;  // d(I, normalized) = ln(size_measured)
    double orbit_diam;            // diameter of the sampled orbit of I
    double xpi_margin;            // max_w d(fixed_point, w w*) - orbit_diam
    long long schedule_index_reached;
    int orbit_radius;
    bool converged;
    std::vector<HistoryRow> history;
};

struct SolveConfig {
    BarycenterConfig bary;
    BoundSpec bound;
    int schedule_cap = 4096;    // largest |F_n| the solver will average
    int orbit_radius = 12;      // word radius of the orbit sample
    int size_radius = 32;       // word radius for the |pi| estimate
    int exact_mean_max = 5;     // tuple size cutoff: recursive mean vs Karcher
    double dedup_tol = kDedupTol;
    bool scan_on_stall = true;  // Z only: screened fine scan when doubling stalls
    int normality_radius = 8;   // ball radius for the extension normality check
};

// Folner averaging: x_n is the barycenter of {act(w, start) : w in F_n} for
// increasing n until the generator displacement meets target_residual.
FixedPointReport solve_amenable(const GroupRep& rep, const FolnerSchedule& schedule,
                                const PosDefMatrix& start, const SolveConfig& cfg = {},
                                double target_residual = 1e-6);
FixedPointReport solve_amenable(const GroupRep& rep, const FolnerSchedule& schedule,
                                const SolveConfig& cfg = {}, double target_residual = 1e-6);

// Averages the coset translates of a subgroup-fixed point: the result is fixed
// by the whole group. Raises NotSubgroupFixed when the precondition fails.
FixedPointReport promote_finite_index(const GroupRep& rep, const PosDefMatrix& subgroup_fixed,
                                      const std::vector<Word>& subgroup_gens,
                                      const std::vector<Word>& coset_reps,
                                      const SolveConfig& cfg = {});

struct ExtensionSpec {
    std::vector<Word> normal_gens;      // generators of the normal subgroup
    FolnerSchedule subgroup_schedule;   // stage-1 schedule for the subgroup
    std::vector<Word> section_words;    // lift of each quotient generator
    FolnerSchedule quotient_schedule;   // stage-2 schedule for the quotient
    BoundSpec subgroup_bound;           // K', alpha' for the extension certificate
};

// Two-stage solve: stage 1 fixes the normal subgroup, stage 2 averages the
// stage-1 point over quotient Folner sets lifted through the section. The
// iterate's subgroup fixedness is rechecked every round.
FixedPointReport solve_extension(const GroupRep& rep, const ExtensionSpec& ext,
                                 const SolveConfig& cfg = {}, double target_residual = 1e-6);

struct CertificateResult {
    double bound;   // ln K + (alpha/2) * orbit_diam
    double margin;  // bound - distance_to_identity
    bool holds;     // margin >= -1e-6
};

CertificateResult bound_certificate(const FixedPointReport& report, const BoundSpec& spec);

}  // namespace conebary
