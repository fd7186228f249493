#pragma once

#include "conebary/convex.hpp"

namespace conebary {

struct BarycenterConfig {
    // Collapse threshold for the tuple diameter. Non-positive selects the
    // default 1e-9 * (1 + initial diameter).
    double collapse_tol = 0.0;
    int max_rounds = 200;
};

// Geodesic midpoint; the two-point barycenter.
PosDefMatrix b2(const PosDefMatrix& x, const PosDefMatrix& y);

// One symmetrization round: entry i becomes the barycenter of the tuple with
// point i removed. Contracts the diameter by 1/(n-1) for an n-tuple.
PointTuple leave_one_out_map(const PointTuple& a, const BarycenterConfig& cfg = {});

// n-point barycenter: identity for n=1, midpoint for n=2, and for n>=3 the
// common limit of iterated leave-one-out rounds (any entry once the tuple
// diameter falls below collapse_tol). Permutation invariant, non-expansive
// for the averaged tuple metric, and congruence equivariant.
PosDefMatrix barycenter(const PointTuple& a, const BarycenterConfig& cfg = {});

struct BarycenterTraceRow {
    int round;         // 0 = initial tuple
    double tuple_diam;
};

// Same result as barycenter;`trace` receives the diameter after every
// top-level leave-one-out round (a collapsed or small tuple records only
// round 0).
PosDefMatrix barycenter_traced(const PointTuple& a, std::vector<BarycenterTraceRow>& trace,
                               const BarycenterConfig& cfg = {});

// d(g . barycenter(a) . g*, barycenter(g . a . g*)).
double equivariance_residual(const PointTuple& a, const InvertibleMatrix& g,
                             const BarycenterConfig& cfg = {});

struct FolnerBoundCheck {
    double lhs;  // d(b(common + b_pts), b(common + c_pts))
    double rhs;  // |b_pts| / (|common| + |b_pts|) * diam(b_pts + c_pts)
    bool holds(double slack = 1e-7) const { return lhs <= rhs + slack; }
};

// Exchange bound: replacing the b-block by the c-block moves the barycenter by
// at most the block weight times the diameter of the union of the two blocks.
FolnerBoundCheck folner_bound_check(const PointTuple& common, const PointTuple& b_pts,
                                    const PointTuple& c_pts, const BarycenterConfig& cfg = {});

namespace detail {

// Recursive mean on raw symmetric positive definite matrices. `rel_tol` is the
// per-call relative collapse threshold (fraction of the call's own initial
// diameter); errors telescope to ~1.5 * rel_tol * diam across the recursion.
Mat barycenter_raw(const std::vector<Mat>& pts, double rel_tol, int max_rounds);

double diam_raw(const std::vector<Mat>& pts);

}  // namespace detail

}  // namespace conebary
