#pragma once

#include <utility>

#include "conebary/matrix_core.hpp"

namespace conebary {

// Membership tolerance at ball boundaries (relative to max(1, radius)).
inline constexpr double kMembershipTol = 1e-12;

struct DistWithSpectrum {
    double dist;
    Vec relative_spectrum;  // eigenvalues of x^{-1/2} y x^{-1/2}, ascending
};

// d(x, y) = max |ln mu| over the relative spectrum. Computed from the
// generalized eigenvalues of (y, x); no matrix logarithm is materialized.
double thompson_dist(const PosDefMatrix& x, const PosDefMatrix& y);
DistWithSpectrum thompson_dist_full(const PosDefMatrix& x, const PosDefMatrix& y);

// eta(x, y, t) = x^{1/2} (x^{-1/2} y x^{-1/2})^t x^{1/2}, t in [0, 1].
PosDefMatrix geodesic(const PosDefMatrix& x, const PosDefMatrix& y, double t);

// Caches x^{+-1/2} and the relative spectrum so repeated evaluations along one
// geodesic cost a single spectral map each.
class GeodesicSegment {
public:
    GeodesicSegment(const PosDefMatrix& x, const PosDefMatrix& y);
    PosDefMatrix eval(double t) const;
    double length() const { return length_; }

private:
    Mat half_;       // x^{1/2}
    Spectrum rel_;   // spectrum of x^{-1/2} y x^{-1/2}
    double length_;
};

struct BicombingReport {
    double geodesic_residual;    // | d(eta(s), eta(t)) - |s-t| d(x,y) |
    double reversal_residual;    // d(eta(y,x,t), eta(x,y,1-t))
    double rescale_residual;     // d(eta(x, eta(x,y,t), s), eta(x,y,t*s))
    double continuity_residual;  // violation of the endpoint-perturbation bound
    bool pass(double tol) const {
        return geodesic_residual <= tol && reversal_residual <= tol &&
               rescale_residual <= tol && continuity_residual <= tol;
    }
};

BicombingReport bicombing_axioms_check(const PosDefMatrix& x, const PosDefMatrix& y, double s,
                                       double t);

// rhs - lhs of d(eta(x1,x2,t), eta(y1,y2,t)) <= (1-t) d(x1,y1) + t d(x2,y2).
// Nonnegative up to numerics (>= -1e-9 asserted by the test suites).
double convexity_gap(const PosDefMatrix& x1, const PosDefMatrix& x2, const PosDefMatrix& y1,
                     const PosDefMatrix& y2, double t);

// Spectral membership test: m lies in the (open/closed) d-ball of the given
// center and radius iff the relative spectrum sits inside (e^-r, e^r).
bool ball_contains(const PosDefMatrix& center, double radius, const PosDefMatrix& m,
                   bool closed = true);

// The d-ball B(I, r) equals the operator-norm ball with center cosh(r) * I and
// radius sinh(r), intersected with the cone.
std::pair<double, double> norm_ball_of_thompson_ball(double r);

namespace detail {

// Fast paths on raw symmetric positive definite matrices (no validation).
double thompson_dist_raw(const Mat& x, const Mat& y);
Mat geodesic_raw(const Mat& x, const Mat& y, double t);
Mat midpoint_raw(const Mat& x, const Mat& y);

}  // namespace detail

}  // namespace conebary
