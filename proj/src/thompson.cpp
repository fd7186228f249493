#include "conebary/thompson.hpp"

#include <cmath>
#include <string>

namespace conebary {

namespace {

void require_same_dim(const PosDefMatrix& x, const PosDefMatrix& y, const char* who) {
    if (x.dim() != y.dim()) {
        throw DimMismatch(std::string(who) + ": dimensions " + std::to_string(x.dim()) +
                          " and " + std::to_string(y.dim()) + " differ");
    }
}

void guard_conditioning(const PosDefMatrix& m, const char* who) {
    if (m.cond() > kCondLimit) {
        throw IllConditioned(std::string(who) + ": condition number " +
                             std::to_string(m.cond()) + " exceeds " +
                             std::to_string(kCondLimit));
    }
}

Vec relative_spectrum(const Mat& x, const Mat& y) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(y, x, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw Error("thompson: generalized eigensolver failed");
    }
    return es.eigenvalues();
}

double max_abs_log(const Vec& mu) {
    double d = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (mu(i) <= 0.0) throw NotPositive("thompson: relative spectrum not positive");
        d = std::max(d, std::abs(std::log(mu(i))));
    }
    return d;
}

}  // namespace

double thompson_dist(const PosDefMatrix& x, const PosDefMatrix& y) {
    return thompson_dist_full(x, y).dist;
}

DistWithSpectrum thompson_dist_full(const PosDefMatrix& x, const PosDefMatrix& y) {
    require_same_dim(x, y, "thompson_dist");
    guard_conditioning(x, "thompson_dist");
    guard_conditioning(y, "thompson_dist");
    Vec mu = relative_spectrum(x.entries(), y.entries());
    return DistWithSpectrum{max_abs_log(mu), std::move(mu)};
}

PosDefMatrix geodesic(const PosDefMatrix& x, const PosDefMatrix& y, double t) {
    require_same_dim(x, y, "geodesic");
    if (!(t >= 0.0 && t <= 1.0)) {
        throw TOutOfRange("geodesic: t = " + std::to_string(t) + " outside [0, 1]");
    }
    guard_conditioning(x, "geodesic");
    guard_conditioning(y, "geodesic");
    if (t == 0.0) return x;
    if (t == 1.0) return y;
    return PosDefMatrix(detail::geodesic_raw(x.entries(), y.entries(), t));
}

GeodesicSegment::GeodesicSegment(const PosDefMatrix& x, const PosDefMatrix& y) {
    require_same_dim(x, y, "GeodesicSegment");
    guard_conditioning(x, "GeodesicSegment");
    guard_conditioning(y, "GeodesicSegment");
    const Spectrum& sx = x.spectrum();
    half_ = detail::power_raw(sx, 0.5);
    const Mat inv_half = detail::power_raw(sx, -0.5);
    rel_ = detail::sym_eig_raw(symmetrize(inv_half * y.entries() * inv_half));
    length_ = max_abs_log(rel_.eigenvalues);
}

PosDefMatrix GeodesicSegment::eval(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw TOutOfRange("GeodesicSegment::eval: t outside [0, 1]");
    }
    return PosDefMatrix(symmetrize(half_ * detail::power_raw(rel_, t) * half_));
}

BicombingReport bicombing_axioms_check(const PosDefMatrix& x, const PosDefMatrix& y, double s,
                                       double t) {
    BicombingReport r{};
    const double dxy = thompson_dist(x, y);

    const PosDefMatrix es = geodesic(x, y, s);
    const PosDefMatrix et = geodesic(x, y, t);
    r.geodesic_residual = std::abs(thompson_dist(es, et) - std::abs(s - t) * dxy);

    r.reversal_residual = thompson_dist(geodesic(y, x, t), geodesic(x, y, 1.0 - t));
    r.rescale_residual = thompson_dist(geodesic(x, et, s), geodesic(x, y, t * s));

    // Continuity in the endpoints, quantified through the convexity bound:
    // moving each endpoint along the geodesic toward the other by delta moves
    // eta(.,.,t) by at most delta (up to numerics).
    const double delta = 1e-3;
    const PosDefMatrix xp = geodesic(x, y, std::min(delta, 1.0));
    const PosDefMatrix yp = geodesic(y, x, std::min(delta, 1.0));
    const double moved = thompson_dist(geodesic(xp, yp, t), et);
    const double allowance = (1.0 - t) * thompson_dist(x, xp) + t * thompson_dist(y, yp);
    r.continuity_residual = std::max(0.0, moved - allowance);
    return r;
}

double convexity_gap(const PosDefMatrix& x1, const PosDefMatrix& x2, const PosDefMatrix& y1,
                     const PosDefMatrix& y2, double t) {
    const double lhs = thompson_dist(geodesic(x1, x2, t), geodesic(y1, y2, t));
    const double rhs = (1.0 - t) * thompson_dist(x1, y1) + t * thompson_dist(x2, y2);
    return rhs - lhs;
}

bool ball_contains(const PosDefMatrix& center, double radius, const PosDefMatrix& m,
                   bool closed) {
    require_same_dim(center, m, "ball_contains");
    if (radius < 0.0) throw TOutOfRange("ball_contains: negative radius");
    guard_conditioning(center, "ball_contains");
    guard_conditioning(m, "ball_contains");
    const Vec mu = relative_spectrum(center.entries(), m.entries());
    const double lo = std::exp(-radius);
    const double hi = std::exp(radius);
    const double slack = kMembershipTol * std::max(1.0, hi);
    const double lo_slack = kMembershipTol * std::max(1.0, lo);
    const double mu_min = mu(0);
    const double mu_max = mu(mu.size() - 1);
    if (mu_min <= 0.0) throw NotPositive("ball_contains: relative spectrum not positive");
    if (closed) {
        return mu_max <= hi + slack && mu_min >= lo - lo_slack;
    }
    return mu_max < hi - slack && mu_min > lo + lo_slack;
}

std::pair<double, double> norm_ball_of_thompson_ball(double r) {
    if (r < 0.0) throw TOutOfRange("norm_ball_of_thompson_ball: negative radius");
    return {std::cosh(r), std::sinh(r)};
}

namespace detail {

double thompson_dist_raw(const Mat& x, const Mat& y) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(y, x, Eigen::EigenvaluesOnly);
    return max_abs_log(es.eigenvalues());
}

Mat geodesic_raw(const Mat& x, const Mat& y, double t) {
    const Spectrum sx = sym_eig_raw(x);
    const Mat half = power_raw(sx, 0.5);
    const Mat inv_half = power_raw(sx, -0.5);
    const Spectrum rel = sym_eig_raw(symmetrize(inv_half * y * inv_half));
    return symmetrize(half * power_raw(rel, t) * half);
}

Mat midpoint_raw(const Mat& x, const Mat& y) { return geodesic_raw(x, y, 0.5); }

}  // namespace detail

}  // namespace conebary
