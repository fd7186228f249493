#include "conebary/barycenter.hpp"

#include <cmath>
#include <string>

namespace conebary {

namespace detail {

double diam_raw(const std::vector<Mat>& pts) {
    double diam = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            diam = std::max(diam, thompson_dist_raw(pts[i], pts[j]));
        }
    }
    return diam;
}

namespace {

std::vector<Mat> drop_index(const std::vector<Mat>& pts, size_t skip) {
    std::vector<Mat> out;
    out.reserve(pts.size() - 1);
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i != skip) out.push_back(pts[i]);
    }
    return out;
}

}  // namespace

Mat barycenter_raw(const std::vector<Mat>& pts, double rel_tol, int max_rounds) {
    const size_t n = pts.size();
    if (n == 1) return pts[0];
    if (n == 2) return midpoint_raw(pts[0], pts[1]);

    std::vector<Mat> cur = pts;
    double diam = diam_raw(cur);
    // Absolute floor keeps degenerate tuples from spinning on rounding noise:
    // midpoints are eigendecomposition products, so diameters below ~1e-13
    // are indistinguishable from that noise and would never collapse further.
    const double stop = std::max(rel_tol * diam, 1e-13 * (1.0 + diam));
    int round = 0;
    while (diam > stop) {
        if (round >= max_rounds) {
            throw NoCollapse("barycenter: no collapse after " + std::to_string(round) +
                                 " rounds (diameter " + std::to_string(diam) + ")",
                             diam, round);
        }
        std::vector<Mat> next(n);
        for (size_t i = 0; i < n; ++i) {
            next[i] = barycenter_raw(drop_index(cur, i), rel_tol, max_rounds);
        }
        cur = std::move(next);
        const double prev = diam;
        diam = diam_raw(cur);
        ++round;
        // The exact map contracts by 1/(n-1) <= 1/2, so a round that keeps
        // 90% of the diameter is averaging eigensolver noise: the remaining
        // spread is the attainable precision, not a convergence failure.
        if (diam > 0.9 * prev) break;
    }
    return cur[0];
}

}  // namespace detail

namespace {

std::vector<Mat> raw_points(const PointTuple& a) {
    std::vector<Mat> pts;
    pts.reserve(static_cast<size_t>(a.size()));
    for (const auto& p : a) pts.push_back(p.entries());
    return pts;
}

// Relative collapse factor used by every recursive sub-call; the accumulated
// error stays below the caller's absolute collapse_tol.
double rel_tol_for(double collapse_tol, double diam0) {
    return collapse_tol / (3.0 * (1.0 + diam0));
}

double resolve_collapse_tol(const BarycenterConfig& cfg, double diam0) {
    return cfg.collapse_tol > 0.0 ? cfg.collapse_tol : 1e-9 * (1.0 + diam0);
}

}  // namespace

PosDefMatrix b2(const PosDefMatrix& x, const PosDefMatrix& y) { return geodesic(x, y, 0.5); }

PointTuple leave_one_out_map(const PointTuple& a, const BarycenterConfig& cfg) {
    if (a.size() < 2) throw SizeMismatch("leave_one_out_map: need at least two points");
    const std::vector<Mat> pts = raw_points(a);
    const double diam0 = detail::diam_raw(pts);
    const double rel = rel_tol_for(resolve_collapse_tol(cfg, diam0), diam0);
    std::vector<PosDefMatrix> out;
    out.reserve(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        std::vector<Mat> sub;
        sub.reserve(pts.size() - 1);
        for (size_t j = 0; j < pts.size(); ++j) {
            if (j != i) sub.push_back(pts[j]);
        }
        out.emplace_back(detail::barycenter_raw(sub, rel, cfg.max_rounds));
    }
    return PointTuple(std::move(out));
}

PosDefMatrix barycenter(const PointTuple& a, const BarycenterConfig& cfg) {
    std::vector<BarycenterTraceRow> trace;
    return barycenter_traced(a, trace, cfg);
}

PosDefMatrix barycenter_traced(const PointTuple& a, std::vector<BarycenterTraceRow>& trace,
                               const BarycenterConfig& cfg) {
    trace.clear();
    const std::vector<Mat> pts = raw_points(a);
    const double diam0 = detail::diam_raw(pts);
    trace.push_back({0, diam0});
    if (a.size() == 1) return a[0];
    if (a.size() == 2) return b2(a[0], a[1]);

    // Top-level unrolling of barycenter_raw with the same stop rule, so the
    // traced and untraced paths agree bit for bit.
    const double rel = rel_tol_for(resolve_collapse_tol(cfg, diam0), diam0);
    const double stop = std::max(rel * diam0, 1e-13 * (1.0 + diam0));
    std::vector<Mat> cur = pts;
    double diam = diam0;
    int round = 0;
    while (diam > stop) {
        if (round >= cfg.max_rounds) {
            throw NoCollapse("barycenter: no collapse after " + std::to_string(round) +
                                 " rounds (diameter " + std::to_string(diam) + ")",
                             diam, round);
        }
        std::vector<Mat> next(cur.size());
        for (size_t i = 0; i < cur.size(); ++i) {
            std::vector<Mat> sub;
            sub.reserve(cur.size() - 1);
            for (size_t j = 0; j < cur.size(); ++j) {
                if (j != i) sub.push_back(cur[j]);
            }
            next[i] = detail::barycenter_raw(sub, rel, cfg.max_rounds);
        }
        cur = std::move(next);
        const double prev = diam;
        diam = detail::diam_raw(cur);
        ++round;
        trace.push_back({round, diam});
        if (diam > 0.9 * prev) break;  // same noise-plateau rule as the raw path
    }
    return PosDefMatrix(cur[0]);
}

double equivariance_residual(const PointTuple& a, const InvertibleMatrix& g,
                             const BarycenterConfig& cfg) {
    if (g.dim() != a.dim()) throw DimMismatch("equivariance_residual: dimensions differ");
    const PosDefMatrix pushed = congruence(g, barycenter(a, cfg));
    std::vector<PosDefMatrix> moved;
    moved.reserve(static_cast<size_t>(a.size()));
    for (const auto& p : a) moved.push_back(congruence(g, p));
    const PosDefMatrix bary_moved = barycenter(PointTuple(std::move(moved)), cfg);
    return thompson_dist(pushed, bary_moved);
}

FolnerBoundCheck folner_bound_check(const PointTuple& common, const PointTuple& b_pts,
                                    const PointTuple& c_pts, const BarycenterConfig& cfg) {
    if (b_pts.size() != c_pts.size()) {
        throw SizeMismatch("folner_bound_check: block sizes differ");
    }
    std::vector<PosDefMatrix> ab(common.begin(), common.end());
    ab.insert(ab.end(), b_pts.begin(), b_pts.end());
    std::vector<PosDefMatrix> ac(common.begin(), common.end());
    ac.insert(ac.end(), c_pts.begin(), c_pts.end());

    std::vector<PosDefMatrix> bc(b_pts.begin(), b_pts.end());
    bc.insert(bc.end(), c_pts.begin(), c_pts.end());

    const double lhs = thompson_dist(barycenter(PointTuple(std::move(ab)), cfg),
                                     barycenter(PointTuple(std::move(ac)), cfg));
    const double weight = static_cast<double>(b_pts.size()) /
                          static_cast<double>(common.size() + b_pts.size());
    const double rhs = weight * tuple_diam(PointTuple(std::move(bc)));
    return FolnerBoundCheck{lhs, rhs};
}

}  // namespace conebary
