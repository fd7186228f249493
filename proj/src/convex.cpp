#include "conebary/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conebary/barycenter.hpp"

namespace conebary {

PointTuple::PointTuple(std::vector<PosDefMatrix> pts) : pts_(std::move(pts)) {
    if (pts_.empty()) throw SizeMismatch("PointTuple: at least one point required");
    const int d = pts_.front().dim();
    for (const auto& p : pts_) {
        if (p.dim() != d) {
            throw DimMismatch("PointTuple: mixed dimensions " + std::to_string(d) + " and " +
                              std::to_string(p.dim()));
        }
    }
}

double assignment_min_cost(const Eigen::MatrixXd& cost) {
    if (cost.rows() != cost.cols() || cost.rows() == 0) {
        throw DimMismatch("assignment_min_cost: square cost matrix required");
    }
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    // Potentials formulation; rows/columns are 1-based with a virtual column 0.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0);  // match[j] = row assigned to column j
    for (int i = 1; i <= n; ++i) {
        std::vector<double> minv(n + 1, inf);
        std::vector<int> way(n + 1, 0);
        std::vector<bool> used(n + 1, false);
        int j0 = 0;
        match[0] = i;
        do {
            used[j0] = true;
            const int i0 = match[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) total += cost(match[j] - 1, j - 1);
    return total;
}

double tuple_dist(const PointTuple& a, const PointTuple& b) {
    if (a.size() != b.size()) {
        throw SizeMismatch("tuple_dist: sizes " + std::to_string(a.size()) + " and " +
                           std::to_string(b.size()) + " differ");
    }
    if (a.dim() != b.dim()) throw DimMismatch("tuple_dist: dimensions differ");
    const int n = a.size();
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) cost(i, j) = thompson_dist(a[i], b[j]);
    }
    return assignment_min_cost(cost) / n;
}

double tuple_diam(const PointTuple& a) {
    double diam = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        for (int j = i + 1; j < a.size(); ++j) diam = std::max(diam, thompson_dist(a[i], a[j]));
    }
    return diam;
}

bool is_convex_close(const PosDefMatrix& x, const PointTuple& a, double slack) {
    const double diam = tuple_diam(a);
    for (int i = 0; i < a.size(); ++i) {
        if (thompson_dist(x, a[i]) > diam + slack) return false;
    }
    return true;
}

XPiReport x_pi_member(const PosDefMatrix& x, const PointTuple& orbit, double slack) {
    const double diam = tuple_diam(orbit);
    double worst = 0.0;
    for (int i = 0; i < orbit.size(); ++i) {
        worst = std::max(worst, thompson_dist(x, orbit[i]));
    }
    return XPiReport{worst <= diam + slack, worst - diam, diam};
}

NearestPair nearest_points(const PointTuple& a, const PointTuple& b) {
    if (a.dim() != b.dim()) throw DimMismatch("nearest_points: dimensions differ");
    NearestPair best{0, 0, std::numeric_limits<double>::infinity()};
    for (int i = 0; i < a.size(); ++i) {
        for (int j = 0; j < b.size(); ++j) {
            const double d = thompson_dist(a[i], b[j]);
            if (d < best.dist) best = NearestPair{i, j, d};
        }
    }
    return best;
}

namespace {

double farthest(const PosDefMatrix& x, const PointTuple& a, int& arg) {
    double worst = -1.0;
    arg = 0;
    for (int i = 0; i < a.size(); ++i) {
        const double d = thompson_dist(x, a[i]);
        if (d > worst) {
            worst = d;
            arg = i;
        }
    }
    return worst;
}

}  // namespace

CircumReport circumcenter_estimate(const PointTuple& a, const CircumConfig& cfg) {
    if (a.size() == 1) {
        return CircumReport{0.0, a[0], 0, 0.0, true};
    }
    PosDefMatrix x = barycenter(a);
    int arg = 0;
    double best_f = farthest(x, a, arg);
    PosDefMatrix best_x = x;

    const int sweep = a.size();
    double sweep_start_best = best_f;
    int k = 0;
    bool converged = false;
    double residual = 0.0;
    while (k < cfg.max_iter) {
        const double step = 1.0 / (k + 2.0);
        x = geodesic(x, a[arg], step);
        const double f = farthest(x, a, arg);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
        ++k;
        if (k % sweep == 0) {
            residual = sweep_start_best - best_f;
            if (residual < cfg.tol) {
                converged = true;
                break;
            }
            sweep_start_best = best_f;
        }
    }
    if (!converged) residual = sweep_start_best - best_f;
    return CircumReport{best_f, best_x, k, residual, converged};
}

}  // namespace conebary
