#pragma once

#include <vector>

#include "conebary/thompson.hpp"

namespace conebary {

// Finite tuple of cone points of equal dimension. Order is bookkeeping only:
// the tuple metric minimizes over index matchings.
class PointTuple {
public:
    explicit PointTuple(std::vector<PosDefMatrix> pts);

    int size() const { return static_cast<int>(pts_.size()); }
    int dim() const { return pts_.front().dim(); }
    const PosDefMatrix& operator[](int i) const { return pts_[static_cast<size_t>(i)]; }
    const std::vector<PosDefMatrix>& points() const { return pts_; }

    auto begin() const { return pts_.begin(); }
    auto end() const { return pts_.end(); }

private:
    std::vector<PosDefMatrix> pts_;
};

// Exact minimum-cost perfect matching on a square cost matrix (Hungarian
// algorithm with potentials, O(n^3)).
double assignment_min_cost(const Eigen::MatrixXd& cost);

// d_(n)(a, b) = min over permutations of (1/n) sum_i d(a_i, b_sigma(i)).
double tuple_dist(const PointTuple& a, const PointTuple& b);

// Largest pairwise distance; 0 for singletons.
double tuple_diam(const PointTuple& a);

// max_i d(x, a_i) <= tuple_diam(a) + slack.
bool is_convex_close(const PosDefMatrix& x, const PointTuple& a, double slack = 1e-9);

struct XPiReport {
    bool member;
    double margin;      // max_i d(x, orbit_i) - orbit_diam; negative inside
    double orbit_diam;
};

// is_convex_close specialized to a sampled orbit, with the margin reported.
XPiReport x_pi_member(const PosDefMatrix& x, const PointTuple& orbit, double slack = 1e-9);

struct NearestPair {
    int i;
    int j;
    double dist;
};

// Closest pair across two tuples; ties break lexicographically on (i, j).
NearestPair nearest_points(const PointTuple& a, const PointTuple& b);

struct CircumConfig {
    double tol = 1e-6;   // stop when a sweep improves the best value by less
    int max_iter = 2000;
};

struct CircumReport {
    double radius_estimate;
    PosDefMatrix center_estimate;
    int iterations;
    double residual;   // best-value improvement over the final sweep
    bool converged;
};

// Farthest-point descent for the circumcenter: start at the tuple barycenter,
// step toward the current farthest point with weight 1/(k+2), track the best
// iterate. The bracket diam/2 - tol <= radius <= diam + tol always holds.
CircumReport circumcenter_estimate(const PointTuple& a, const CircumConfig& cfg = {});

}  // namespace conebary
