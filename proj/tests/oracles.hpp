#pragma once

// Independent oracles for the test suites. Everything here is deliberately
// naive: power iteration instead of an eigensolver, factorial enumeration
// instead of the assignment solver, log-coordinate arithmetic instead of the
// geometric recursion. Test values are frozen against these.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "conebary/matrix_core.hpp"

namespace oracles {

using conebary::Mat;
using conebary::Vec;

// Largest singular value by power iteration on M* M.
inline double op_norm_power(const Mat& m, int iters = 2000) {
    const Mat g = m.adjoint() * m;
    Vec v = Vec::Ones(m.cols());
    for (int i = 0; i < v.size(); ++i) v(i) += 0.01 * static_cast<double>(i);
    v.normalize();
    double lambda = 0.0;
    for (int k = 0; k < iters; ++k) {
        Vec w = g * v;
        lambda = v.dot(w);
        const double n = w.norm();
        if (n == 0.0) return 0.0;
        v = w / n;
    }
    return std::sqrt(std::max(0.0, lambda));
}

// min over permutations of sum cost(i, sigma(i)).
inline double assignment_brute_force(const std::vector<std::vector<double>>& cost) {
    const size_t n = cost.size();
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) total += cost[i][perm[i]];
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Coordinatewise geometric mean of diagonal matrices (log-coordinate reduction
// of the barycenter on the commuting subcone).
inline Mat diag_log_mean(const std::vector<Mat>& pts) {
    const auto dim = pts.front().rows();
    Mat out = Mat::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (const auto& p : pts) acc += std::log(p(i, i));
        out(i, i) = std::exp(acc / static_cast<double>(pts.size()));
    }
    return out;
}

// Geometric mean of determinants; the barycenter preserves it exactly.
inline double det_geomean(const std::vector<Mat>& pts) {
    double acc = 0.0;
    for (const auto& p : pts) acc += std::log(p.determinant());
    return std::exp(acc / static_cast<double>(pts.size()));
}

// Scalar Thompson distance for 1x1 matrices / positive reals.
inline double scalar_dist(double x, double y) { return std::abs(std::log(x) - std::log(y)); }

inline Mat random_gaussian(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) g(i, j) = n(rng);
    }
    return g;
}

inline Mat random_orthogonal(std::mt19937_64& rng, int dim) {
    const Mat g = random_gaussian(rng, dim);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    // Fix the sign convention so Q is a deterministic function of g.
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        if (r(i, i) < 0) q.col(i) = -q.col(i);
    }
    return q;
}

// Random SPD with log-spectrum uniform in [-spread, spread].
inline Mat random_spd(std::mt19937_64& rng, int dim, double spread = 1.5) {
    const Mat q = random_orthogonal(rng, dim);
    std::uniform_real_distribution<double> u(-spread, spread);
    Vec d(dim);
    for (int i = 0; i < dim; ++i) d(i) = std::exp(u(rng));
    return conebary::symmetrize(q * d.asDiagonal() * q.adjoint());
}

// Random invertible with singular values log-uniform, condition <= cond_max.
inline Mat random_invertible(std::mt19937_64& rng, int dim, double cond_max = 100.0) {
    const Mat u = random_orthogonal(rng, dim);
    const Mat v = random_orthogonal(rng, dim);
    const double half = 0.5 * std::log(cond_max);
    std::uniform_real_distribution<double> s(-half, half);
    Vec d(dim);
    for (int i = 0; i < dim; ++i) d(i) = std::exp(s(rng));
    return u * d.asDiagonal() * v.adjoint();
}

inline Mat random_diag_pd(std::mt19937_64& rng, int dim, double spread = 2.0) {
    std::uniform_real_distribution<double> u(-spread, spread);
    Mat m = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) m(i, i) = std::exp(u(rng));
    return m;
}

}  // namespace oracles
