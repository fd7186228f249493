#include "conebary/karcher.hpp"

#include <cmath>

#include "conebary/thompson.hpp"

namespace conebary {

namespace {

Mat log_map(const Spectrum& s) {
    Vec mapped = s.eigenvalues.array().log();
    return s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.adjoint();
}

Mat exp_map(const Mat& symmetric) {
    const Spectrum s = detail::sym_eig_raw(symmetric);
    Vec mapped = s.eigenvalues.array().exp();
    return s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.adjoint();
}

}  // namespace

Mat karcher_mean(const std::vector<Mat>& pts, double tol, int max_iter, const Mat* warm_start) {
    if (pts.empty()) throw SizeMismatch("karcher_mean: empty tuple");
    if (pts.size() == 1) return pts[0];
    if (pts.size() == 2) return detail::midpoint_raw(pts[0], pts[1]);

    Mat x = warm_start ? *warm_start : pts[0];
    double theta = 1.0;
    double prev_grad = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        const Spectrum sx = detail::sym_eig_raw(x);
        const Mat half = detail::power_raw(sx, 0.5);
        const Mat inv_half = detail::power_raw(sx, -0.5);
        Mat grad = Mat::Zero(x.rows(), x.cols());
        for (const auto& p : pts) {
            grad += log_map(detail::sym_eig_raw(symmetrize(inv_half * p * inv_half)));
        }
        grad /= static_cast<double>(pts.size());
        const double gnorm = grad.norm();
        if (gnorm <= tol) return x;
        if (prev_grad >= 0.0 && gnorm > prev_grad) {
            theta = std::max(0.25, theta * 0.5);  // damp when the step overshoots
        }
        prev_grad = gnorm;
        x = symmetrize(half * exp_map(theta * grad) * half);
    }
    throw NoConvergence("karcher_mean: gradient norm " + std::to_string(prev_grad) +
                        " after max iterations");
}

}  // namespace conebary
