#pragma once

#include <vector>

#include "conebary/matrix_core.hpp"

namespace conebary {

// Riemannian least-squares mean of positive definite matrices, solved by the
// damped fixed-point iteration X <- X^{1/2} exp(theta * G(X)) X^{1/2} with
// G(X) the mean of log(X^{-1/2} P_i X^{-1/2}).
//
// Shares the properties the averaging arguments rely on: permutation
// invariance, congruence equivariance, non-expansiveness for the averaged
// tuple metric, midpoint for pairs, geometric mean on commuting tuples. Used
// for orbit tuples too large for the recursive barycenter.
Mat karcher_mean(const std::vector<Mat>& pts, double tol = 1e-12, int max_iter = 200,
                 const Mat* warm_start = nullptr);

}  // namespace conebary
