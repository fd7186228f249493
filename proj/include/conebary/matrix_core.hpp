#pragma once

#include <Eigen/Dense>

#include "conebary/errors.hpp"

namespace conebary {

#ifdef CONEBARY_COMPLEX_FIELD
using Scalar = std::complex<double>;
#else
using Scalar = double;
#endif

using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::VectorXd;  // spectra of self-adjoint matrices are real

// Tolerances, relative to the operator norm of the input unless stated.
inline constexpr double kSymTolScale = 1e-10;  // admissible asymmetry
inline constexpr double kInvTolScale = 1e-12;  // smallest admissible singular value
inline constexpr double kReconTol = 1e-9;      // eigendecomposition reconstruction
inline constexpr double kCondLimit = 1e12;     // conditioning guard for cone geometry
inline constexpr double kEqualityTol = 1e-8;   // relative Frobenius equality threshold

struct Spectrum {
    Vec eigenvalues;    // ascending
    Mat eigenvectors;   // column i pairs with eigenvalues[i]
};

// (m + m*)/2.
Mat symmetrize(const Mat& m);

// Eigendecomposition of a self-adjoint matrix. The input is symmetrized first;
// asymmetry beyond kSymTolScale * |m| is rejected (DimMismatch for non-square).
Spectrum sym_eig(const Mat& m);

// Positive definite matrix. Validates on construction: square, self-adjoint up
// to tolerance, smallest eigenvalue > 0 strictly. The spectrum is computed
// eagerly and cached; instances are immutable and safe to share across threads.
class PosDefMatrix {
public:
    explicit PosDefMatrix(const Mat& m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& entries() const { return m_; }
    const Spectrum& spectrum() const { return spec_; }

    double lambda_min() const { return spec_.eigenvalues(0); }
    double lambda_max() const { return spec_.eigenvalues(spec_.eigenvalues.size() - 1); }
    double cond() const { return lambda_max() / lambda_min(); }

private:
    Mat m_;
    Spectrum spec_;
};

// Invertible square matrix. Validates sigma_min > kInvTolScale * sigma_max on
// construction and caches the inverse together with the extreme singular values.
class InvertibleMatrix {
public:
    explicit InvertibleMatrix(const Mat& m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& entries() const { return m_; }
    const Mat& inverse() const { return inv_; }
    double norm() const { return norm_; }          // largest singular value
    double inv_norm() const { return inv_norm_; }  // |m^-1| = 1/sigma_min

private:
    Mat m_;
    Mat inv_;
    double norm_;
    double inv_norm_;
};

enum class MatFn { Log, ExpOfSymmetric, Sqrt, InvSqrt, Power };

Mat mat_log(const PosDefMatrix& m);
PosDefMatrix mat_exp_sym(const Mat& symmetric);
PosDefMatrix mat_sqrt(const PosDefMatrix& m);
PosDefMatrix mat_inv_sqrt(const PosDefMatrix& m);
PosDefMatrix mat_power(const PosDefMatrix& m, double t);

// Tag-dispatch convenience wrapper; `t` is only read for MatFn::Power.
Mat mat_fn(const Mat& m, MatFn fn, double t = 0.0);

// a m a*.
PosDefMatrix congruence(const InvertibleMatrix& a, const PosDefMatrix& m);

// Largest singular value of a general square matrix.
double op_norm(const Mat& m);

// s(m) = |m| * |m^-1| >= 1.
double operator_size(const InvertibleMatrix& m);

// True when |x - y|_F <= kEqualityTol * max(1, |x|_F, |y|_F).
bool approx_equal(const Mat& x, const Mat& y, double tol = kEqualityTol);

namespace detail {

// Unvalidated fast paths used by iteration-heavy internals. Inputs must be
// self-adjoint (and positive definite where the name implies it).
Spectrum sym_eig_raw(const Mat& symmetric);
Mat power_raw(const Spectrum& s, double t);
Mat congruence_raw(const Mat& a, const Mat& m);  // a m a*

}  // namespace detail

}  // namespace conebary
