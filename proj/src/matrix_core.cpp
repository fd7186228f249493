#include "conebary/matrix_core.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace conebary {

namespace {

void require_square(const Mat& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimMismatch(std::string(who) + ": expected a nonempty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

}  // namespace

Mat symmetrize(const Mat& m) { return (m + m.adjoint()) / Scalar(2); }

Spectrum sym_eig(const Mat& m) {
    require_square(m, "sym_eig");
    const Mat sym = symmetrize(m);
    const double asym = (m - sym).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    if (es.info() != Eigen::Success) {
        throw Error("sym_eig: eigensolver failed to converge");
    }
    Spectrum s{es.eigenvalues(), es.eigenvectors()};
    const double scale = s.eigenvalues.cwiseAbs().maxCoeff();
    if (asym > kSymTolScale * std::max(scale, 1e-300)) {
        throw DimMismatch("sym_eig: input asymmetry " + std::to_string(asym) +
                          " exceeds tolerance " + std::to_string(kSymTolScale * scale));
    }
    return s;
}

PosDefMatrix::PosDefMatrix(const Mat& m) {
    require_square(m, "PosDefMatrix");
    spec_ = sym_eig(m);
    m_ = symmetrize(m);
    if (spec_.eigenvalues(0) <= 0.0) {
        throw NotPositive("PosDefMatrix: smallest eigenvalue " +
                          std::to_string(spec_.eigenvalues(0)) + " is not positive");
    }
}

InvertibleMatrix::InvertibleMatrix(const Mat& m) : m_(m) {
    require_square(m, "InvertibleMatrix");
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    norm_ = sv(0);
    const double smin = sv(sv.size() - 1);
    if (smin <= kInvTolScale * norm_ || smin == 0.0) {
        throw Singular("InvertibleMatrix: smallest singular value " + std::to_string(smin) +
                       " below tolerance " + std::to_string(kInvTolScale * norm_));
    }
    inv_norm_ = 1.0 / smin;
    // V diag(1/sigma) U* is the numerically stable inverse given the SVD.
    inv_ = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

namespace detail {

Spectrum sym_eig_raw(const Mat& symmetric) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetric);
    return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

Mat power_raw(const Spectrum& s, double t) {
    Vec powered = s.eigenvalues.array().pow(t);
    return s.eigenvectors * powered.asDiagonal() * s.eigenvectors.adjoint();
}

Mat congruence_raw(const Mat& a, const Mat& m) { return a * m * a.adjoint(); }

}  // namespace detail

namespace {

template <typename F>
Mat apply_spectral(const Spectrum& s, F f) {
    Vec mapped(s.eigenvalues.size());
    for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(s.eigenvalues(i));
    return s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.adjoint();
}

}  // namespace

Mat mat_log(const PosDefMatrix& m) {
    return apply_spectral(m.spectrum(), [](double x) { return std::log(x); });
}

PosDefMatrix mat_exp_sym(const Mat& symmetric) {
    Spectrum s = sym_eig(symmetric);
    return PosDefMatrix(apply_spectral(s, [](double x) { return std::exp(x); }));
}

PosDefMatrix mat_sqrt(const PosDefMatrix& m) {
    return PosDefMatrix(apply_spectral(m.spectrum(), [](double x) { return std::sqrt(x); }));
}

PosDefMatrix mat_inv_sqrt(const PosDefMatrix& m) {
    return PosDefMatrix(
        apply_spectral(m.spectrum(), [](double x) { return 1.0 / std::sqrt(x); }));
}

PosDefMatrix mat_power(const PosDefMatrix& m, double t) {
    return PosDefMatrix(apply_spectral(m.spectrum(), [t](double x) { return std::pow(x, t); }));
}

Mat mat_fn(const Mat& m, MatFn fn, double t) {
    switch (fn) {
        case MatFn::Log:
            return mat_log(PosDefMatrix(m));
        case MatFn::ExpOfSymmetric:
            return mat_exp_sym(m).entries();
        case MatFn::Sqrt:
            return mat_sqrt(PosDefMatrix(m)).entries();
        case MatFn::InvSqrt:
            return mat_inv_sqrt(PosDefMatrix(m)).entries();
        case MatFn::Power:
            return mat_power(PosDefMatrix(m), t).entries();
    }
    throw Error("mat_fn: unknown function tag");
}

PosDefMatrix congruence(const InvertibleMatrix& a, const PosDefMatrix& m) {
    if (a.dim() != m.dim()) {
        throw DimMismatch("congruence: conjugator dim " + std::to_string(a.dim()) +
                          " vs matrix dim " + std::to_string(m.dim()));
    }
    return PosDefMatrix(detail::congruence_raw(a.entries(), m.entries()));
}

double op_norm(const Mat& m) {
    require_square(m, "op_norm");
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

double operator_size(const InvertibleMatrix& m) { return m.norm() * m.inv_norm(); }

bool approx_equal(const Mat& x, const Mat& y, double tol) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    const double scale = std::max({1.0, x.norm(), y.norm()});
    return (x - y).norm() <= tol * scale;
}

}  // namespace conebary
