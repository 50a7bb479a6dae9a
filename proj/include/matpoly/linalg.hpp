#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <complex>
#include <vector>

#include "matpoly/error.hpp"

namespace matpoly {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Numerical thresholds shared across the library.
///
/// rank_tol scales the SVD cutoff, cluster_radius controls root merging,
/// residual_tol bounds every scaled defect norm that is considered "zero".
struct Tolerance {
    double rank_tol = 1e-10;
    double cluster_radius = 1e-7;
    double residual_tol = 1e-8;
};

/// Deterministic ordering used for every eigenvalue list the library emits:
/// descending real part, ties broken by descending imaginary part.
inline bool spectral_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

inline bool all_finite(const CMat& m) { return m.allFinite(); }

namespace detail {

inline Eigen::JacobiSVD<CMat> svd_of(const CMat& m, unsigned options = 0) {
    return Eigen::JacobiSVD<CMat>(m, options);
}

inline double rank_threshold(const Eigen::JacobiSVD<CMat>& svd, const CMat& m,
                             const Tolerance& tol) {
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    return tol.rank_tol * static_cast<double>(std::max(m.rows(), m.cols())) * smax;
}

}  // namespace detail

/// Count of singular values above rank_tol * max(rows, cols) * sigma_max.
inline Eigen::Index numerical_rank(const CMat& m, const Tolerance& tol = {}) {
    if (m.size() == 0) throw DimensionMismatch("numerical_rank of empty matrix");
    auto svd = detail::svd_of(m);
    const double thresh = detail::rank_threshold(svd, m, tol);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thresh) ++r;
    return r;
}

/// Orthonormal basis of the numerical kernel, one column per kernel direction.
/// Returns a cols x 0 matrix when the kernel is trivial.
inline CMat nullspace(const CMat& m, const Tolerance& tol = {}) {
    if (m.size() == 0) throw DimensionMismatch("nullspace of empty matrix");
    auto svd = detail::svd_of(m, Eigen::ComputeFullV);
    const double thresh = detail::rank_threshold(svd, m, tol);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thresh) ++r;
    return svd.matrixV().rightCols(m.cols() - r);
}

/// Rows w with w * m = 0 (plain transpose, no conjugation in the pairing).
inline CMat left_nullspace(const CMat& m, const Tolerance& tol = {}) {
    return nullspace(m.transpose(), tol).transpose();
}

/// Ratio sigma_max / sigma_min; infinity for numerically singular input.
inline double condition_estimate(const CMat& m) {
    auto sv = detail::svd_of(m).singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / sv(sv.size() - 1);
}

/// Inverse of a square matrix; throws SingularMatrix on rank deficiency so
/// callers can treat the failure as an inadmissible selection.
inline CMat invert(const CMat& m, const Tolerance& tol = {}) {
    if (m.rows() != m.cols()) throw NotSquare("invert");
    if (numerical_rank(m, tol) < m.rows()) throw SingularMatrix();
    return m.partialPivLu().inverse();
}

inline CMat identity(Eigen::Index n) { return CMat::Identity(n, n); }
inline CMat zeros(Eigen::Index r, Eigen::Index c) { return CMat::Zero(r, c); }

/// Direct sum diag(a, b).
inline CMat block_diag(const CMat& a, const CMat& b) {
    CMat out = zeros(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

inline CMat block_diag(const std::vector<CMat>& blocks) {
    Eigen::Index r = 0, c = 0;
    for (const auto& b : blocks) { r += b.rows(); c += b.cols(); }
    CMat out = zeros(r, c);
    r = c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

/// Upper Jordan block J_size(eig): eig on the diagonal, ones above it.
inline CMat jordan_block(Complex eig, Eigen::Index size) {
    CMat j = zeros(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        j(i, i) = eig;
        if (i + 1 < size) j(i, i + 1) = 1.0;
    }
    return j;
}

}  // namespace matpoly
