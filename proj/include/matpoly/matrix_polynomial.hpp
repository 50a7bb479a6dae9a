#pragma once

#include <numbers>
#include <utility>
#include <vector>

#include "matpoly/linalg.hpp"
#include "matpoly/roots.hpp"

namespace matpoly {

/// Matrix polynomial P(lambda) = sum A_i lambda^i with n x m coefficients.
///
/// The public constructor make_polynomial trims trailing zero coefficients so
/// the stored degree is the true degree; formal() keeps a caller-chosen degree
/// (used for pencils, where lambda-coefficient zero still means degree one).
class MatrixPolynomial {
  public:
    static MatrixPolynomial checked(std::vector<CMat> coeffs) {
        if (coeffs.empty()) throw ZeroPolynomialInput("no coefficients");
        const Eigen::Index n = coeffs.front().rows(), m = coeffs.front().cols();
        if (n == 0 || m == 0) throw DimensionMismatch("empty coefficient matrix");
        for (const auto& a : coeffs) {
            if (a.rows() != n || a.cols() != m)
                throw DimensionMismatch("coefficient sizes differ");
            if (!all_finite(a)) throw InvariantViolation("non-finite coefficient entry");
        }
        while (coeffs.size() > 1 && coeffs.back().norm() == 0.0) coeffs.pop_back();
        if (coeffs.size() == 1 && coeffs.back().norm() == 0.0)
            throw ZeroPolynomialInput("zero polynomial");
        return MatrixPolynomial(std::move(coeffs));
    }

    /// Keeps the coefficient list as-is (no trimming). The list must be
    /// dimensionally consistent and nonempty.
    static MatrixPolynomial formal(std::vector<CMat> coeffs) {
        if (coeffs.empty()) throw ZeroPolynomialInput("no coefficients");
        const Eigen::Index n = coeffs.front().rows(), m = coeffs.front().cols();
        for (const auto& a : coeffs)
            if (a.rows() != n || a.cols() != m)
                throw DimensionMismatch("coefficient sizes differ");
        return MatrixPolynomial(std::move(coeffs));
    }

    Eigen::Index rows() const { return coeffs_.front().rows(); }
    Eigen::Index cols() const { return coeffs_.front().cols(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const CMat& coeff(int i) const { return coeffs_[static_cast<size_t>(i)]; }
    const std::vector<CMat>& coefficients() const { return coeffs_; }

    double coefficient_scale() const {
        double s = 0.0;
        for (const auto& a : coeffs_) s += a.norm();
        return s;
    }

    /// sum ||A_i|| max(1, |x|)^i: the natural magnitude of P near |x|.
    double scale_at(double ax) const {
        double s = 0.0, xp = 1.0;
        for (const auto& a : coeffs_) {
            s += a.norm() * xp;
            xp *= std::max(1.0, ax);
        }
        return std::max(1.0, s);
    }

  private:
    explicit MatrixPolynomial(std::vector<CMat> coeffs) : coeffs_(std::move(coeffs)) {}
    std::vector<CMat> coeffs_;
};

inline MatrixPolynomial make_polynomial(std::vector<CMat> coeffs) {
    return MatrixPolynomial::checked(std::move(coeffs));
}

/// Horner evaluation of P at a scalar point.
inline CMat eval(const MatrixPolynomial& p, Complex x) {
    CMat acc = p.coeff(p.degree());
    for (int i = p.degree() - 1; i >= 0; --i) acc = (acc * x + p.coeff(i)).eval();
    return acc;
}

/// lambda^k P(1/lambda): the coefficient list reversed, then re-trimmed.
inline MatrixPolynomial reverse(const MatrixPolynomial& p) {
    std::vector<CMat> rev(p.coefficients().rbegin(), p.coefficients().rend());
    return make_polynomial(std::move(rev));
}

/// Integer power by repeated multiplication; cpow(0, 0) = 1 by convention.
inline Complex cpow(Complex base, int e) {
    Complex acc(1.0, 0.0);
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
}

/// (1/j!) P^(j)(a) = sum_{i >= j} binom(i, j) A_i a^{i-j}; zero for j > degree.
inline CMat taylor_coeff(const MatrixPolynomial& p, Complex a, int j) {
    if (j < 0) throw DimensionMismatch("negative derivative order");
    CMat out = zeros(p.rows(), p.cols());
    if (j > p.degree()) return out;
    Complex apow(1.0, 0.0);
    for (int i = j; i <= p.degree(); ++i) {
        double binom = 1.0;
        for (int t = 0; t < j; ++t) binom *= double(i - t) / double(j - t);
        out += p.coeff(i) * (binom * apow);
        apow *= a;
    }
    return out;
}

/// Regularity summary: det P, its degree M, and the count nk - M of infinite
/// eigenvalues (with multiplicity).
struct RegularityReport {
    bool regular = false;
    ScalarPolynomial det_poly;
    int M = 0;
    int infinite_mult_total = 0;
};

/// det P(lambda) by evaluation at nk+1 points on a circle of radius
/// 1 + max ||A_i|| followed by discrete-Fourier interpolation. Coefficients
/// below 1e-10 * max|coeff| are flushed to zero so the reported degree is not
/// inflated by roundoff.
inline ScalarPolynomial determinant_polynomial(const MatrixPolynomial& p) {
    if (p.rows() != p.cols()) throw NotSquare("determinant_polynomial");
    const int n = static_cast<int>(p.rows());
    const int deg_bound = n * p.degree();
    if (deg_bound == 0) return ScalarPolynomial({eval(p, 0.0).determinant()});

    double radius = 0.0;
    for (const auto& a : p.coefficients()) radius = std::max(radius, a.norm());
    radius += 1.0;

    const int N = deg_bound + 1;
    std::vector<Complex> samples(N);
    for (int j = 0; j < N; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / N;
        samples[j] = eval(p, radius * Complex(std::cos(theta), std::sin(theta))).determinant();
    }
    std::vector<Complex> coeffs(N);
    for (int i = 0; i < N; ++i) {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < N; ++j) {
            const double theta = -2.0 * std::numbers::pi * i * j / N;
            acc += samples[j] * Complex(std::cos(theta), std::sin(theta));
        }
        coeffs[i] = acc / (double(N) * std::pow(radius, i));
    }

    double biggest = 0.0;
    for (const auto& c : coeffs) biggest = std::max(biggest, std::abs(c));
    for (auto& c : coeffs)
        if (std::abs(c) < 1e-10 * biggest) c = Complex(0.0, 0.0);
    return ScalarPolynomial(std::move(coeffs));
}

inline RegularityReport regularity(const MatrixPolynomial& p) {
    if (p.rows() != p.cols()) throw NotSquare("regularity");
    RegularityReport rep;
    rep.det_poly = determinant_polynomial(p);
    rep.regular = !rep.det_poly.is_zero();
    rep.M = rep.regular ? rep.det_poly.degree() : 0;
    const int nk = static_cast<int>(p.rows()) * p.degree();
    rep.infinite_mult_total = rep.regular ? nk - rep.M : 0;
    return rep;
}

}  // namespace matpoly
