#pragma once

#include <numbers>
#include <random>
#include <vector>

#include "matpoly/linearize.hpp"
#include "matpoly/solvents.hpp"

namespace matpoly {

/// A verified right factorization P = Q * F with F(lambda) = lambda S2 - S1.
struct Factorization {
    Pencil factor;
    MatrixPolynomial quotient;
    double max_rel_residual = 0.0;
    Bisolvent source;
};

/// The right factor pencil of a separable bisolvent. Throws DegenerateFactor
/// when det F vanishes identically, which signals a non-separable input.
inline Pencil right_factor(const Bisolvent& b) {
    Pencil f{b.S2, -b.S1};
    if (determinant_polynomial(f.as_polynomial()).is_zero())
        throw DegenerateFactor("det(lambda S2 - S1) is identically zero");
    return f;
}

namespace detail {

inline double point_scale(const MatrixPolynomial& p, Complex x) {
    return p.scale_at(std::abs(x));
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Points on a circle of seeded radius where F is comfortably nonsingular.
/// Retries with a new radius when any point lands near the spectrum of F.
inline std::vector<Complex> sample_points_avoiding(const Pencil& f, int count, double base_radius,
                                                   uint64_t seed, bool jitter_angles) {
    std::mt19937_64 rng(seed);
    const double fscale = f.A1.norm() + f.A0.norm() + 1.0;
    const auto m = static_cast<double>(f.rows());
    for (int attempt = 0; attempt < 20; ++attempt) {
        const double radius = base_radius * (1.0 + uniform01(rng));
        const double offset = jitter_angles ? 2.0 * std::numbers::pi * uniform01(rng) : 0.0;
        std::vector<Complex> pts(static_cast<size_t>(count));
        bool ok = true;
        for (int j = 0; j < count; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / count + offset;
            pts[static_cast<size_t>(j)] = radius * Complex(std::cos(theta), std::sin(theta));
            const Complex x = pts[static_cast<size_t>(j)];
            const double bound = std::pow(std::max(1.0, std::abs(x)) * fscale, m);
            if (std::abs(f.eval(x).determinant()) <= 1e-8 * bound) { ok = false; break; }
        }
        if (ok) return pts;
    }
    throw SpectrumAvoidanceFailed("no sample radius cleared the factor spectrum");
}

}  // namespace detail

struct LeftQuotient {
    MatrixPolynomial quotient;
    double max_rel_residual = 0.0;
};

/// Q of degree <= k-1 with P = Q F, computed by interpolation: Q(x_j) =
/// P(x_j) F(x_j)^{-1} at k spectrum-avoiding points on a circle, recombined
/// by discrete Fourier inversion, then re-verified at k fresh points.
/// Interpolation stays valid when the leading coefficient of F is singular,
/// which is exactly the infinite-eigenvalue case a coefficient recursion
/// cannot handle.
inline LeftQuotient left_quotient(const MatrixPolynomial& p, const Pencil& f,
                                  const Tolerance& tol = {}) {
    if (p.rows() != p.cols() || f.rows() != p.rows() || f.cols() != p.cols())
        throw DimensionMismatch("left_quotient");
    const int k = p.degree();
    if (k < 1) throw DimensionMismatch("left_quotient needs degree >= 1");
    const Eigen::Index n = p.rows();

    double base_radius = 1.0;
    for (const auto& a : p.coefficients()) base_radius = std::max(base_radius, a.norm());
    base_radius += 1.0;

    const auto pts =
        detail::sample_points_avoiding(f, k, base_radius, 0x5eed5eedULL, false);
    const double radius = std::abs(pts[0]);

    std::vector<CMat> samples;
    for (const auto& x : pts) samples.push_back(eval(p, x) * invert(f.eval(x), tol));

    std::vector<CMat> coeffs(static_cast<size_t>(k), zeros(n, n));
    for (int t = 0; t < k; ++t) {
        CMat acc = zeros(n, n);
        for (int j = 0; j < k; ++j) {
            const double theta = -2.0 * std::numbers::pi * t * j / k;
            acc += samples[static_cast<size_t>(j)] * Complex(std::cos(theta), std::sin(theta));
        }
        coeffs[static_cast<size_t>(t)] = acc / (double(k) * std::pow(radius, t));
    }
    double biggest = 0.0;
    for (const auto& c : coeffs) biggest = std::max(biggest, c.norm());
    for (auto& c : coeffs)
        if (c.norm() < 1e-10 * biggest) c.setZero();

    LeftQuotient out{make_polynomial(std::move(coeffs)), 0.0};

    for (int j = 0; j < k; ++j) {
        const double theta = 2.0 * std::numbers::pi * (j + 0.5) / k + 0.31;
        const Complex x = base_radius * 1.37 * Complex(std::cos(theta), std::sin(theta));
        const double resid =
            (eval(p, x) - eval(out.quotient, x) * f.eval(x)).norm() / detail::point_scale(p, x);
        out.max_rel_residual = std::max(out.max_rel_residual, resid);
    }
    if (out.max_rel_residual > tol.residual_tol)
        throw NotADivisor("verification residual exceeds tolerance");
    return out;
}

/// One factorization per enumerated separable bisolvent, in enumeration
/// order, each verified by left_quotient.
inline std::vector<Factorization> factor_atlas(const MatrixPolynomial& p,
                                               const Tolerance& tol = {},
                                               long long limit = 1000000) {
    std::vector<Factorization> out;
    for (const auto& b : bisolvents(p, tol, limit).items) {
        const Pencil f = right_factor(b);
        auto lq = left_quotient(p, f, tol);
        out.push_back(Factorization{f, std::move(lq.quotient), lq.max_rel_residual, b});
    }
    return out;
}

/// Two-way factor check: (a) divisibility through the interpolated quotient,
/// (b) membership of the left-equivalence class of some atlas factor, tested
/// by constancy of F(x) F0(x)^{-1} across sample points.
struct FactorCheck {
    bool divides = false;
    double residual = std::numeric_limits<double>::infinity();
    bool equivalent_to_atlas = false;
    int atlas_index = -1;
};

inline FactorCheck verify_right_factor(const MatrixPolynomial& p, const Pencil& f,
                                       const Tolerance& tol = {}) {
    if (f.rows() != f.cols() || f.rows() != p.rows())
        throw DimensionMismatch("verify_right_factor");
    if (determinant_polynomial(f.as_polynomial()).is_zero())
        throw NotRegularFactor("factor pencil is singular");

    FactorCheck check;
    try {
        check.residual = left_quotient(p, f, tol).max_rel_residual;
        check.divides = true;
    } catch (const NotADivisor&) {
        check.divides = false;
    }

    const auto atlas = factor_atlas(p, tol);
    for (size_t i = 0; i < atlas.size(); ++i) {
        const Pencil& f0 = atlas[i].factor;
        std::vector<Complex> pts;
        try {
            pts = detail::sample_points_avoiding(f0, 3, 2.0 + f0.A1.norm() + f0.A0.norm(),
                                                 0xA71A5ULL, true);
        } catch (const SpectrumAvoidanceFailed&) {
            continue;
        }
        CMat g0;
        bool constant = true;
        for (const auto& x : pts) {
            const CMat g = f.eval(x) * invert(f0.eval(x), tol);
            if (g0.size() == 0) g0 = g;
            else constant = constant && detail::matrices_close(g0, g, 1e-7);
        }
        if (constant && g0.size() && numerical_rank(g0, tol) == g0.rows()) {
            check.equivalent_to_atlas = true;
            check.atlas_index = static_cast<int>(i);
            break;
        }
    }
    return check;
}

}  // namespace matpoly
