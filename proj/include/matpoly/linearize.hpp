#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "matpoly/spectral.hpp"

namespace matpoly {

/// Degree-one matrix polynomial lambda*A1 + A0, kept formal: A1 may be
/// singular or even zero without collapsing the degree.
struct Pencil {
    CMat A1, A0;

    Eigen::Index rows() const { return A0.rows(); }
    Eigen::Index cols() const { return A0.cols(); }
    MatrixPolynomial as_polynomial() const { return MatrixPolynomial::formal({A0, A1}); }
    CMat eval(Complex x) const { return A0 + x * A1; }
};

/// Down companion pencil of size nk: lambda-part diag(I, ..., I, A_k),
/// constant part with -I superdiagonal blocks and bottom block row
/// (A_0, ..., A_{k-1}). A pencil is its own linearization.
inline Pencil companion_down(const MatrixPolynomial& p) {
    if (p.rows() != p.cols()) throw NotSquare("companion_down");
    const Eigen::Index n = p.rows();
    const int k = p.degree();
    if (k < 1) throw DimensionMismatch("companion of a constant polynomial");
    if (k == 1) return Pencil{p.coeff(1), p.coeff(0)};

    const Eigen::Index nk = n * k;
    Pencil c{zeros(nk, nk), zeros(nk, nk)};
    for (int b = 0; b + 1 < k; ++b) c.A1.block(n * b, n * b, n, n) = identity(n);
    c.A1.bottomRightCorner(n, n) = p.coeff(k);
    for (int b = 0; b + 1 < k; ++b) c.A0.block(n * b, n * (b + 1), n, n) = -identity(n);
    for (int b = 0; b < k; ++b) c.A0.block(nk - n, n * b, n, n) = p.coeff(b);
    return c;
}

/// Right companion: C_r(lambda; P) = C_d(lambda; P^T)^T, which moves the
/// coefficients into the rightmost block column.
inline Pencil companion_right(const MatrixPolynomial& p) {
    if (p.rows() != p.cols()) throw NotSquare("companion_right");
    std::vector<CMat> transposed;
    for (const auto& a : p.coefficients()) transposed.push_back(a.transpose());
    const Pencil cd = companion_down(MatrixPolynomial::formal(std::move(transposed)));
    return Pencil{cd.A1.transpose(), cd.A0.transpose()};
}

/// Weierstrass invariants of a regular pencil: finite eigenvalues with their
/// partial multiplicities, plus the partial multiplicities at infinity
/// (reported in the nilpotent-comonic normalization).
struct WeierstrassData {
    struct FiniteEigenvalue {
        Complex value;
        std::vector<int> partial_multiplicities;  // descending
    };
    std::vector<FiniteEigenvalue> finite;          // ordered by spectral_less
    std::vector<int> infinite;                     // descending
};

inline WeierstrassData weierstrass_data(const Pencil& c, const Tolerance& tol = {}) {
    if (c.rows() != c.cols()) throw NotSquare("weierstrass_data");
    const MatrixPolynomial p = c.as_polynomial();
    const RegularityReport reg = regularity(p);
    if (!reg.regular) throw SingularPencil("Kronecker null indices are out of scope");

    WeierstrassData data;
    if (reg.M > 0) {
        for (const Root& root : poly_roots(reg.det_poly, tol)) {
            WeierstrassData::FiniteEigenvalue fe;
            fe.value = root.value;
            int total = 0;
            for (const auto& chain :
                 detail::chains_at_unchecked(p, root.value, tol, static_cast<int>(c.rows()))) {
                fe.partial_multiplicities.push_back(chain.length());
                total += chain.length();
            }
            if (total != root.multiplicity)
                throw NoConvergence("partial multiplicities disagree with root multiplicity");
            data.finite.push_back(std::move(fe));
        }
    }
    if (reg.infinite_mult_total > 0) {
        for (const auto& chain : jordan_chains_at_infinity(p, tol))
            data.infinite.push_back(chain.length());
        std::sort(data.infinite.rbegin(), data.infinite.rend());
    }
    return data;
}

/// Weierstrass data read off a pair's block layout: T blocks are finite
/// eigenvalues, nonzero Z blocks are finite eigenvalues 1/eig, zero Z blocks
/// are infinite structure. Blocks at the same point are clustered.
inline WeierstrassData weierstrass_of_pair(const StandardPair& pair, const Tolerance& tol = {}) {
    std::vector<std::pair<Complex, int>> finite;
    WeierstrassData data;
    for (const auto& b : pair.t_blocks) finite.push_back({b.eigenvalue, b.size});
    for (const auto& b : pair.z_blocks) {
        if (std::abs(b.eigenvalue) <= tol.cluster_radius) data.infinite.push_back(b.size);
        else finite.push_back({1.0 / b.eigenvalue, b.size});
    }
    std::sort(data.infinite.rbegin(), data.infinite.rend());

    std::sort(finite.begin(), finite.end(),
              [](const auto& a, const auto& b) { return spectral_less(a.first, b.first); });
    for (const auto& [value, size] : finite) {
        const double radius = tol.cluster_radius * (1.0 + std::abs(value));
        if (!data.finite.empty() && std::abs(data.finite.back().value - value) <= radius) {
            data.finite.back().partial_multiplicities.push_back(size);
        } else {
            data.finite.push_back({value, {size}});
        }
    }
    for (auto& fe : data.finite)
        std::sort(fe.partial_multiplicities.rbegin(), fe.partial_multiplicities.rend());
    return data;
}

/// Multiset equality of spectral data, with eigenvalues matched within the
/// clustering radius.
inline bool same_weierstrass_data(const WeierstrassData& a, const WeierstrassData& b,
                                  const Tolerance& tol = {}) {
    if (a.infinite != b.infinite || a.finite.size() != b.finite.size()) return false;
    for (size_t i = 0; i < a.finite.size(); ++i) {
        const auto& fa = a.finite[i];
        const auto& fb = b.finite[i];
        const double radius = tol.cluster_radius * (1.0 + std::abs(fa.value)) * 10.0;
        if (std::abs(fa.value - fb.value) > radius) return false;
        if (fa.partial_multiplicities != fb.partial_multiplicities) return false;
    }
    return true;
}

}  // namespace matpoly
