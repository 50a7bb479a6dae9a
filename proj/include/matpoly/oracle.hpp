#pragma once

#include <numbers>
#include <random>
#include <vector>

#include "matpoly/factor.hpp"
#include "matpoly/spectral.hpp"

namespace matpoly {

/// A planned spectrum for a known-answer instance: finite eigenvalues with
/// chain-length lists, infinite chain lengths, and the seed that fixes the
/// random chain vectors. Total planned dimension must equal n*k.
struct PlantedSpectrum {
    int n = 1;
    int k = 1;
    std::vector<std::pair<Complex, std::vector<int>>> finite;
    std::vector<int> infinite;
    uint64_t seed = 0;
};

struct PlantedInstance {
    MatrixPolynomial polynomial;
    StandardPair pair;
};

namespace detail {

inline Complex random_unit_entry(std::mt19937_64& rng) {
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    return Complex(u(), u());
}

inline CMat random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = random_unit_entry(rng);
    return m;
}

}  // namespace detail

/// Draw random chain vectors for the plan, retry until the controllability
/// matrix is well conditioned, and rebuild the polynomial from the pair.
/// The returned pair is a known-answer maximal standard pair of the returned
/// polynomial.
inline PlantedInstance random_regular(const PlantedSpectrum& plan, const Tolerance& tol = {}) {
    if (plan.n < 1 || plan.k < 1) throw PlanInfeasible("n and k must be positive");
    int p = 0, q = 0;
    for (const auto& [eig, lens] : plan.finite)
        for (int len : lens) {
            if (len < 1) throw PlanInfeasible("chain lengths must be positive");
            p += len;
        }
    for (int len : plan.infinite) {
        if (len < 1) throw PlanInfeasible("chain lengths must be positive");
        q += len;
    }
    if (p + q != plan.n * plan.k) throw PlanInfeasible("planned dimension must equal n*k");

    std::mt19937_64 rng(plan.seed ^ 0x6a09e667f3bcc909ULL);
    for (int attempt = 0; attempt < 50; ++attempt) {
        StandardPair pair;
        pair.X = detail::random_matrix(rng, plan.n, p);
        pair.Y = detail::random_matrix(rng, plan.n, q);
        pair.T = zeros(p, p);
        pair.Z = zeros(q, q);
        Eigen::Index at = 0;
        for (const auto& [eig, lens] : plan.finite)
            for (int len : lens) {
                pair.T.block(at, at, len, len) = jordan_block(eig, len);
                pair.t_blocks.push_back({eig, len});
                at += len;
            }
        at = 0;
        for (int len : plan.infinite) {
            pair.Z.block(at, at, len, len) = jordan_block(Complex(0.0, 0.0), len);
            pair.z_blocks.push_back({Complex(0.0, 0.0), len});
            at += len;
        }

        const CMat qk = controllability(pair, std::max(1, plan.k));
        if (numerical_rank(qk, tol) != p + q || condition_estimate(qk) > 1e6) continue;

        MatrixPolynomial poly = reconstruct_from_pair(pair, plan.n, plan.k, tol);
        if (poly.degree() != plan.k) continue;
        const RegularityReport reg = regularity(poly);
        if (!reg.regular || reg.M != p) continue;
        return PlantedInstance{std::move(poly), std::move(pair)};
    }
    throw PlanInfeasible("conditioning retries exhausted");
}

/// Scaled norm of sum A_i S^i by Horner evaluation; an intentionally separate
/// code path from the enumeration module's power accumulation.
inline double brute_solvent_check(const MatrixPolynomial& p, const CMat& s) {
    if (p.rows() != p.cols() || s.rows() != p.rows() || s.cols() != p.cols())
        throw DimensionMismatch("brute_solvent_check");
    CMat acc = p.coeff(p.degree());
    for (int i = p.degree() - 1; i >= 0; --i) acc = (acc * s + p.coeff(i)).eval();
    return acc.norm() / (std::max(1.0, p.coefficient_scale()) *
                         std::pow(std::max(1.0, s.norm()), p.degree()));
}

/// Brute-force solvent enumeration for spectra whose finite part is
/// semisimple: every m-subset of the M eigenvectors (built by direct
/// nullspaces of P(lambda_i), no pair machinery), candidate
/// V diag(lambda) V^{-1}, accepted by substitution. The infinite structure is
/// irrelevant to solvents and is not restricted.
inline std::vector<CMat> exhaustive_semisimple_solvents(const MatrixPolynomial& p,
                                                        const Tolerance& tol = {}) {
    const RegularityReport reg = regularity(p);
    if (!reg.regular) throw NotRegular("exhaustive_semisimple_solvents");
    const Eigen::Index m = p.rows();

    std::vector<Complex> values;
    std::vector<CVec> vectors;
    for (const Root& root : poly_roots(reg.det_poly, tol)) {
        const CMat kernel = nullspace(eval(p, root.value), tol);
        if (kernel.cols() != root.multiplicity)
            throw NotSemisimple("finite eigenvalue with nontrivial Jordan block");
        for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
            values.push_back(root.value);
            vectors.push_back(kernel.col(c));
        }
    }

    const int total = static_cast<int>(values.size());
    std::vector<CMat> out;
    if (total < m) return out;

    std::vector<int> idx(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<size_t>(i)] = i;
    while (true) {
        CMat v(m, m);
        CMat d = zeros(m, m);
        for (int i = 0; i < m; ++i) {
            v.col(i) = vectors[static_cast<size_t>(idx[static_cast<size_t>(i)])];
            d(i, i) = values[static_cast<size_t>(idx[static_cast<size_t>(i)])];
        }
        if (numerical_rank(v, tol) == m) {
            const CMat s = v * d * invert(v, tol);
            if (brute_solvent_check(p, s) <= tol.residual_tol) out.push_back(s);
        }

        int pos = m - 1;
        while (pos >= 0 && idx[static_cast<size_t>(pos)] == total - m + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<size_t>(pos)];
        for (int i = pos + 1; i < m; ++i)
            idx[static_cast<size_t>(i)] = idx[static_cast<size_t>(i - 1)] + 1;
    }
    return out;
}

/// Independent divisibility probe: samples P F^{-1} at seeded random angles
/// and least-squares-fits a degree <= k-1 polynomial (a different point set
/// and interpolation basis than left_quotient uses). True when the fit
/// reproduces every sample within tolerance.
inline bool divisibility_probe(const MatrixPolynomial& p, const Pencil& f, int num_points = 0,
                               const Tolerance& tol = {}) {
    if (f.rows() != f.cols() || f.rows() != p.rows())
        throw DimensionMismatch("divisibility_probe");
    if (determinant_polynomial(f.as_polynomial()).is_zero())
        throw SpectrumAvoidanceFailed("factor pencil is singular everywhere");
    const int k = std::max(1, p.degree());
    const int count = std::max(num_points, k + 3);

    double base_radius = 2.0;
    for (const auto& a : p.coefficients()) base_radius = std::max(base_radius, a.norm());
    const auto pts = detail::sample_points_avoiding(f, count, base_radius, 0x0b5e55edULL, true);
    const double radius = std::abs(pts[0]);

    std::vector<CMat> samples;
    for (const auto& x : pts) samples.push_back(eval(p, x) * invert(f.eval(x), tol));

    // Entrywise least-squares fit over the scaled monomial basis (x/r)^t.
    CMat vander(count, k);
    for (int j = 0; j < count; ++j) {
        Complex power(1.0, 0.0);
        for (int t = 0; t < k; ++t) {
            vander(j, t) = power;
            power *= pts[static_cast<size_t>(j)] / radius;
        }
    }
    const auto solver = vander.completeOrthogonalDecomposition();

    const Eigen::Index n = p.rows();
    CMat rhs(count, 1);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            for (int j = 0; j < count; ++j) rhs(j, 0) = samples[static_cast<size_t>(j)](r, c);
            const CMat fit = vander * solver.solve(rhs);
            for (int j = 0; j < count; ++j) {
                const double scale = detail::point_scale(p, pts[static_cast<size_t>(j)]);
                if (std::abs(fit(j, 0) - rhs(j, 0)) > tol.residual_tol * scale) return false;
            }
        }
    return true;
}

}  // namespace matpoly
