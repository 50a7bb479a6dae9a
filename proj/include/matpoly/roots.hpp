#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "matpoly/linalg.hpp"

namespace matpoly {

/// Dense scalar polynomial, coefficients[i] multiplies lambda^i.
/// The coefficient list is kept trimmed: the leading entry is nonzero
/// unless the polynomial is identically zero (empty list).
struct ScalarPolynomial {
    std::vector<Complex> coefficients;

    ScalarPolynomial() = default;
    explicit ScalarPolynomial(std::vector<Complex> c) : coefficients(std::move(c)) { trim(); }

    void trim() {
        while (!coefficients.empty() && coefficients.back() == Complex(0.0, 0.0))
            coefficients.pop_back();
    }

    bool is_zero() const { return coefficients.empty(); }
    int degree() const { return is_zero() ? -1 : static_cast<int>(coefficients.size()) - 1; }

    Complex eval(Complex x) const {
        Complex acc(0.0, 0.0);
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Complex eval_derivative(Complex x) const {
        Complex acc(0.0, 0.0);
        for (int i = degree(); i >= 1; --i) acc = acc * x + coefficients[i] * double(i);
        return acc;
    }

    ScalarPolynomial derivative() const {
        std::vector<Complex> d;
        for (int i = 1; i <= degree(); ++i) d.push_back(coefficients[i] * double(i));
        return ScalarPolynomial(std::move(d));
    }
};

/// One clustered root: representative value plus combined multiplicity.
struct Root {
    Complex value;
    int multiplicity = 1;
};

namespace detail {

/// Aberth-Ehrlich simultaneous iteration on a polynomial with a nonzero
/// constant term. Deterministic: initial points sit on a scaled circle.
inline std::vector<Complex> aberth(const std::vector<Complex>& coeffs, int max_iter) {
    const int d = static_cast<int>(coeffs.size()) - 1;
    std::vector<Complex> c(coeffs);
    for (auto& v : c) v /= coeffs.back();  // monic

    double radius = 0.0;
    for (int i = 0; i < d; ++i) radius = std::max(radius, std::abs(c[i]));
    radius = 1.0 + radius;  // Cauchy-style inclusion bound

    std::vector<Complex> z(d);
    for (int i = 0; i < d; ++i) {
        const double theta = 2.0 * std::numbers::pi * i / d + 0.4;
        z[i] = radius * Complex(std::cos(theta), std::sin(theta));
    }

    auto p = [&](Complex x) {
        Complex acc(0.0, 0.0);
        for (int i = d; i >= 0; --i) acc = acc * x + c[i];
        return acc;
    };
    auto dp = [&](Complex x) {
        Complex acc(0.0, 0.0);
        for (int i = d; i >= 1; --i) acc = acc * x + c[i] * double(i);
        return acc;
    };
    // Horner roundoff floor: once |p(z)| sinks below it, the point cannot be
    // improved in this precision (multiple roots stall here long before the
    // step criterion fires).
    auto noise_floor = [&](Complex x) {
        double acc = 0.0;
        const double ax = std::abs(x);
        for (int i = d; i >= 0; --i) acc = acc * ax + std::abs(c[i]);
        return 4.0 * d * std::numeric_limits<double>::epsilon() * acc;
    };

    std::vector<bool> settled(static_cast<size_t>(d), false);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool all_settled = true;
        for (int i = 0; i < d; ++i) {
            if (settled[static_cast<size_t>(i)]) continue;
            const Complex pi = p(z[i]);
            if (std::abs(pi) <= noise_floor(z[i])) {
                settled[static_cast<size_t>(i)] = true;
                continue;
            }
            const Complex dpi = dp(z[i]);
            Complex newton = (dpi == Complex(0.0, 0.0)) ? Complex(0.0, 0.0) : pi / dpi;
            Complex repel(0.0, 0.0);
            for (int j = 0; j < d; ++j)
                if (j != i && z[i] != z[j]) repel += 1.0 / (z[i] - z[j]);
            const Complex denom = 1.0 - newton * repel;
            const Complex step = (denom == Complex(0.0, 0.0)) ? newton : newton / denom;
            z[i] -= step;
            if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z[i])))
                settled[static_cast<size_t>(i)] = true;
            else
                all_settled = false;
        }
        if (all_settled) return z;
    }
    throw NoConvergence("aberth iteration cap reached");
}

}  // namespace detail

/// All roots of p counted with multiplicity. Roots within
/// cluster_radius * (1 + max |root|) of each other are merged into a single
/// representative (the cluster mean) carrying the summed multiplicity.
inline std::vector<Root> poly_roots(const ScalarPolynomial& p, const Tolerance& tol = {},
                                    int max_iter = 1000) {
    if (p.is_zero()) throw ZeroPolynomial();
    std::vector<Complex> coeffs = p.coefficients;

    // Exact zero roots split off before iterating; determinant interpolation
    // flushes negligible low-order coefficients so planted zero eigenvalues
    // arrive here as exact zeros.
    int zero_mult = 0;
    while (!coeffs.empty() && coeffs.front() == Complex(0.0, 0.0)) {
        coeffs.erase(coeffs.begin());
        ++zero_mult;
    }

    std::vector<Complex> raw;
    if (coeffs.size() > 1) raw = detail::aberth(coeffs, max_iter);

    double big = 0.0;
    for (const auto& r : raw) big = std::max(big, std::abs(r));
    const double radius = tol.cluster_radius * (1.0 + big);

    // Greedy union of root pairs within the merge radius.
    std::vector<int> parent(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (size_t i = 0; i < raw.size(); ++i)
        for (size_t j = i + 1; j < raw.size(); ++j)
            if (std::abs(raw[i] - raw[j]) <= radius) parent[find(int(j))] = find(int(i));

    std::vector<Root> out;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (find(int(i)) != int(i)) continue;
        Complex sum(0.0, 0.0);
        int count = 0;
        for (size_t j = 0; j < raw.size(); ++j)
            if (find(int(j)) == int(i)) { sum += raw[j]; ++count; }
        out.push_back({sum / double(count), count});
    }
    // A multiple root leaves the iteration with only mult-th-root-of-eps
    // accuracy; it is a simple root of the (mult-1)-th derivative, so a few
    // Newton steps there polish the representative back to full precision.
    auto polish = [](const ScalarPolynomial& poly, Complex z, int mult) {
        ScalarPolynomial g = poly;
        for (int t = 1; t < mult; ++t) g = g.derivative();
        for (int it = 0; it < 40; ++it) {
            const Complex gd = g.eval_derivative(z);
            if (gd == Complex(0.0, 0.0)) break;
            const Complex step = g.eval(z) / gd;
            z -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
        }
        return z;
    };
    for (auto& r : out) r.value = polish(p, r.value, r.multiplicity);

    // Multiple roots can split wider than the base radius (the splat grows
    // like eps^(1/mult)). Merge nearby clusters only when the merged point
    // demonstrably annihilates p and its first mult-1 derivatives down to
    // their roundoff floors; genuinely distinct neighbors fail that test.
    auto roundoff_floor = [](const ScalarPolynomial& poly, Complex z) {
        double acc = 0.0;
        const double az = std::abs(z);
        for (int i = poly.degree(); i >= 0; --i)
            acc = acc * az + std::abs(poly.coefficients[static_cast<size_t>(i)]);
        return 4.0 * std::max(1, poly.degree()) * std::numeric_limits<double>::epsilon() * acc;
    };
    const double horizon = 1e-3 * (1.0 + big);
    bool merging = out.size() > 1;
    while (merging) {
        merging = false;
        for (size_t i = 0; i < out.size() && !merging; ++i)
            for (size_t j = i + 1; j < out.size() && !merging; ++j) {
                if (std::abs(out[i].value - out[j].value) > horizon) continue;
                const int mu = out[i].multiplicity + out[j].multiplicity;
                const Complex seed = (out[i].value * double(out[i].multiplicity) +
                                      out[j].value * double(out[j].multiplicity)) /
                                     double(mu);
                const Complex merged = polish(p, seed, mu);
                ScalarPolynomial g = p;
                bool valid = std::abs(out[i].value - merged) <= horizon &&
                             std::abs(out[j].value - merged) <= horizon;
                for (int t = 0; t < mu && valid; ++t) {
                    valid = std::abs(g.eval(merged)) <= 256.0 * roundoff_floor(g, merged);
                    g = g.derivative();
                }
                if (!valid) continue;
                out[i] = Root{merged, mu};
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(j));
                merging = true;
            }
    }

    if (zero_mult > 0) {
        // Fold the exact zero roots into an existing near-zero cluster, which
        // absorbs iterated roots that belong to the same multiple root.
        bool merged = false;
        for (auto& r : out)
            if (std::abs(r.value) <= radius) {
                r.value = Complex(0.0, 0.0);
                r.multiplicity += zero_mult;
                merged = true;
                break;
            }
        if (!merged) out.push_back({Complex(0.0, 0.0), zero_mult});
    }

    std::sort(out.begin(), out.end(),
              [](const Root& a, const Root& b) { return spectral_less(a.value, b.value); });
    return out;
}

}  // namespace matpoly
