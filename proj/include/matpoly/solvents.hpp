#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "matpoly/spectral.hpp"

namespace matpoly {

/// One chosen chain prefix: block_index names a diagonal block of T or Z
/// (from_z selects the side), prefix how many leading columns of that block
/// participate. Prefix spans of upper-triangular blocks are marked invariant
/// subspaces, the enumeration domain of the whole module.
struct SelectionComponent {
    bool from_z = false;
    int block_index = 0;
    int prefix = 1;
};

struct SubspaceSelection {
    std::vector<SelectionComponent> components;  // T-side components first
    int t_dim = 0;
    int z_dim = 0;
    int dimension() const { return t_dim + z_dim; }
};

enum class SelectionSide { t_only, z_only, both };

struct SelectionList {
    std::vector<SubspaceSelection> items;
    bool truncated = false;
};

inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long double acc = 1.0L;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    if (acc > 4.0e18L) return std::numeric_limits<long long>::max();
    return static_cast<long long>(acc + 0.5L);
}

inline bool eig_close(Complex a, Complex b, const Tolerance& tol) {
    return std::abs(a - b) <= tol.cluster_radius * (1.0 + std::max(std::abs(a), std::abs(b)));
}

/// All assignments of chain prefixes with total dimension m, over the T
/// blocks, the Z blocks, or both. Blocks are visited in stored order and
/// longer prefixes are tried first, which makes the output order match the
/// deterministic eigenvalue ordering of the pair.
inline SelectionList enumerate_selections(const StandardPair& pair, int m, SelectionSide side,
                                          long long limit = 1000000) {
    struct Entry {
        bool from_z;
        int index;
        int size;
    };
    std::vector<Entry> entries;
    if (side != SelectionSide::z_only)
        for (size_t i = 0; i < pair.t_blocks.size(); ++i)
            entries.push_back({false, static_cast<int>(i), pair.t_blocks[i].size});
    if (side != SelectionSide::t_only)
        for (size_t i = 0; i < pair.z_blocks.size(); ++i)
            entries.push_back({true, static_cast<int>(i), pair.z_blocks[i].size});

    SelectionList out;
    std::vector<SelectionComponent> current;
    int t_dim = 0, z_dim = 0;

    auto recurse = [&](auto&& self, size_t at, int remaining) -> bool {
        if (remaining == 0) {
            if (static_cast<long long>(out.items.size()) >= limit) {
                out.truncated = true;
                return false;
            }
            SubspaceSelection sel;
            sel.components = current;
            std::stable_partition(sel.components.begin(), sel.components.end(),
                                  [](const SelectionComponent& c) { return !c.from_z; });
            sel.t_dim = t_dim;
            sel.z_dim = z_dim;
            out.items.push_back(std::move(sel));
            return true;
        }
        if (at == entries.size()) return true;
        const Entry& e = entries[at];
        for (int take = std::min(e.size, remaining); take >= 0; --take) {
            if (take > 0) {
                current.push_back({e.from_z, e.index, take});
                (e.from_z ? z_dim : t_dim) += take;
            }
            const bool keep_going = self(self, at + 1, remaining - take);
            if (take > 0) {
                (e.from_z ? z_dim : t_dim) -= take;
                current.pop_back();
            }
            if (!keep_going) return false;
        }
        return true;
    };
    recurse(recurse, 0, m);
    return out;
}

namespace detail {

/// Columns and restricted operator of the selected prefixes on one side.
struct Restriction {
    CMat columns;              // m x d
    CMat op;                   // d x d block diagonal, upper triangular blocks
    std::vector<BlockInfo> blocks;
};

inline Restriction restrict_side(const StandardPair& pair, const SubspaceSelection& sel,
                                 bool z_side) {
    const auto spans = block_spans(z_side ? pair.z_blocks : pair.t_blocks);
    const CMat& vectors = z_side ? pair.Y : pair.X;
    const CMat& op = z_side ? pair.Z : pair.T;

    Restriction r;
    int d = 0;
    for (const auto& c : sel.components)
        if (c.from_z == z_side) d += c.prefix;
    r.columns = zeros(pair.m(), d);
    r.op = zeros(d, d);
    Eigen::Index at = 0;
    for (const auto& c : sel.components) {
        if (c.from_z != z_side) continue;
        const auto& span = spans[static_cast<size_t>(c.block_index)];
        r.columns.middleCols(at, c.prefix) = vectors.middleCols(span.offset, c.prefix);
        r.op.block(at, at, c.prefix, c.prefix) = op.block(span.offset, span.offset, c.prefix, c.prefix);
        r.blocks.push_back({span.info.eigenvalue, c.prefix});
        at += c.prefix;
    }
    return r;
}

inline double solvent_scale(const MatrixPolynomial& p, const CMat& s) {
    return std::max(1.0, p.coefficient_scale()) *
           std::pow(std::max(1.0, s.norm()), p.degree());
}

/// || sum A_i S^i || / scale via an explicit power accumulation (the oracle
/// module re-checks the same quantity through Horner evaluation).
inline double solvent_residual(const MatrixPolynomial& p, const CMat& s) {
    CMat acc = zeros(p.rows(), p.cols());
    CMat spow = identity(s.rows());
    for (int i = 0; i <= p.degree(); ++i) {
        acc += p.coeff(i) * spow;
        spow = (spow * s).eval();
    }
    return acc.norm() / solvent_scale(p, s);
}

/// || sum A_i S^{k-i} || / scale (the reverse equation).
inline double cosolvent_residual(const MatrixPolynomial& p, const CMat& s) {
    CMat acc = zeros(p.rows(), p.cols());
    CMat spow = identity(s.rows());
    for (int i = p.degree(); i >= 0; --i) {
        acc += p.coeff(i) * spow;
        spow = (spow * s).eval();
    }
    return acc.norm() / solvent_scale(p, s);
}

/// True when a selection uses strictly fewer chains at some eigenvalue than
/// the pair provides there; such a restriction can be rotated continuously
/// inside the eigenspace, so only a representative is enumerated.
inline bool drops_geometric_multiplicity(const StandardPair& pair, const SubspaceSelection& sel,
                                         const Tolerance& tol) {
    for (int side = 0; side < 2; ++side) {
        const bool z_side = side == 1;
        const auto& blocks = z_side ? pair.z_blocks : pair.t_blocks;
        std::vector<Complex> seen;
        for (const auto& c : sel.components) {
            if (c.from_z != z_side) continue;
            const Complex eig = blocks[static_cast<size_t>(c.block_index)].eigenvalue;
            bool counted = false;
            for (const auto& s : seen) counted = counted || eig_close(s, eig, tol);
            if (counted) continue;
            seen.push_back(eig);
            int in_sel = 0, in_pair = 0;
            for (const auto& c2 : sel.components)
                if (c2.from_z == z_side &&
                    eig_close(blocks[static_cast<size_t>(c2.block_index)].eigenvalue, eig, tol))
                    ++in_sel;
            for (const auto& b : blocks)
                if (eig_close(b.eigenvalue, eig, tol)) ++in_pair;
            if (in_sel < in_pair) return true;
        }
    }
    return false;
}

}  // namespace detail

/// A solvent or cosolvent candidate together with its substitution residual.
struct Solvent {
    CMat matrix;
    double residual = 0.0;
    bool nilpotent = false;
    SubspaceSelection provenance;
};

/// Commuting pair (S1, S2) with a separating idempotent. idempotents lists
/// every distinct separating idempotent discovered for this (S1, S2); the
/// first entry equals Pi.
struct Bisolvent {
    CMat S1, S2, Pi;
    std::vector<CMat> idempotents;
    SubspaceSelection provenance;
    double q0_condition = 0.0;
};

struct AdditiveBisolvent {
    CMat P1, P2, Pi;
};

template <class Item>
struct EnumerationResult {
    std::vector<Item> items;
    bool infinite_family = false;
    long long bound = 0;
    bool truncated = false;
};

using SolventEnumeration = EnumerationResult<Solvent>;
using BisolventEnumeration = EnumerationResult<Bisolvent>;

inline long long solvent_count_bound(const MatrixPolynomial& p) {
    const RegularityReport reg = regularity(p);
    if (!reg.regular) throw NotRegular("solvent_count_bound");
    return binomial(reg.M, static_cast<int>(p.rows()));
}

/// All solvents constructed from marked m-dimensional T-invariant subspaces:
/// S = X~ T~ X~^{-1} whenever the selected leading columns are invertible.
inline SolventEnumeration solvents(const MatrixPolynomial& p, const Tolerance& tol = {},
                                   long long limit = 1000000) {
    const StandardPair pair = maximal_standard_pair(p, tol);
    const int m = static_cast<int>(p.rows());
    const SelectionList sels = enumerate_selections(pair, m, SelectionSide::t_only, limit);

    SolventEnumeration out;
    out.bound = binomial(static_cast<int>(pair.p()), m);
    out.truncated = sels.truncated;
    for (const auto& sel : sels.items) {
        const auto r = detail::restrict_side(pair, sel, false);
        if (numerical_rank(r.columns, tol) < m) continue;
        Solvent s;
        s.matrix = r.columns * r.op * invert(r.columns, tol);
        s.residual = detail::solvent_residual(p, s.matrix);
        s.nilpotent = std::all_of(r.blocks.begin(), r.blocks.end(), [&](const BlockInfo& b) {
            return eig_close(b.eigenvalue, Complex(0.0, 0.0), tol);
        });
        s.provenance = sel;
        if (detail::drops_geometric_multiplicity(pair, sel, tol)) out.infinite_family = true;
        out.items.push_back(std::move(s));
    }
    return out;
}

/// All cosolvents: every nonzero finite eigenvalue is first inverted onto the
/// Z side, then marked Z-invariant subspaces are enumerated and
/// S = Y~ Z~ Y~^{-1} is emitted. Nilpotent cosolvents are the polynomial's
/// "infinite solvents".
inline SolventEnumeration cosolvents(const MatrixPolynomial& p, const Tolerance& tol = {},
                                     long long limit = 1000000) {
    const StandardPair pair = maximal_standard_pair(p, tol);
    std::vector<Complex> eigs;
    for (const auto& b : pair.t_blocks) {
        if (std::abs(b.eigenvalue) <= tol.cluster_radius) continue;
        bool seen = false;
        for (const auto& e : eigs) seen = seen || eig_close(e, b.eigenvalue, tol);
        if (!seen) eigs.push_back(b.eigenvalue);
    }
    const StandardPair inverted =
        spectral_inversion(pair, eigs, InversionSide::to_infinite, tol);

    const int m = static_cast<int>(p.rows());
    const SelectionList sels = enumerate_selections(inverted, m, SelectionSide::z_only, limit);

    SolventEnumeration out;
    out.bound = binomial(static_cast<int>(inverted.q()), m);
    out.truncated = sels.truncated;
    for (const auto& sel : sels.items) {
        const auto r = detail::restrict_side(inverted, sel, true);
        if (numerical_rank(r.columns, tol) < m) continue;
        Solvent s;
        s.matrix = r.columns * r.op * invert(r.columns, tol);
        s.residual = detail::cosolvent_residual(p, s.matrix);
        s.nilpotent = std::all_of(r.blocks.begin(), r.blocks.end(), [&](const BlockInfo& b) {
            return eig_close(b.eigenvalue, Complex(0.0, 0.0), tol);
        });
        s.provenance = sel;
        if (detail::drops_geometric_multiplicity(inverted, sel, tol)) out.infinite_family = true;
        out.items.push_back(std::move(s));
    }
    return out;
}

/// Build the canonical separable bisolvent of a selection:
///   S1 = Q0 (T~ (+) I) Q0^{-1},  S2 = Q0 (I (+) Z~) Q0^{-1},
///   Pi = Q0 (I (+) 0) Q0^{-1},   Q0 = [X~, Y~].
inline Bisolvent bisolvent_from_selection(const StandardPair& pair, const SubspaceSelection& sel,
                                          const Tolerance& tol = {}) {
    const Eigen::Index m = pair.m();
    if (sel.dimension() != m) throw DimensionMismatch("selection dimension must equal m");
    const auto rt = detail::restrict_side(pair, sel, false);
    const auto rz = detail::restrict_side(pair, sel, true);

    CMat q0 = zeros(m, m);
    q0.leftCols(sel.t_dim) = rt.columns;
    q0.rightCols(sel.z_dim) = rz.columns;
    if (numerical_rank(q0, tol) < m) throw SingularQ0();
    const CMat q0inv = invert(q0, tol);

    Bisolvent b;
    b.S1 = q0 * block_diag(rt.op, identity(sel.z_dim)) * q0inv;
    b.S2 = q0 * block_diag(identity(sel.t_dim), rz.op) * q0inv;
    b.Pi = q0 * block_diag(identity(sel.t_dim), zeros(sel.z_dim, sel.z_dim)) * q0inv;
    b.idempotents = {b.Pi};
    b.provenance = sel;
    b.q0_condition = condition_estimate(q0);
    return b;
}

namespace detail {

inline bool matrices_close(const CMat& a, const CMat& b, double rel = 1e-7) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    const double scale = 1.0 + std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>());
    return (a - b).lpNorm<Eigen::Infinity>() <= rel * scale;
}

/// Idempotents that separate the same (S1, S2). A selected 1x1 T-block at
/// eigenvalue 1 acts as the identity under both S1 and S2, so it may sit on
/// either side of the splitting: each subset of such blocks yields another
/// valid idempotent with the same column frame Q0. This reproduces the effect
/// of an eigenvalue-1 spectral inversion, which changes the separating
/// idempotent but not the bisolvent.
inline std::vector<CMat> alternative_idempotents(const StandardPair& pair,
                                                 const SubspaceSelection& sel,
                                                 const Tolerance& tol) {
    std::vector<int> swappable;  // column offsets within the T-side part of Q0
    int at = 0;
    for (const auto& c : sel.components) {
        if (c.from_z) continue;
        const Complex eig = pair.t_blocks[static_cast<size_t>(c.block_index)].eigenvalue;
        if (c.prefix == 1 && eig_close(eig, Complex(1.0, 0.0), tol)) swappable.push_back(at);
        at += c.prefix;
    }
    if (swappable.empty()) return {};

    const auto rt = restrict_side(pair, sel, false);
    const auto rz = restrict_side(pair, sel, true);
    CMat q0 = zeros(pair.m(), pair.m());
    q0.leftCols(sel.t_dim) = rt.columns;
    q0.rightCols(sel.z_dim) = rz.columns;
    const CMat q0inv = invert(q0, tol);

    std::vector<CMat> out;
    for (unsigned mask = 1; mask < (1u << swappable.size()); ++mask) {
        CMat pattern = block_diag(identity(sel.t_dim), zeros(sel.z_dim, sel.z_dim));
        for (size_t bit = 0; bit < swappable.size(); ++bit)
            if (mask & (1u << bit))
                pattern(swappable[bit], swappable[bit]) = 0.0;
        out.push_back(q0 * pattern * q0inv);
    }
    return out;
}

}  // namespace detail

/// All separable bisolvents from marked m-dimensional T (+) Z-invariant
/// subspaces of the maximal pair. Records with equal (S1, S2) are merged and
/// keep every distinct separating idempotent.
inline BisolventEnumeration bisolvents(const MatrixPolynomial& p, const Tolerance& tol = {},
                                       long long limit = 1000000) {
    const StandardPair pair = maximal_standard_pair(p, tol);
    const int m = static_cast<int>(p.rows());
    const SelectionList sels = enumerate_selections(pair, m, SelectionSide::both, limit);

    BisolventEnumeration out;
    out.bound = binomial(static_cast<int>(pair.p() + pair.q()), m);
    out.truncated = sels.truncated;
    for (const auto& sel : sels.items) {
        Bisolvent b;
        try {
            b = bisolvent_from_selection(pair, sel, tol);
        } catch (const SingularQ0&) {
            continue;
        }
        for (auto& alt : detail::alternative_idempotents(pair, sel, tol)) {
            bool fresh = true;
            for (const auto& known : b.idempotents)
                fresh = fresh && !detail::matrices_close(known, alt);
            if (fresh) b.idempotents.push_back(std::move(alt));
        }
        if (detail::drops_geometric_multiplicity(pair, sel, tol)) out.infinite_family = true;

        bool merged = false;
        for (auto& existing : out.items) {
            if (!detail::matrices_close(existing.S1, b.S1) ||
                !detail::matrices_close(existing.S2, b.S2))
                continue;
            for (auto& cand : b.idempotents) {
                bool fresh = true;
                for (const auto& known : existing.idempotents)
                    fresh = fresh && !detail::matrices_close(known, cand);
                if (fresh) existing.idempotents.push_back(std::move(cand));
            }
            merged = true;
            break;
        }
        if (!merged) out.items.push_back(std::move(b));
    }
    return out;
}

/// Scaled defect norms of the four bisolvent conditions.
struct BisolventCheck {
    double commute = 0.0;
    double idempotent = 0.0;
    double separable = 0.0;
    double residual = 0.0;
    bool passes(const Tolerance& tol) const {
        return commute <= tol.residual_tol && idempotent <= tol.residual_tol &&
               separable <= tol.residual_tol && residual <= tol.residual_tol;
    }
};

inline BisolventCheck verify_bisolvent(const MatrixPolynomial& p, const Bisolvent& b,
                                       const Tolerance& tol = {}) {
    (void)tol;
    const Eigen::Index m = p.rows();
    if (b.S1.rows() != m || b.S2.rows() != m || b.Pi.rows() != m)
        throw DimensionMismatch("verify_bisolvent");
    const int k = p.degree();
    const CMat eye = identity(m);

    BisolventCheck check;
    check.commute = (b.S1 * b.S2 - b.S2 * b.S1).norm() /
                    (std::max(1.0, b.S1.norm()) * std::max(1.0, b.S2.norm()));
    check.idempotent = (b.Pi * b.Pi - b.Pi).norm() / std::max(1.0, b.Pi.norm() * b.Pi.norm());

    const double sep_scale =
        std::max(1.0, b.S1.norm() + b.S2.norm()) * std::max(1.0, b.Pi.norm() * b.Pi.norm());
    const double sep1 = (b.S1 - b.Pi * b.S1 * b.Pi - (eye - b.Pi)).norm();
    const double sep2 = (b.S2 - b.Pi - (eye - b.Pi) * b.S2 * (eye - b.Pi)).norm();
    check.separable = std::max(sep1, sep2) / sep_scale;

    CMat acc = zeros(m, m);
    std::vector<CMat> pow1{eye}, pow2{eye};
    for (int i = 1; i <= k; ++i) {
        pow1.push_back((pow1.back() * b.S1).eval());
        pow2.push_back((pow2.back() * b.S2).eval());
    }
    for (int i = 0; i <= k; ++i)
        acc += p.coeff(i) * pow1[static_cast<size_t>(i)] * pow2[static_cast<size_t>(k - i)];
    check.residual = acc.norm() / (std::max(1.0, p.coefficient_scale()) *
                                   std::pow(std::max(1.0, b.S1.norm()), k) *
                                   std::pow(std::max(1.0, b.S2.norm()), k));
    return check;
}

/// S2 invertible yields the solvent S2^{-1} S1 (monic factor lambda*I - S);
/// S1 invertible yields the cosolvent S1^{-1} S2 (comonic factor I - lambda*S).
/// Both, one, or neither may exist; candidates are re-verified by direct
/// substitution before being reported.
struct BisolventReduction {
    std::optional<CMat> solvent;
    std::optional<CMat> cosolvent;
};

inline BisolventReduction reduce_bisolvent(const MatrixPolynomial& p, const Bisolvent& b,
                                           const Tolerance& tol = {}) {
    BisolventReduction red;
    if (numerical_rank(b.S2, tol) == b.S2.rows()) {
        const CMat s = invert(b.S2, tol) * b.S1;
        if (detail::solvent_residual(p, s) <= tol.residual_tol) red.solvent = s;
    }
    if (numerical_rank(b.S1, tol) == b.S1.rows()) {
        const CMat s = invert(b.S1, tol) * b.S2;
        if (detail::cosolvent_residual(p, s) <= tol.residual_tol) red.cosolvent = s;
    }
    return red;
}

/// Additive formalism: P1 = Pi S1 Pi, P2 = (I - Pi) S2 (I - Pi).
inline AdditiveBisolvent to_additive(const Bisolvent& b) {
    const CMat eye = identity(b.S1.rows());
    return AdditiveBisolvent{b.Pi * b.S1 * b.Pi, (eye - b.Pi) * b.S2 * (eye - b.Pi), b.Pi};
}

/// Inverse map S1 = P1 + (I - Pi), S2 = P2 + Pi. Validates the additive
/// invariants and spot-checks the power identity P1^i + P2^j = S1^i S2^j
/// (which holds for all i, j >= 1).
inline Bisolvent from_additive(const AdditiveBisolvent& a, const Tolerance& tol = {},
                               int power_check = 2) {
    const Eigen::Index m = a.P1.rows();
    if (a.P2.rows() != m || a.Pi.rows() != m || a.P1.cols() != m)
        throw DimensionMismatch("from_additive");
    const CMat eye = identity(m);
    const double scale = 1.0 + a.P1.norm() + a.P2.norm() + a.Pi.norm();
    if ((a.Pi * a.Pi - a.Pi).norm() > tol.residual_tol * scale)
        throw InvariantViolation("Pi is not idempotent");
    if ((a.P1 * a.P2).norm() > tol.residual_tol * scale * scale ||
        (a.P2 * a.P1).norm() > tol.residual_tol * scale * scale)
        throw InvariantViolation("P1 P2 = P2 P1 = 0 fails");
    if ((a.P1 - a.Pi * a.P1 * a.Pi).norm() > tol.residual_tol * scale ||
        (a.P2 - (eye - a.Pi) * a.P2 * (eye - a.Pi)).norm() > tol.residual_tol * scale)
        throw InvariantViolation("P1/P2 do not live on the Pi splitting");

    Bisolvent b;
    b.S1 = a.P1 + (eye - a.Pi);
    b.S2 = a.P2 + a.Pi;
    b.Pi = a.Pi;
    b.idempotents = {b.Pi};

    CMat p1pow = a.P1, s1pow = b.S1;
    for (int i = 1; i <= power_check; ++i) {
        CMat p2pow = a.P2, s2pow = b.S2;
        for (int j = 1; j <= power_check; ++j) {
            if (!detail::matrices_close(p1pow + p2pow, s1pow * s2pow, 1e-9))
                throw InvariantViolation("power identity P1^i + P2^j = S1^i S2^j fails");
            p2pow = (p2pow * a.P2).eval();
            s2pow = (s2pow * b.S2).eval();
        }
        p1pow = (p1pow * a.P1).eval();
        s1pow = (s1pow * b.S1).eval();
    }
    return b;
}

}  // namespace matpoly
