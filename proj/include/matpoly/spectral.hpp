#pragma once

#include <algorithm>
#include <vector>

#include "matpoly/matrix_polynomial.hpp"

namespace matpoly {

/// A Jordan chain v_1..v_len at a finite point, or at infinity (a chain of
/// the reverse polynomial at zero). v_1 is nonzero; the vectors satisfy the
/// Taylor-coefficient recurrences of P at the eigenvalue.
struct JordanChain {
    Complex eigenvalue{0.0, 0.0};
    bool at_infinity = false;
    std::vector<CVec> vectors;
    int length() const { return static_cast<int>(vectors.size()); }
};

namespace detail {

/// Lower-triangular block-Toeplitz matrix of depth levels whose (i, j) block
/// (i >= j) is the Taylor coefficient T_{i-j} of P at a. A stacked vector
/// (v_1; ...; v_d) lies in its kernel exactly when v_1..v_d obey the chain
/// recurrences at a up to length d.
inline CMat chain_toeplitz(const std::vector<CMat>& taylor, int depth) {
    const Eigen::Index n = taylor[0].rows(), m = taylor[0].cols();
    CMat out = zeros(n * depth, m * depth);
    for (int i = 0; i < depth; ++i)
        for (int j = 0; j <= i; ++j)
            out.block(n * i, m * j, n, m) = taylor[static_cast<size_t>(i - j)];
    return out;
}

/// Scale a chain so v_1 has unit norm and its first significant component is
/// real positive; keeps fixture comparisons reproducible.
inline void normalize_chain(std::vector<CVec>& vectors) {
    const double norm = vectors.front().norm();
    if (norm == 0.0) return;
    Eigen::Index lead = 0;
    for (Eigen::Index i = 0; i < vectors.front().size(); ++i)
        if (std::abs(vectors.front()(i)) > 1e-8 * norm) { lead = i; break; }
    const Complex z = vectors.front()(lead);
    const Complex s = (std::abs(z) > 0.0 ? std::conj(z) / std::abs(z) : Complex(1.0, 0.0)) / norm;
    for (auto& v : vectors) v *= s;
}

/// Kernel basis with the rank cutoff floored at an external magnitude, so a
/// uniformly tiny matrix (for instance P(a) at a well-converged eigenvalue of
/// a scalar polynomial) is not self-normalized into full rank.
inline CMat kernel_with_floor(const CMat& m, double scale_floor, const Tolerance& tol) {
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
    const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    const double thresh = tol.rank_tol * static_cast<double>(std::max(m.rows(), m.cols())) *
                          std::max(top, scale_floor);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thresh) ++r;
    return svd.matrixV().rightCols(m.cols() - r);
}

/// Maximal Jordan system of P at the point a, assuming P is regular and a is
/// an eigenvalue. Chain lengths are read off the kernel-dimension increments
/// of the nested Toeplitz matrices; chain vectors are extracted longest first
/// so that leading vectors extend each other along the kernel filtration.
inline std::vector<JordanChain> chains_at_unchecked(const MatrixPolynomial& p, Complex a,
                                                    const Tolerance& tol, int length_cap) {
    const Eigen::Index m = p.cols();
    const double scale_floor = p.scale_at(std::abs(a));
    std::vector<CMat> taylor{taylor_coeff(p, a, 0)};

    std::vector<CMat> kernels;   // kernels[d-1] = orthonormal kernel of depth d
    std::vector<int> nullity{0};
    int max_len = 0;
    for (int depth = 1; depth <= length_cap + 1; ++depth) {
        while (static_cast<int>(taylor.size()) < depth)
            taylor.push_back(taylor_coeff(p, a, static_cast<int>(taylor.size())));
        CMat kernel = kernel_with_floor(chain_toeplitz(taylor, depth), scale_floor, tol);
        const int nu = static_cast<int>(kernel.cols());
        if (nu - nullity.back() == 0) break;
        kernels.push_back(std::move(kernel));
        nullity.push_back(nu);
        max_len = depth;
        if (depth == length_cap + 1)
            throw NoConvergence("jordan chain growth did not terminate");
    }

    std::vector<JordanChain> chains;
    CMat chosen_leading(m, 0);
    for (int len = max_len; len >= 1; --len) {
        const int want = nullity[len] - nullity[len - 1];  // chains of length >= len
        const int have = static_cast<int>(chosen_leading.cols());
        if (want <= have) continue;

        const CMat& kernel = kernels[static_cast<size_t>(len - 1)];
        const CMat heads = kernel.topRows(m);

        // Basis of the space of vectors that can lead a chain of length len.
        Eigen::JacobiSVD<CMat> head_svd(heads, Eigen::ComputeThinU);
        if (head_svd.matrixU().cols() < want)
            throw NoConvergence("kernel head space thinner than expected");
        CMat basis = head_svd.matrixU().leftCols(want);

        // Remove directions already claimed by longer chains.
        CMat fresh = basis;
        if (have > 0) {
            Eigen::JacobiSVD<CMat> chosen_svd(chosen_leading, Eigen::ComputeThinU);
            const CMat vc = chosen_svd.matrixU().leftCols(have);
            fresh -= vc * (vc.adjoint() * basis);
        }
        Eigen::JacobiSVD<CMat> fresh_svd(fresh, Eigen::ComputeThinU);

        const auto head_solver = heads.completeOrthogonalDecomposition();
        for (int t = 0; t < want - have; ++t) {
            const CVec direction = fresh_svd.matrixU().col(t);
            const CVec coeff = head_solver.solve(direction);
            const CVec stacked = kernel * coeff;
            JordanChain chain;
            chain.eigenvalue = a;
            for (int i = 0; i < len; ++i) chain.vectors.push_back(stacked.segment(i * m, m));
            normalize_chain(chain.vectors);
            chains.push_back(std::move(chain));
            chosen_leading.conservativeResize(m, chosen_leading.cols() + 1);
            chosen_leading.col(chosen_leading.cols() - 1) = chains.back().vectors.front();
        }
    }
    return chains;  // longest first by construction
}

/// A point counts as an eigenvalue candidate when P evaluated there is
/// singular relative to the polynomial's own magnitude (not just relative to
/// the evaluated matrix, which may be uniformly tiny).
inline bool singular_relative_to(const MatrixPolynomial& p, const CMat& value, double at,
                                 const Tolerance& tol) {
    Eigen::JacobiSVD<CMat> svd(value);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double scale = std::max(sv(0), p.scale_at(at));
    return smin <= tol.rank_tol * static_cast<double>(p.rows()) * scale;
}

}  // namespace detail

/// Maximal Jordan system at a finite eigenvalue candidate.
inline std::vector<JordanChain> jordan_chains_at(const MatrixPolynomial& p, Complex a,
                                                 const Tolerance& tol = {}) {
    if (!regularity(p).regular) throw NotRegular("jordan_chains_at");
    if (!detail::singular_relative_to(p, eval(p, a), std::abs(a), tol))
        throw NotAnEigenvalue("point is regular");
    const int cap = static_cast<int>(p.rows()) * std::max(1, p.degree());
    return detail::chains_at_unchecked(p, a, tol, cap);
}

/// Maximal Jordan cochain system at infinity: chains of reverse(P) at zero.
inline std::vector<JordanChain> jordan_chains_at_infinity(const MatrixPolynomial& p,
                                                          const Tolerance& tol = {}) {
    if (!regularity(p).regular) throw NotRegular("jordan_chains_at_infinity");
    const MatrixPolynomial rev = reverse(p);
    if (!detail::singular_relative_to(rev, eval(rev, 0.0), 0.0, tol))
        throw NotAnEigenvalue("no infinite eigenvalue");
    const int cap = static_cast<int>(p.rows()) * std::max(1, p.degree());
    auto chains = detail::chains_at_unchecked(rev, Complex(0.0, 0.0), tol, cap);
    for (auto& c : chains) c.at_infinity = true;
    return chains;
}

/// Full Jordan basis of a square matrix, computed as the chain system of the
/// pencil lambda*I - A at each clustered root of its determinant polynomial.
inline std::vector<JordanChain> matrix_jordan_structure(const CMat& a, const Tolerance& tol = {}) {
    if (a.rows() != a.cols()) throw NotSquare("matrix_jordan_structure");
    const Eigen::Index n = a.rows();
    const MatrixPolynomial pencil = MatrixPolynomial::formal({-a, identity(n)});
    const ScalarPolynomial charpoly = determinant_polynomial(pencil);
    std::vector<JordanChain> out;
    int total = 0;
    for (const Root& root : poly_roots(charpoly, tol)) {
        auto chains = detail::chains_at_unchecked(pencil, root.value, tol, static_cast<int>(n));
        for (auto& c : chains) {
            total += c.length();
            out.push_back(std::move(c));
        }
    }
    if (total != n) throw NoConvergence("jordan structure does not fill the matrix dimension");
    return out;
}

/// One diagonal block of T or Z: its eigenvalue and size. Blocks produced by
/// maximal_standard_pair are Jordan; spectral inversion may replace a block
/// by its inverse, which stays upper triangular with constant diagonal.
struct BlockInfo {
    Complex eigenvalue{0.0, 0.0};
    int size = 1;
};

/// Standard pair ([X, Y], T (+) Z). T and Z are block diagonal with respect
/// to t_blocks / z_blocks, and every block is upper triangular, so leading
/// column prefixes of a block span marked invariant subspaces.
struct StandardPair {
    CMat X, Y, T, Z;
    std::vector<BlockInfo> t_blocks, z_blocks;

    Eigen::Index m() const { return X.rows(); }
    Eigen::Index p() const { return X.cols(); }
    Eigen::Index q() const { return Y.cols(); }
};

/// Read the Jordan block layout off an explicit Jordan matrix (used when a
/// pair is assembled from externally supplied matrices).
inline std::vector<BlockInfo> infer_jordan_blocks(const CMat& j, double eps = 1e-9) {
    if (j.rows() != j.cols()) throw NotSquare("infer_jordan_blocks");
    const Eigen::Index n = j.rows();
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            if (r == c || c == r + 1) continue;
            if (std::abs(j(r, c)) > eps) throw InvariantViolation("matrix is not Jordan");
        }
    std::vector<BlockInfo> blocks;
    Eigen::Index start = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const bool linked = i + 1 < n && std::abs(j(i, i + 1) - 1.0) <= eps &&
                            std::abs(j(i, i) - j(i + 1, i + 1)) <= eps;
        if (i + 1 < n && std::abs(j(i, i + 1)) > eps && !linked)
            throw InvariantViolation("superdiagonal entry is neither 0 nor a Jordan link");
        if (!linked) {
            blocks.push_back({j(start, start), static_cast<int>(i + 1 - start)});
            start = i + 1;
        }
    }
    return blocks;
}

/// Assemble a pair from explicit Jordan-form matrices.
inline StandardPair make_standard_pair(CMat x, CMat t, CMat y, CMat z) {
    if (x.rows() != y.rows() || x.cols() != t.rows() || y.cols() != z.rows())
        throw DimensionMismatch("make_standard_pair");
    StandardPair pair;
    pair.t_blocks = t.size() ? infer_jordan_blocks(t) : std::vector<BlockInfo>{};
    pair.z_blocks = z.size() ? infer_jordan_blocks(z) : std::vector<BlockInfo>{};
    pair.X = std::move(x);
    pair.T = std::move(t);
    pair.Y = std::move(y);
    pair.Z = std::move(z);
    return pair;
}

/// Controllability matrix of depth j: block row i is [X T^i | Y Z^{j-1-i}].
inline CMat controllability(const StandardPair& pair, int depth) {
    if (depth < 1) throw DimensionMismatch("controllability depth must be >= 1");
    const Eigen::Index m = pair.m(), p = pair.p(), q = pair.q();
    std::vector<CMat> xt{pair.X}, yz{pair.Y};
    for (int i = 1; i < depth; ++i) {
        xt.push_back((xt.back() * pair.T).eval());
        yz.push_back((yz.back() * pair.Z).eval());
    }
    CMat out = zeros(m * depth, p + q);
    for (int i = 0; i < depth; ++i) {
        out.block(m * i, 0, m, p) = xt[static_cast<size_t>(i)];
        out.block(m * i, p, m, q) = yz[static_cast<size_t>(depth - 1 - i)];
    }
    return out;
}

/// Residuals of the defining relations plus the controllability rank test.
struct PairCheck {
    double residual_t = 0.0;  // || sum A_i X T^i || / scale
    double residual_z = 0.0;  // || sum A_i Y Z^{k-i} || / scale
    bool rank_ok = false;
    bool passes(const Tolerance& tol) const {
        return rank_ok && residual_t <= tol.residual_tol && residual_z <= tol.residual_tol;
    }
};

inline PairCheck verify_standard_pair(const MatrixPolynomial& p, const StandardPair& pair,
                                      const Tolerance& tol = {}) {
    if (p.rows() != p.cols() || pair.m() != p.rows())
        throw DimensionMismatch("verify_standard_pair");
    const int k = p.degree();

    CMat rt = zeros(pair.m(), pair.p());
    CMat xt = pair.X;
    for (int i = 0; i <= k; ++i) {
        rt += p.coeff(i) * xt;
        xt = (xt * pair.T).eval();
    }
    CMat rz = zeros(pair.m(), pair.q());
    CMat yz = pair.Y;
    for (int i = k; i >= 0; --i) {  // Z power is k - i
        rz += p.coeff(i) * yz;
        yz = (yz * pair.Z).eval();
    }

    const double scale_t = std::max(1.0, p.coefficient_scale()) * std::max(1.0, pair.X.norm()) *
                           std::pow(std::max(1.0, pair.T.norm()), k);
    const double scale_z = std::max(1.0, p.coefficient_scale()) * std::max(1.0, pair.Y.norm()) *
                           std::pow(std::max(1.0, pair.Z.norm()), k);

    PairCheck check;
    check.residual_t = pair.p() ? rt.norm() / scale_t : 0.0;
    check.residual_z = pair.q() ? rz.norm() / scale_z : 0.0;
    const CMat qk = controllability(pair, std::max(1, k));
    check.rank_ok = numerical_rank(qk, tol) == pair.p() + pair.q();
    return check;
}

/// Jordan pair covering the full spectrum: T collects all finite eigenvalues
/// (p = M), Z is nilpotent and collects the infinite structure (q = nk - M).
/// Eigenvalues are ordered by spectral_less; chains at one eigenvalue are
/// ordered longest first.
inline StandardPair maximal_standard_pair(const MatrixPolynomial& p, const Tolerance& tol = {}) {
    const RegularityReport reg = regularity(p);
    if (!reg.regular) throw NotRegular("maximal_standard_pair");
    const Eigen::Index n = p.rows();
    const int k = p.degree();
    const int nk = static_cast<int>(n) * k;

    StandardPair pair;
    pair.X = zeros(n, reg.M);
    pair.T = zeros(reg.M, reg.M);
    pair.Y = zeros(n, reg.infinite_mult_total);
    pair.Z = zeros(reg.infinite_mult_total, reg.infinite_mult_total);

    Eigen::Index col = 0;
    if (reg.M > 0) {
        for (const Root& root : poly_roots(reg.det_poly, tol)) {
            auto chains = detail::chains_at_unchecked(p, root.value, tol, nk);
            int found = 0;
            for (const auto& chain : chains) found += chain.length();
            if (found != root.multiplicity)
                throw NoConvergence("chain lengths disagree with determinant multiplicity");
            for (const auto& chain : chains) {
                const int len = chain.length();
                pair.T.block(col, col, len, len) = jordan_block(root.value, len);
                for (int i = 0; i < len; ++i)
                    pair.X.col(col + i) = chain.vectors[static_cast<size_t>(i)];
                pair.t_blocks.push_back({root.value, len});
                col += len;
            }
        }
    }

    if (reg.infinite_mult_total > 0) {
        auto chains = jordan_chains_at_infinity(p, tol);
        int found = 0;
        for (const auto& chain : chains) found += chain.length();
        if (found != reg.infinite_mult_total)
            throw NoConvergence("infinite chain lengths disagree with nk - M");
        col = 0;
        for (const auto& chain : chains) {
            const int len = chain.length();
            pair.Z.block(col, col, len, len) = jordan_block(Complex(0.0, 0.0), len);
            for (int i = 0; i < len; ++i)
                pair.Y.col(col + i) = chain.vectors[static_cast<size_t>(i)];
            pair.z_blocks.push_back({Complex(0.0, 0.0), len});
            col += len;
        }
    }

    if (nk > 0 && numerical_rank(controllability(pair, std::max(1, k)), tol) != nk)
        throw NoConvergence("computed maximal pair is not controllable");
    return pair;
}

enum class InversionSide {
    to_infinite,  ///< move finite (nonzero) eigenvalue blocks from T into Z
    to_finite     ///< move the matching inverse-eigenvalue blocks from Z into T
};

namespace detail {

struct BlockSpan {
    Eigen::Index offset;
    BlockInfo info;
};

inline std::vector<BlockSpan> block_spans(const std::vector<BlockInfo>& blocks) {
    std::vector<BlockSpan> spans;
    Eigen::Index off = 0;
    for (const auto& b : blocks) {
        spans.push_back({off, b});
        off += b.size;
    }
    return spans;
}

}  // namespace detail

/// Spectral inversion: transport the blocks of the selected nonzero finite
/// eigenvalues between the T and Z sides, inverting the block matrix. eigs is
/// always expressed in terms of finite eigenvalues of P; with to_finite the
/// matching Z blocks are those whose stored eigenvalue is 1/e. Moved blocks
/// are placed ahead of the existing content on the receiving side.
inline StandardPair spectral_inversion(const StandardPair& pair, const std::vector<Complex>& eigs,
                                       InversionSide side, const Tolerance& tol = {}) {
    if (eigs.empty()) return pair;

    const bool from_t = side == InversionSide::to_infinite;
    const CMat& u = from_t ? pair.X : pair.Y;
    const CMat& w = from_t ? pair.T : pair.Z;
    const auto& blocks = from_t ? pair.t_blocks : pair.z_blocks;
    const auto spans = detail::block_spans(blocks);

    std::vector<bool> moved(spans.size(), false);
    for (const Complex& e : eigs) {
        if (std::abs(e) <= tol.cluster_radius)
            throw ZeroEigenvalueInversion("zero eigenvalues do not invert");
        const Complex target = from_t ? e : 1.0 / e;
        const double radius = tol.cluster_radius * (1.0 + std::abs(target));
        bool hit = false;
        for (size_t i = 0; i < spans.size(); ++i)
            if (std::abs(spans[i].info.eigenvalue - target) <= radius) {
                moved[i] = true;
                hit = true;
            }
        if (!hit) throw EigenvalueNotPresent("no block matches requested eigenvalue");
    }

    CMat u_keep(u.rows(), 0), u_mov(u.rows(), 0);
    std::vector<CMat> keep_blocks, mov_blocks;
    std::vector<BlockInfo> keep_info, mov_info;
    for (size_t i = 0; i < spans.size(); ++i) {
        const auto& s = spans[i];
        const CMat sub = w.block(s.offset, s.offset, s.info.size, s.info.size);
        const CMat cols = u.middleCols(s.offset, s.info.size);
        if (moved[i]) {
            mov_blocks.push_back(invert(sub, tol));
            mov_info.push_back({1.0 / s.info.eigenvalue, s.info.size});
            u_mov.conservativeResize(Eigen::NoChange, u_mov.cols() + s.info.size);
            u_mov.rightCols(s.info.size) = cols;
        } else {
            keep_blocks.push_back(sub);
            keep_info.push_back(s.info);
            u_keep.conservativeResize(Eigen::NoChange, u_keep.cols() + s.info.size);
            u_keep.rightCols(s.info.size) = cols;
        }
    }

    StandardPair out;
    if (from_t) {
        out.X = u_keep;
        out.T = block_diag(keep_blocks);
        out.t_blocks = keep_info;
        out.Y = zeros(pair.m(), u_mov.cols() + pair.q());
        out.Y.leftCols(u_mov.cols()) = u_mov;
        out.Y.rightCols(pair.q()) = pair.Y;
        out.Z = block_diag(block_diag(mov_blocks), pair.Z);
        out.z_blocks = mov_info;
        out.z_blocks.insert(out.z_blocks.end(), pair.z_blocks.begin(), pair.z_blocks.end());
    } else {
        out.Y = u_keep;
        out.Z = block_diag(keep_blocks);
        out.z_blocks = keep_info;
        out.X = zeros(pair.m(), u_mov.cols() + pair.p());
        out.X.leftCols(u_mov.cols()) = u_mov;
        out.X.rightCols(pair.p()) = pair.X;
        out.T = block_diag(block_diag(mov_blocks), pair.T);
        out.t_blocks = mov_info;
        out.t_blocks.insert(out.t_blocks.end(), pair.t_blocks.begin(), pair.t_blocks.end());
    }
    return out;
}

/// Horizontal concatenation of the X/Y parts and direct sums of T/Z.
/// Controllability is not automatically preserved; the rank is re-checked at
/// the smallest meaningful depth and reported.
struct MergedPair {
    StandardPair pair;
    bool controllable = false;
};

inline MergedPair merge_pairs(const std::vector<StandardPair>& pairs, const Tolerance& tol = {}) {
    if (pairs.empty()) throw DimensionMismatch("merge_pairs: empty input");
    const Eigen::Index m = pairs.front().m();
    Eigen::Index p = 0, q = 0;
    for (const auto& pr : pairs) {
        if (pr.m() != m) throw DimensionMismatch("merge_pairs: mixed vector sizes");
        p += pr.p();
        q += pr.q();
    }

    MergedPair out;
    out.pair.X = zeros(m, p);
    out.pair.Y = zeros(m, q);
    out.pair.T = zeros(p, p);
    out.pair.Z = zeros(q, q);
    Eigen::Index cp = 0, cq = 0;
    for (const auto& pr : pairs) {
        out.pair.X.middleCols(cp, pr.p()) = pr.X;
        out.pair.T.block(cp, cp, pr.p(), pr.p()) = pr.T;
        out.pair.Y.middleCols(cq, pr.q()) = pr.Y;
        out.pair.Z.block(cq, cq, pr.q(), pr.q()) = pr.Z;
        out.pair.t_blocks.insert(out.pair.t_blocks.end(), pr.t_blocks.begin(), pr.t_blocks.end());
        out.pair.z_blocks.insert(out.pair.z_blocks.end(), pr.z_blocks.begin(), pr.z_blocks.end());
        cp += pr.p();
        cq += pr.q();
    }

    const int depth = std::max<int>(2, static_cast<int>((p + q + m - 1) / m));
    out.controllable = numerical_rank(controllability(out.pair, depth), tol) == p + q;
    return out;
}

/// Coefficients [A_0, ..., A_k] recovered as a left-nullspace basis of the
/// depth-(k+1) stacked matrix with block rows [X T^i | Y Z^{k-i}]. The result
/// is unique up to a left GL factor; the scalar gauge is fixed by scaling the
/// first invertible coefficient among A_k, A_0 to unit norm.
inline MatrixPolynomial reconstruct_from_pair(const StandardPair& pair, int n, int k,
                                              const Tolerance& tol = {}) {
    if (pair.m() != n || k < 1) throw DimensionMismatch("reconstruct_from_pair");
    if (pair.p() + pair.q() != Eigen::Index(n) * k)
        throw RankDeficientPair("pair size does not equal nk");
    if (numerical_rank(controllability(pair, std::max(1, k)), tol) != Eigen::Index(n) * k)
        throw RankDeficientPair("controllability matrix is rank deficient");

    CMat stacked = zeros(Eigen::Index(k + 1) * n, pair.p() + pair.q());
    CMat xt = pair.X;
    std::vector<CMat> yz{pair.Y};
    for (int i = 1; i <= k; ++i) yz.push_back((yz.back() * pair.Z).eval());
    for (int i = 0; i <= k; ++i) {
        stacked.block(Eigen::Index(i) * n, 0, n, pair.p()) = xt;
        stacked.block(Eigen::Index(i) * n, pair.p(), n, pair.q()) = yz[static_cast<size_t>(k - i)];
        if (i < k) xt = (xt * pair.T).eval();
    }

    const CMat w = left_nullspace(stacked, tol);
    if (w.rows() != n) throw RankDeficientPair("left nullspace dimension is not n");

    std::vector<CMat> coeffs;
    for (int i = 0; i <= k; ++i) coeffs.push_back(w.middleCols(Eigen::Index(i) * n, n));

    // Coefficients that vanish structurally come out of the nullspace basis
    // as roundoff; flush them so the trimmed degree is honest.
    double biggest = 0.0;
    for (const auto& c : coeffs) biggest = std::max(biggest, c.norm());
    for (auto& c : coeffs)
        if (c.norm() < 1e-12 * biggest) c.setZero();

    double gauge = w.norm();
    if (numerical_rank(coeffs.back(), tol) == n) gauge = coeffs.back().norm();
    else if (numerical_rank(coeffs.front(), tol) == n) gauge = coeffs.front().norm();
    for (auto& c : coeffs) c /= gauge;
    return make_polynomial(std::move(coeffs));
}

}  // namespace matpoly
