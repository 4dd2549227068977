#pragma once

// Truncated subproduct Fock space ⊕_{n≤N} H_n and the operators on it.
//
// Every operator is stored as a dense matrix in the concatenated H_n bases
// (block n has size dims[n]). The creation operators kill the top level N,
// so relations are only asserted on vectors from levels 0…N−1.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tlsub/jones_wenzl.hpp"
#include "tlsub/matrix_core.hpp"
#include "tlsub/tl_tensor.hpp"

namespace tlsub {

struct FockSpace {
    int levels = 0;
    std::vector<Eigen::Index> dims;
    std::vector<Eigen::Index> offsets; ///< offsets[n] = start of level n; offsets[levels+1] = dim
    Eigen::Index dim = 0;

    static FockSpace from_dims(const std::vector<std::int64_t> &d) {
        FockSpace s;
        s.levels = static_cast<int>(d.size()) - 1;
        s.offsets.push_back(0);
        for (auto x : d) {
            s.dims.push_back(static_cast<Eigen::Index>(x));
            s.offsets.push_back(s.offsets.back() + static_cast<Eigen::Index>(x));
        }
        s.dim = s.offsets.back();
        return s;
    }

    Eigen::Index offset(int n) const { return offsets[static_cast<std::size_t>(n)]; }
    Eigen::Index block_dim(int n) const { return dims[static_cast<std::size_t>(n)]; }

    /// Dimension of levels 0…N−1, i.e. the part on which relations are checked.
    Eigen::Index checked_dim() const { return offset(levels); }

    auto block(CMatrix &x, int row_level, int col_level) const {
        return x.block(offset(row_level), offset(col_level), block_dim(row_level),
                       block_dim(col_level));
    }
    auto block(const CMatrix &x, int row_level, int col_level) const {
        return x.block(offset(row_level), offset(col_level), block_dim(row_level),
                       block_dim(col_level));
    }
};

/// Function on levels acting as values[n] on H_n; an element of the sequence algebra c.
struct GaugeDiagonal {
    std::vector<Complex> values;

    static GaugeDiagonal indicator(int levels, int n) {
        GaugeDiagonal g;
        g.values.assign(static_cast<std::size_t>(levels) + 1, Complex(0.0));
        g.values[static_cast<std::size_t>(n)] = 1.0;
        return g;
    }

    /// Left shift γ(f)(n) = f(n+1); the last value is repeated past the truncation.
    GaugeDiagonal shifted() const {
        GaugeDiagonal g;
        g.values.assign(values.begin() + 1, values.end());
        g.values.push_back(values.back());
        return g;
    }

    CVector diagonal(const FockSpace &s) const {
        CVector diag(s.dim);
        for (int n = 0; n <= s.levels; ++n)
            diag.segment(s.offset(n), s.block_dim(n)).setConstant(values[static_cast<std::size_t>(n)]);
        return diag;
    }
    CMatrix matrix(const FockSpace &s) const { return diagonal(s).asDiagonal(); }
};

struct FockOperators {
    JWTower tower;
    FockSpace space;
    std::vector<CMatrix> S;      ///< left creation operators S_i
    std::vector<CMatrix> R;      ///< right creation operators R_i
    std::vector<CMatrix> E;      ///< level projections e_n
    std::vector<CMatrix> P_tail; ///< p_0 … p_N

    int m() const { return tower.m(); }
    int levels() const { return space.levels; }
    const TLSystem &system() const { return tower.system; }
    CMatrix identity_op() const { return identity(space.dim); }
};

/// p_n = Σ_{|w|=n} S_w S_w*, enumerated by first letter: p_{n+1} = Σ_i S_i p_n S_i*.
/// Each p_n is block diagonal, so the sum is evaluated one level block at a time.
inline std::vector<CMatrix> tail_projections(const std::vector<CMatrix> &s, const FockSpace &space,
                                             int count) {
    std::vector<CMatrix> p;
    p.push_back(identity(space.dim));
    for (int n = 0; n < count; ++n) {
        CMatrix next = CMatrix::Zero(space.dim, space.dim);
        for (int l = 0; l < space.levels; ++l)
            for (const auto &si : s) {
                const auto up = space.block(si, l + 1, l);
                space.block(next, l + 1, l + 1).noalias() +=
                    up * space.block(p.back(), l, l) * up.adjoint();
            }
        p.push_back(std::move(next));
    }
    return p;
}

inline FockOperators build_fock(const TLSystem &sys, int levels,
                                std::size_t budget = kDefaultScalarBudget) {
    if (!sys.tau_defined())
        throw TauUndefined("a_i conj(a_{m-i+1}) is not a constant in {-1, 1}");
    if (levels < 2)
        throw Error("build_fock: need at least two levels");
    FockOperators ops;
    ops.tower = build_tower(sys, levels, budget);
    ops.space = FockSpace::from_dims(ops.tower.dims);
    const auto dim = ops.space.dim;
    const std::size_t fock_scalars =
        static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim) *
        (2 * static_cast<std::size_t>(sys.m) + 2 * static_cast<std::size_t>(levels) + 2);
    if (fock_scalars > budget)
        throw MemoryBudgetExceeded("Fock operators need " + std::to_string(fock_scalars) +
                                   " scalars, budget is " + std::to_string(budget));

    const Eigen::Index m = sys.m;
    const auto &space = ops.space;
    for (Eigen::Index i = 0; i < m; ++i) {
        CMatrix s = CMatrix::Zero(dim, dim);
        CMatrix r = CMatrix::Zero(dim, dim);
        for (int n = 0; n < levels; ++n) {
            const CMatrix &vn = ops.tower.bases[n].matrix();
            const CMatrix &vn1 = ops.tower.bases[n + 1].matrix();
            const Eigen::Index mn = vn.rows();
            // S_i: V_{n+1}*(ξ_i ⊗ V_n); ξ_i ⊗ V_n occupies row block i
            space.block(s, n + 1, n) = vn1.middleRows(i * mn, mn).adjoint() * vn;
            // R_i: V_{n+1}*(V_n ⊗ ξ_i); V_n ⊗ ξ_i occupies rows r·m + i
            space.block(r, n + 1, n) = vn1(Eigen::seq(i, Eigen::last, m), Eigen::all).adjoint() * vn;
        }
        ops.S.push_back(std::move(s));
        ops.R.push_back(std::move(r));
    }
    for (int n = 0; n <= levels; ++n)
        ops.E.push_back(GaugeDiagonal::indicator(levels, n).matrix(space));
    ops.P_tail = tail_projections(ops.S, space, levels);
    return ops;
}

inline const std::vector<CMatrix> &tail_projections(const FockOperators &ops) { return ops.P_tail; }

namespace detail {
/// ‖X restricted to levels 0…N−1‖
inline double checked_norm(const FockOperators &ops, const CMatrix &x) {
    return operator_norm(x.leftCols(ops.space.checked_dim()));
}
} // namespace detail

/// Named residuals of the generator relations. Thresholds are applied by the caller.
struct RelationReport {
    double gauge_shift = 0; ///< (i)   max over indicators f of ‖f S_i − S_i γ(f)‖
    double row_sum = 0;     ///< (ii)  ‖Σ S_i S_i* − (1 − e_0)‖
    double polynomial = 0;  ///< (iii) ‖Σ a_i S_i S_{m−i+1}‖
    double quadratic = 0;   ///< (iv)  max_ij ‖S_i*S_j + a_i conj(a_j) φ S_{m−i+1}S_{m−j+1}* − δ_ij‖
    double tol = 0;

    std::vector<std::pair<std::string, double>> entries() const {
        return {{"gauge_shift", gauge_shift},
                {"row_sum", row_sum},
                {"polynomial", polynomial},
                {"quadratic", quadratic}};
    }
    bool passes() const {
        return gauge_shift < tol && row_sum < tol && polynomial < tol && quadratic < tol;
    }
};

inline GaugeDiagonal phi_diagonal(const FockOperators &ops) {
    GaugeDiagonal g;
    for (int n = 0; n <= ops.levels(); ++n)
        g.values.emplace_back(phi(n, ops.system().q));
    return g;
}

inline RelationReport verify_relations(const FockOperators &ops, double tol = kProjectionTol) {
    RelationReport rep;
    rep.tol = tol;
    const int m = ops.m();
    const int levels = ops.levels();
    const auto &a = ops.system().coeffs;
    const CMatrix one = ops.identity_op();

    for (int n = 0; n <= levels; ++n) {
        const GaugeDiagonal f = GaugeDiagonal::indicator(levels, n);
        const CVector fd = f.diagonal(ops.space);
        const CVector gd = f.shifted().diagonal(ops.space);
        for (const auto &si : ops.S)
            rep.gauge_shift = std::max(
                rep.gauge_shift, detail::checked_norm(ops, fd.asDiagonal() * si - si * gd.asDiagonal()));
    }

    CMatrix rows = -(one - ops.E[0]);
    CMatrix poly = CMatrix::Zero(one.rows(), one.cols());
    for (int i = 0; i < m; ++i) {
        rows.noalias() += ops.S[i] * ops.S[i].adjoint();
        poly.noalias() += a[i] * ops.S[i] * ops.S[m - 1 - i];
    }
    rep.row_sum = detail::checked_norm(ops, rows);
    rep.polynomial = detail::checked_norm(ops, poly);

    const CVector phi_d = phi_diagonal(ops).diagonal(ops.space);
    const auto checked = ops.space.checked_dim();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            // only the columns from levels 0…N−1 enter the residual
            CMatrix x = ops.S[i].adjoint() * ops.S[j].leftCols(checked);
            x.noalias() += (a[i] * std::conj(a[j])) * phi_d.asDiagonal() *
                           (ops.S[m - 1 - i] * ops.S[m - 1 - j].adjoint().leftCols(checked));
            if (i == j)
                x -= one.leftCols(checked);
            rep.quadratic = std::max(rep.quadratic, operator_norm(x));
        }
    return rep;
}

struct TailReport {
    double idempotent = 0;   ///< max_n ‖p_n² − p_n‖
    double level_gap = 0;    ///< max_{n≤N−1} ‖p_n − p_{n+1} − e_n‖
    double intertwining = 0; ///< max_{n,i} ‖p_{n+1}S_i − S_i p_n‖
};

inline TailReport tail_report(const FockOperators &ops) {
    const auto &p = tail_projections(ops);
    const auto checked = ops.space.checked_dim();
    TailReport rep;
    for (const auto &pn : p)
        rep.idempotent = std::max(
            rep.idempotent, operator_norm(pn * pn.leftCols(checked) - pn.leftCols(checked)));
    for (int n = 0; n < ops.levels(); ++n) {
        rep.level_gap =
            std::max(rep.level_gap, detail::checked_norm(ops, p[n] - p[n + 1] - ops.E[n]));
        for (const auto &si : ops.S)
            rep.intertwining = std::max(
                rep.intertwining, operator_norm(p[n + 1] * si.leftCols(checked) -
                                                si * p[n].leftCols(checked)));
    }
    return rep;
}

/// ‖Σ R_i R_i* − (1 − e_0)‖ on levels 0…N−1.
inline double right_row_sum_residual(const FockOperators &ops) {
    CMatrix x = -(ops.identity_op() - ops.E[0]);
    for (const auto &ri : ops.R)
        x.noalias() += ri * ri.adjoint();
    return detail::checked_norm(ops, x);
}

/// S_i* on H_{n+1} against the plain contraction ⟨ξ_i|⊗1, max over n ≤ N−1 and i.
inline double s_vs_t_residual(const FockOperators &ops) {
    double worst = 0;
    for (int n = 0; n < ops.levels(); ++n) {
        const CMatrix &vn = ops.tower.bases[n].matrix();
        const CMatrix &vn1 = ops.tower.bases[n + 1].matrix();
        const Eigen::Index mn = vn.rows();
        for (int i = 0; i < ops.m(); ++i) {
            const CMatrix sstar = ops.space.block(ops.S[i], n + 1, n).adjoint();
            worst = std::max(worst, operator_norm(vn * sstar - vn1.middleRows(i * mn, mn)));
        }
    }
    return worst;
}

struct CommutatorNorms {
    double c1 = 0; ///< max_ij ‖[S_i, R_j]|_{H_n}‖
    double c2 = 0; ///< max_ij ‖[S_i*, R_j]|_{H_n}‖
};

inline CommutatorNorms commutator_norms(const FockOperators &ops, int n) {
    if (n < 0 || n > ops.levels() - 1)
        throw Error("commutator_norms: level must be at most N-1");
    const auto &sp = ops.space;
    CommutatorNorms out;
    for (int i = 0; i < ops.m(); ++i)
        for (int j = 0; j < ops.m(); ++j) {
            const CMatrix &s = ops.S[i];
            const CMatrix &r = ops.R[j];
            // [S_i, R_j]: H_n → H_{n+2}; zero past the truncation
            if (n + 2 <= ops.levels()) {
                const CMatrix c = sp.block(s, n + 2, n + 1) * sp.block(r, n + 1, n) -
                                  sp.block(r, n + 2, n + 1) * sp.block(s, n + 1, n);
                out.c1 = std::max(out.c1, operator_norm(c));
            }
            // [S_i*, R_j]: H_n → H_n
            CMatrix c = sp.block(s, n + 1, n).adjoint() * sp.block(r, n + 1, n);
            if (n >= 1)
                c -= sp.block(r, n, n - 1) * sp.block(s, n, n - 1).adjoint();
            out.c2 = std::max(out.c2, operator_norm(c));
        }
    return out;
}

/// ψ_{n,n+k}(x) = f_{n+k}(x⊗1)f_{n+k}, with x ∈ B(H_n) given in the H_n basis.
inline CMatrix psi_map(const JWTower &tw, int n, int k, const CMatrix &x) {
    if (n < 0 || k < 0 || n + k > tw.levels)
        throw Error("psi_map: levels out of range");
    const CMatrix &vn = tw.bases[n].matrix();
    const CMatrix &vnk = tw.bases[n + k].matrix();
    if (x.rows() != vn.cols() || x.cols() != vn.cols())
        throw Error("psi_map: x has the wrong size for H_n");
    const CMatrix lt = (vn * x * vn.adjoint()).transpose();
    const Eigen::Index mn = vn.rows();
    const auto mk = static_cast<Eigen::Index>(ipow(tw.m(), k));
    CMatrix y(vnk.rows(), vnk.cols());
    for (Eigen::Index c = 0; c < vnk.cols(); ++c) {
        // column c as an (m^k × m^n) matrix: entry (b, a) is the coefficient of e_a ⊗ e_b
        Eigen::Map<const CMatrix> mt(vnk.col(c).data(), mk, mn);
        Eigen::Map<CMatrix>(y.col(c).data(), mk, mn).noalias() = mt * lt;
    }
    return vnk.adjoint() * y;
}

/// Θ(x) = Σ R_i x R_i*
inline CMatrix theta_map(const FockOperators &ops, const CMatrix &x) {
    CMatrix out = CMatrix::Zero(x.rows(), x.cols());
    for (const auto &ri : ops.R)
        out.noalias() += ri * x * ri.adjoint();
    return out;
}

inline CMatrix theta_power(const FockOperators &ops, CMatrix x, int k) {
    for (int j = 0; j < k; ++j)
        x = theta_map(ops, x);
    return x;
}

/// Level-n diagonal block of a Fock operator.
inline CMatrix level_block(const FockOperators &ops, const CMatrix &x, int n) {
    return ops.space.block(x, n, n);
}

/// Assembles a block-diagonal operator from its level blocks.
inline CMatrix from_level_blocks(const FockOperators &ops, const std::vector<CMatrix> &blocks) {
    CMatrix x = CMatrix::Zero(ops.space.dim, ops.space.dim);
    for (int n = 0; n <= ops.levels() && n < static_cast<int>(blocks.size()); ++n)
        ops.space.block(x, n, n) = blocks[static_cast<std::size_t>(n)];
    return x;
}

/// One letter of a word in the S_i and S_i*; index is 0-based.
struct Letter {
    int index = 0;
    bool adjoint = false;
};
using Word = std::vector<Letter>;

/// (#S) − (#S*): the word maps level n into level n + degree.
inline int gauge_degree(const Word &w) {
    int d = 0;
    for (const auto &l : w)
        d += l.adjoint ? -1 : 1;
    return d;
}

/// Product of the letters in reading order.
inline CMatrix word_matrix(const FockOperators &ops, const Word &w) {
    CMatrix x = ops.identity_op();
    for (const auto &l : w) {
        const CMatrix &s = ops.S.at(static_cast<std::size_t>(l.index));
        x = l.adjoint ? CMatrix(x * s.adjoint()) : CMatrix(x * s);
    }
    return x;
}

/// max over n0 ≤ n, n+k ≤ N−1 of ‖x_{n+k} − ψ_{n,n+k}(x_n)‖ for a block-diagonal x.
inline double boundary_flatness(const FockOperators &ops, const CMatrix &x, int n0) {
    const int top = ops.levels() - 1;
    if (n0 < 0 || n0 > top)
        throw Error("boundary_flatness: depth out of range");
    double worst = 0;
    for (int n = n0; n <= top; ++n) {
        const CMatrix xn = level_block(ops, x, n);
        for (int k = 1; n + k <= top; ++k)
            worst = std::max(worst, operator_norm(level_block(ops, x, n + k) -
                                                  psi_map(ops.tower, n, k, xn)));
    }
    return worst;
}

} // namespace tlsub
