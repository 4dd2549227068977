#pragma once

// Jones–Wenzl projections f_n on H^{⊗n} and the fibers H_n = f_n H^{⊗n}.
//
// The tower is built with the Wenzl recursion
//   f_{n+1} = 1⊗f_n − [2]_q φ(n) (1⊗f_n)(e⊗1)(1⊗f_n),
// with e on the first two tensor factors. Writing e⊗1 = W·W* for the
// isometry W = ξ̂⊗1 turns the correction into c·K·K* with K = (1⊗f_n)W, which
// is how it is evaluated here.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tlsub/matrix_core.hpp"
#include "tlsub/tl_tensor.hpp"

namespace tlsub {

inline constexpr std::size_t kDefaultScalarBudget = std::size_t{1} << 26;
/// ‖f_n² − f_n‖ above this aborts construction.
inline constexpr double kDriftTol = 1e-9;

/// [k]_q = q^{k−1} + q^{k−3} + … + q^{1−k}; equals k at q = 1.
inline double q_integer(int k, double q) {
    if (k <= 0)
        return 0.0;
    if (std::abs(q - 1.0) < 1e-12)
        return static_cast<double>(k);
    double s = 0;
    for (int j = 0; j < k; ++j)
        s += std::pow(q, k - 1 - 2 * j);
    return s;
}

/// φ(n) = [n]_q / [n+1]_q
inline double phi(int n, double q) { return q_integer(n, q) / q_integer(n + 1, q); }

/// d₀ = 1, d₁ = m, d_{n+1} = m·d_n − d_{n−1}
inline std::vector<std::int64_t> dims_by_recurrence(int m, int levels) {
    std::vector<std::int64_t> d;
    d.reserve(static_cast<std::size_t>(levels) + 1);
    d.push_back(1);
    if (levels >= 1)
        d.push_back(m);
    for (int n = 2; n <= levels; ++n)
        d.push_back(m * d[n - 1] - d[n - 2]);
    return d;
}

struct JWTower {
    TLSystem system;
    int levels = 0;
    std::vector<CMatrix> f;        ///< f[n] is m^n × m^n
    std::vector<Isometry> bases;   ///< bases[n]: H_n ↪ H^{⊗n}
    std::vector<std::int64_t> dims;
    std::vector<double> drift;     ///< ‖f[n]² − f[n]‖ as certified during construction

    int m() const { return system.m; }
};

namespace detail {

/// K = (1⊗f_n)(ξ̂⊗1): row block a is Σ_b ξ̂_{ab} · (column block b of f_n).
inline CMatrix wenzl_factor(const TLSystem &sys, const CMatrix &fn) {
    const Eigen::Index m = sys.m;
    const Eigen::Index dn = fn.rows();
    const Eigen::Index dn1 = dn / m;
    const CVector xi = sys.xi.normalized();
    CMatrix k = CMatrix::Zero(m * dn, dn1);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) {
            const Complex c = xi(a * m + b);
            if (c != Complex(0.0))
                k.middleRows(a * dn, dn) += c * fn.middleCols(b * dn1, dn1);
        }
    return k;
}

} // namespace detail

/// [2]_q φ(n)(1⊗f_n)(e⊗1^{⊗(n−1)})(1⊗f_n) on H^{⊗(n+1)}, for n ≥ 1.
inline CMatrix wenzl_correction(const TLSystem &sys, const CMatrix &fn, int n) {
    const double c = q_integer(2, sys.q) * phi(n, sys.q);
    const CMatrix k = detail::wenzl_factor(sys, fn);
    return c * k * k.adjoint();
}

inline JWTower build_tower(const TLSystem &sys, int levels,
                           std::size_t budget = kDefaultScalarBudget) {
    if (levels < 1)
        throw Error("build_tower: need at least one level");
    const std::size_t need = ipow(static_cast<std::size_t>(sys.m), 2 * levels);
    if (need > budget)
        throw MemoryBudgetExceeded(std::to_string(sys.m) + "^" + std::to_string(2 * levels) +
                                   " scalars exceed the budget of " + std::to_string(budget));
    const Eigen::Index m = sys.m;
    JWTower tw;
    tw.system = sys;
    tw.levels = levels;
    tw.dims = dims_by_recurrence(sys.m, levels);
    tw.f.push_back(identity(1));
    tw.f.push_back(identity(m));
    tw.bases.push_back(Isometry::trusted(identity(1)));
    tw.bases.push_back(Isometry::trusted(identity(m)));
    tw.drift = {0.0, 0.0};

    const CVector xi = sys.xi.normalized();
    const double two_q = q_integer(2, sys.q);
    for (int n = 1; n < levels; ++n) {
        const CMatrix &fn = tw.f[n];
        const CMatrix &vn = tw.bases[n].matrix();
        const Eigen::Index dim_n = fn.rows();
        const Eigen::Index dim_n1 = dim_n / m;
        const Eigen::Index rank_n = vn.cols();
        const double c = two_q * phi(n, sys.q);

        const CMatrix k = detail::wenzl_factor(sys, fn);
        CMatrix next(m * dim_n, m * dim_n);
        next.noalias() = -c * k * k.adjoint();
        for (Eigen::Index a = 0; a < m; ++a)
            next.block(a * dim_n, a * dim_n, dim_n, dim_n) += fn;

        // Same recursion compressed to the range of 1⊗f_n = U·U*, U = 1⊗V_n.
        CMatrix kc = CMatrix::Zero(m * rank_n, dim_n1);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b) {
                const Complex w = xi(a * m + b);
                if (w != Complex(0.0))
                    kc.middleRows(a * rank_n, rank_n) +=
                        w * vn.middleRows(b * dim_n1, dim_n1).adjoint();
            }
        CMatrix g = -c * kc * kc.adjoint();
        g.diagonal().array() += 1.0;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (g + g.adjoint()));
        const RVector &mu = es.eigenvalues();
        const double drift = (mu.array() * mu.array() - mu.array()).abs().maxCoeff();
        const Eigen::Index rank = (mu.array() > 0.5).count();
        if (drift > kDriftTol)
            throw ProjectionDrift("‖f²−f‖ = " + std::to_string(drift) + " at level " +
                                  std::to_string(n + 1));
        if (rank != tw.dims[n + 1])
            throw ProjectionDrift("rank(f_" + std::to_string(n + 1) + ") = " +
                                  std::to_string(rank) + " but the recurrence gives " +
                                  std::to_string(tw.dims[n + 1]));
        const CMatrix y = es.eigenvectors().rightCols(rank);
        CMatrix v(m * dim_n, rank);
        for (Eigen::Index a = 0; a < m; ++a)
            v.middleRows(a * dim_n, dim_n).noalias() = vn * y.middleRows(a * rank_n, rank_n);

        tw.f.push_back(std::move(next));
        tw.bases.push_back(Isometry::trusted(std::move(v)));
        tw.drift.push_back(drift);
    }
    return tw;
}

inline const Isometry &subspace_basis(const JWTower &tw, int n) {
    if (n < 0 || n > tw.levels)
        throw Error("subspace_basis: level out of range");
    return tw.bases[static_cast<std::size_t>(n)];
}

/// ‖f_{n+1} − (1⊗f_n)(f_n⊗1)‖
inline double wenzl_defect(const JWTower &tw, int n) {
    if (n < 0 || n + 1 > tw.levels)
        throw Error("wenzl_defect: level out of range");
    const Eigen::Index m = tw.m();
    const CMatrix &fn = tw.f[n];
    const Eigen::Index dn = fn.rows();
    const CMatrix right = kron(fn, identity(m));
    CMatrix diff = tw.f[n + 1];
    for (Eigen::Index a = 0; a < m; ++a)
        diff.middleRows(a * dn, dn).noalias() -= fn * right.middleRows(a * dn, dn);
    return operator_norm(diff);
}

/// 1^{⊗pos} ⊗ e ⊗ 1^{⊗(n−pos−2)} as a dense matrix.
inline CMatrix embedded_e(const TLSystem &sys, int n, int pos) {
    return kron(kron(identity(static_cast<Eigen::Index>(ipow(sys.m, pos))), sys.e),
                identity(static_cast<Eigen::Index>(ipow(sys.m, n - pos - 2))));
}

/// ‖f_n·(1^{⊗pos}⊗e⊗1^{⊗(n−pos−2)})‖, evaluated as ‖f_n·(1⊗ξ̂⊗1)‖.
inline double jw_defining_defect(const JWTower &tw, int n, int pos) {
    if (n < 2 || pos < 0 || pos > n - 2 || n > tw.levels)
        throw Error("jw_defining_defect: bad level/position");
    const Eigen::Index m = tw.m();
    const auto left = static_cast<Eigen::Index>(ipow(tw.m(), pos));
    const auto right = static_cast<Eigen::Index>(ipow(tw.m(), n - pos - 2));
    const CVector xi = tw.system.xi.normalized();
    const CMatrix &fn = tw.f[n];
    CMatrix fw = CMatrix::Zero(fn.rows(), left * right);
    for (Eigen::Index p = 0; p < left; ++p)
        for (Eigen::Index r = 0; r < right; ++r) {
            const Eigen::Index col = p * right + r;
            for (Eigen::Index ab = 0; ab < m * m; ++ab) {
                const Complex c = xi(ab);
                if (c != Complex(0.0))
                    fw.col(col) += c * fn.col((p * m * m + ab) * right + r);
            }
        }
    return operator_norm(fw);
}

} // namespace tlsub
