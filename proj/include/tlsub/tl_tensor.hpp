#pragma once

// Temperley–Lieb tensors in H⊗H, viewed as anti-linear operators on H.
//
// An anti-linear operator is stored as the matrix M of ξ ↦ M·conj(ξ). With
// that convention A² has matrix M·conj(M), the anti-linear adjoint has matrix
// Mᵀ and A*A has matrix Mᵀ·conj(M).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tlsub/matrix_core.hpp"

namespace tlsub {

/// Absolute tolerance for A²*A² = α·1.
inline constexpr double kTLTol = 1e-9;
/// Tolerance on |aᵢ·a_{m−i+1}| = 1.
inline constexpr double kCoeffTol = 1e-10;
/// Spectral clustering gap for σ(|A|) and for unitary spectra.
inline constexpr double kClusterGap = 1e-6;

struct AntiLinearOp {
    CMatrix matrix;

    Eigen::Index dim() const { return matrix.rows(); }

    CVector apply(const CVector &v) const { return matrix * v.conjugate(); }
    /// A², a linear operator.
    CMatrix square() const { return matrix * matrix.conjugate(); }
    /// Matrix of the anti-linear adjoint A*.
    CMatrix adjoint_matrix() const { return matrix.transpose(); }
    /// A*A, linear and positive semidefinite.
    CMatrix modulus_squared() const { return matrix.transpose() * matrix.conjugate(); }

    /// U·A·U* for a unitary U.
    AntiLinearOp conjugated_by(const CMatrix &u) const { return {u * matrix * u.transpose()}; }
    AntiLinearOp scaled(double s) const { return {s * matrix}; }
};

/// F_P: the anti-diagonal operator with A ξᵢ = aᵢ ξ_{m−i+1}.
inline AntiLinearOp antidiagonal_op(std::span<const Complex> coeffs) {
    const auto m = static_cast<Eigen::Index>(coeffs.size());
    CMatrix f = CMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        f(m - 1 - i, i) = coeffs[static_cast<std::size_t>(i)];
    return {f};
}

struct TLCheck {
    double alpha = 0;
    double lambda = 0;
    /// ‖(A²)*A² − α·1‖
    double deviation = 0;
};

/// Checks that A² is unitary up to a scalar and returns α and λ = α⁻¹(Tr A*A)².
inline TLCheck tl_check(const AntiLinearOp &a, double tol = kTLTol) {
    const auto m = a.dim();
    if (m < 2 || a.matrix.cols() != m)
        throw NotTemperleyLieb("operator must be square with dimension >= 2");
    if (a.matrix.norm() == 0.0)
        throw NotTemperleyLieb("zero operator");
    const CMatrix sq = a.square();
    const CMatrix gram = sq.adjoint() * sq;
    TLCheck out;
    out.alpha = gram.trace().real() / static_cast<double>(m);
    out.deviation = hermitian_norm(gram - out.alpha * identity(m));
    if (out.deviation > tol || out.alpha <= 0)
        throw NotTemperleyLieb("(A²)*A² is not a scalar matrix (deviation " +
                               std::to_string(out.deviation) + ")");
    const double hs = a.matrix.squaredNorm(); // Tr A*A
    out.lambda = hs * hs / out.alpha;
    return out;
}

/// ξ_A = Σ ξᵢ⊗Aξᵢ; component (i,j) is M[j,i], flattened as i·m + j.
inline CVector vector_of(const AntiLinearOp &a) {
    const auto m = a.dim();
    CVector xi(m * m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            xi(i * m + j) = a.matrix(j, i);
    return xi;
}

/// Validated Temperley–Lieb datum for P = Σ aᵢ XᵢX_{m−i+1}.
struct TLSystem {
    int m = 0;
    std::vector<Complex> coeffs;
    double lambda = 0;
    double q = 1;
    double t = 1;
    /// Defined when aᵢ·conj(a_{m−i+1}) = −τ ∈ {−1, 1} for every i.
    std::optional<int> tau;
    CVector xi;
    /// Rank-one projection onto ℂξ, of size m²×m².
    CMatrix e;

    bool tau_defined() const { return tau.has_value(); }
    AntiLinearOp op() const { return antidiagonal_op(coeffs); }
};

/// Root in (0,1] of q + 1/q = s for s ≥ 2.
inline double q_from_sum(double s) {
    if (s <= 2.0)
        return 1.0;
    return (s - std::sqrt((s - 2.0) * (s + 2.0))) / 2.0;
}

inline TLSystem params_from_polynomial(std::span<const Complex> coeffs) {
    const int m = static_cast<int>(coeffs.size());
    if (m < 2)
        throw BadCoefficients("need at least two coefficients");
    for (int i = 0; i < m; ++i) {
        const double p = std::abs(coeffs[i] * coeffs[m - 1 - i]);
        if (std::abs(p - 1.0) > kCoeffTol)
            throw BadCoefficients("|a_" + std::to_string(i + 1) + " a_" + std::to_string(m - i) +
                                  "| = " + std::to_string(p) + " != 1");
    }
    TLSystem sys;
    sys.m = m;
    sys.coeffs.assign(coeffs.begin(), coeffs.end());
    double s = 0;
    for (auto c : coeffs)
        s += std::norm(c);
    sys.lambda = s * s;
    sys.q = q_from_sum(s);
    sys.t = q_from_sum(static_cast<double>(m));

    const Complex first = coeffs[0] * std::conj(coeffs[m - 1]);
    bool constant = std::abs(std::abs(first.real()) - 1.0) <= kCoeffTol &&
                    std::abs(first.imag()) <= kCoeffTol;
    for (int i = 1; i < m && constant; ++i)
        constant = std::abs(coeffs[i] * std::conj(coeffs[m - 1 - i]) - first) <= kCoeffTol;
    if (constant)
        sys.tau = first.real() < 0 ? 1 : -1;

    sys.xi = CVector::Zero(m * m);
    for (int i = 0; i < m; ++i)
        sys.xi(i * m + (m - 1 - i)) = coeffs[i];
    sys.e = sys.xi * sys.xi.adjoint() / sys.xi.squaredNorm();
    return sys;
}

/// e = (1/[2]_q) Σ aᵢ conj(aⱼ) e_{ij} ⊗ e_{m−i+1,m−j+1}, assembled entrywise.
inline CMatrix projection_of(const TLSystem &sys) {
    const int m = sys.m;
    const double two_q = sys.q + 1.0 / sys.q;
    CMatrix e = CMatrix::Zero(m * m, m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            e(i * m + (m - 1 - i), j * m + (m - 1 - j)) =
                sys.coeffs[i] * std::conj(sys.coeffs[j]) / two_q;
    return e;
}

struct TLResiduals {
    double r1 = 0; ///< ‖(e⊗1)(1⊗e)(e⊗1) − λ⁻¹(e⊗1)‖
    double r2 = 0; ///< ‖(1⊗e)(e⊗1)(1⊗e) − λ⁻¹(1⊗e)‖
};

inline TLResiduals tl_relation_residuals(const CMatrix &e, double lambda, int m) {
    const CMatrix e1 = kron(e, identity(m));
    const CMatrix e2 = kron(identity(m), e);
    return {operator_norm(e1 * e2 * e1 - e1 / lambda), operator_norm(e2 * e1 * e2 - e2 / lambda)};
}

inline TLResiduals tl_relation_residuals(const TLSystem &sys) {
    return tl_relation_residuals(sys.e, sys.lambda, sys.m);
}

/// Polar data of an anti-linear A = U|A|.
struct AntiLinearPolar {
    RVector moduli;   ///< eigenvalues of |A|, ascending
    CMatrix vectors;  ///< matching orthonormal eigenvectors
    CMatrix unitary;  ///< matrix of the anti-unitary U
};

inline AntiLinearPolar polar_decomposition(const AntiLinearOp &a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.modulus_squared());
    AntiLinearPolar out;
    out.moduli = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    out.vectors = es.eigenvectors();
    if (out.moduli.minCoeff() <= 0.0)
        throw NotTemperleyLieb("|A| is not invertible");
    const CMatrix inv_mod =
        out.vectors * out.moduli.cwiseInverse().cast<Complex>().asDiagonal() *
        out.vectors.adjoint();
    out.unitary = a.matrix * inv_mod.conjugate();
    return out;
}

/// A rescaled by α^{−1/4} so that A² is unitary.
inline AntiLinearOp normalized(const AntiLinearOp &a) {
    const TLCheck c = tl_check(a);
    return a.scaled(std::pow(c.alpha, -0.25));
}

namespace detail {

/// Groups of consecutive indices of an ascending vector with gaps below kClusterGap.
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters(const RVector &v) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= v.size(); ++i)
        if (i == v.size() || v(i) - v(i - 1) > kClusterGap) {
            out.emplace_back(start, i - start);
            start = i;
        }
    return out;
}

inline double cluster_value(const RVector &v, std::pair<Eigen::Index, Eigen::Index> c) {
    const double mean = v.segment(c.first, c.second).mean();
    return std::abs(mean - 1.0) <= kClusterGap ? 1.0 : mean;
}

/// Schur form of a normal matrix: orthonormal eigenvectors and eigenvalues.
inline std::pair<CVector, CMatrix> normal_eigen(const CMatrix &x) {
    if (x.rows() == 0)
        return {CVector(0), CMatrix(0, 0)};
    Eigen::ComplexSchur<CMatrix> schur(x);
    return {schur.matrixT().diagonal(), schur.matrixU()};
}

inline double arg_key(Complex z) {
    // -π and π are the same point; report π so that -1 sorts last
    const double a = std::arg(z);
    return a <= -std::numbers::pi + 1e-12 ? std::numbers::pi : a;
}

} // namespace detail

struct InvariantPair {
    double beta = 1;
    std::vector<Complex> z; ///< eigenvalues of U² on H_β, sorted by argument
};

struct TLInvariants {
    std::vector<InvariantPair> pairs; ///< ascending β
};

/// Pairs (β, Z_β): β runs over σ(|A|) ∩ (0,1] and Z_β is the spectrum of U² on H_β.
inline TLInvariants invariants_of(const AntiLinearOp &a_in) {
    const AntiLinearOp a = normalized(a_in);
    const AntiLinearPolar pol = polar_decomposition(a);
    const CMatrix u2 = pol.unitary * pol.unitary.conjugate();
    TLInvariants inv;
    for (const auto &c : detail::clusters(pol.moduli)) {
        const double beta = detail::cluster_value(pol.moduli, c);
        if (beta > 1.0)
            continue;
        const CMatrix basis = pol.vectors.middleCols(c.first, c.second);
        const auto [vals, vecs] = detail::normal_eigen(basis.adjoint() * u2 * basis);
        InvariantPair p;
        p.beta = beta;
        p.z.assign(vals.data(), vals.data() + vals.size());
        std::sort(p.z.begin(), p.z.end(), [](Complex x, Complex y) {
            return detail::arg_key(x) < detail::arg_key(y);
        });
        inv.pairs.push_back(std::move(p));
    }
    return inv;
}

/// Compares two invariant lists: equal β's within tol and Z-multisets matched within tol.
inline bool same_invariants(const TLInvariants &x, const TLInvariants &y, double tol = kClusterGap) {
    if (x.pairs.size() != y.pairs.size())
        return false;
    for (std::size_t k = 0; k < x.pairs.size(); ++k) {
        const auto &px = x.pairs[k];
        const auto &py = y.pairs[k];
        if (std::abs(px.beta - py.beta) > tol || px.z.size() != py.z.size())
            return false;
        std::vector<bool> used(py.z.size(), false);
        for (Complex zx : px.z) {
            bool found = false;
            for (std::size_t j = 0; j < py.z.size() && !found; ++j)
                if (!used[j] && std::abs(zx - py.z[j]) <= tol)
                    used[j] = found = true;
            if (!found)
                return false;
        }
    }
    return true;
}

struct NormalForm {
    std::vector<Complex> coeffs; ///< a₁…a_m
    CMatrix basis;               ///< unitary; column i is ξᵢ
};

/// Canonical anti-diagonal form of A. Pairs (aᵢ, a_{m−i+1}) are ordered by aᵢ
/// and then by arg(a_{m−i+1}); see README for the convention.
inline NormalForm normal_form(const AntiLinearOp &a_in) {
    const AntiLinearOp a = normalized(a_in);
    const auto m = a.dim();
    const AntiLinearPolar pol = polar_decomposition(a);
    const CMatrix &um = pol.unitary;
    const CMatrix u2 = um * um.conjugate();
    auto apply_u = [&](const CVector &v) -> CVector { return um * v.conjugate(); };

    struct Slot {
        CVector first, second;
        Complex a_first, a_second;
    };
    std::vector<Slot> slots;
    std::optional<CVector> middle;

    auto push_pair = [&](const CVector &x, const CVector &y) {
        Slot s{x, y, y.dot(a.apply(x)), x.dot(a.apply(y))};
        s.a_first = std::abs(s.a_first);
        if (std::abs(s.a_second.imag()) < 1e-12)
            s.a_second = Complex(s.a_second.real(), 0.0);
        slots.push_back(std::move(s));
    };

    for (const auto &c : detail::clusters(pol.moduli)) {
        const double beta = detail::cluster_value(pol.moduli, c);
        if (beta > 1.0)
            continue;
        const CMatrix hb = pol.vectors.middleCols(c.first, c.second);
        const auto [vals, vecs] = detail::normal_eigen(hb.adjoint() * u2 * hb);
        const CMatrix eig = hb * vecs;
        if (beta < 1.0) {
            for (Eigen::Index k = 0; k < eig.cols(); ++k)
                push_pair(eig.col(k), apply_u(eig.col(k)));
            continue;
        }
        // β = 1: split H₁ by the spectrum of U²
        std::vector<Eigen::Index> ones, minus;
        for (Eigen::Index k = 0; k < vals.size(); ++k) {
            const Complex w = vals(k);
            if (std::abs(w - 1.0) <= kClusterGap)
                ones.push_back(k);
            else if (std::abs(w + 1.0) <= kClusterGap)
                minus.push_back(k);
            else if (w.imag() > 0)
                push_pair(eig.col(k), apply_u(eig.col(k)));
        }
        // U² = −1 on this block: pair each vector with its image
        if (!minus.empty()) {
            CMatrix rest(m, static_cast<Eigen::Index>(minus.size()));
            for (std::size_t k = 0; k < minus.size(); ++k)
                rest.col(static_cast<Eigen::Index>(k)) = eig.col(minus[k]);
            while (rest.cols() > 0) {
                const CVector x = rest.col(0);
                const CVector y = apply_u(x);
                push_pair(x, y);
                const CMatrix proj = rest * rest.adjoint() - x * x.adjoint() - y * y.adjoint();
                const Eigen::Index left = rest.cols() - 2;
                if (left <= 0)
                    break;
                Eigen::SelfAdjointEigenSolver<CMatrix> es(proj);
                rest = es.eigenvectors().rightCols(left);
            }
        }
        // U² = 1: real form fixed by U, then the Wigner-type basis
        if (!ones.empty()) {
            const auto k = static_cast<Eigen::Index>(ones.size());
            CMatrix q1(m, k);
            for (Eigen::Index j = 0; j < k; ++j)
                q1.col(j) = eig.col(ones[static_cast<std::size_t>(j)]);
            const CMatrix w = q1.adjoint() * um * q1.conjugate();
            Eigen::MatrixXd j(2 * k, 2 * k);
            j << w.real(), w.imag(), w.imag(), -w.real();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (j + j.transpose()));
            const Eigen::MatrixXd fixed = es.eigenvectors().rightCols(k);
            CMatrix g(m, k);
            for (Eigen::Index col = 0; col < k; ++col) {
                const CVector c_vec = fixed.col(col).head(k).cast<Complex>() +
                                      Complex(0, 1) * fixed.col(col).tail(k).cast<Complex>();
                g.col(col) = q1 * c_vec;
                g.col(col).normalize();
            }
            const Eigen::Index l = k / 2;
            const double r2 = std::sqrt(0.5);
            for (Eigen::Index jj = 0; jj < l; ++jj) {
                const CVector x = r2 * (g.col(jj) + Complex(0, 1) * g.col(k - 1 - jj));
                const CVector y = r2 * (g.col(jj) - Complex(0, 1) * g.col(k - 1 - jj));
                push_pair(x, y);
            }
            if (k % 2 == 1)
                middle = g.col(l);
        }
    }

    const Eigen::Index l = m / 2;
    if (static_cast<Eigen::Index>(slots.size()) != l || middle.has_value() != (m % 2 == 1))
        throw NotTemperleyLieb("spectral data of |A| and U² does not pair up");

    std::stable_sort(slots.begin(), slots.end(), [](const Slot &x, const Slot &y) {
        const double ax = x.a_first.real(), ay = y.a_first.real();
        if (std::abs(ax - ay) > kClusterGap)
            return ax < ay;
        return detail::arg_key(x.a_second) < detail::arg_key(y.a_second);
    });

    NormalForm nf;
    nf.coeffs.assign(static_cast<std::size_t>(m), Complex(1.0, 0.0));
    nf.basis = CMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < l; ++i) {
        const Slot &s = slots[static_cast<std::size_t>(i)];
        nf.basis.col(i) = s.first;
        nf.basis.col(m - 1 - i) = s.second;
        nf.coeffs[static_cast<std::size_t>(i)] = s.a_first;
        nf.coeffs[static_cast<std::size_t>(m - 1 - i)] = s.a_second;
    }
    if (middle) {
        nf.basis.col(l) = *middle;
        Complex mid = middle->dot(a.apply(*middle));
        if (std::abs(mid.imag()) < 1e-12)
            mid = Complex(mid.real(), 0.0);
        nf.coeffs[static_cast<std::size_t>(l)] = mid;
    }
    return nf;
}

} // namespace tlsub
