#pragma once

// Dense complex matrix substrate. Everything else in the library stores
// operators as CMatrix; tensor factors are flattened lexicographically with
// the leftmost factor most significant, so kron(X, Y) puts X on the first
// factor.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "tlsub/errors.hpp"

namespace tlsub {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Tolerance used when validating projections handed to range_basis.
inline constexpr double kProjectionTol = 1e-9;
/// Tolerance for adjoint(V)·V = I in a checked Isometry.
inline constexpr double kIsometryTol = 1e-10;

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

inline CMatrix adjoint(const CMatrix &x) { return x.adjoint(); }

/// Kronecker product: kron(X,Y)[(i1,i2),(j1,j2)] = X[i1,j1]·Y[i2,j2],
/// flattened as i1·rows(Y) + i2.
inline CMatrix kron(const CMatrix &x, const CMatrix &y) {
    const Eigen::Index yr = y.rows(), yc = y.cols();
    CMatrix out(x.rows() * yr, x.cols() * yc);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            out.block(i * yr, j * yc, yr, yc) = x(i, j) * y;
    return out;
}

/// Largest singular value, computed from the spectrum of the smaller Gram matrix.
inline double operator_norm(const CMatrix &x) {
    if (x.size() == 0)
        return 0.0;
    const CMatrix gram = x.rows() <= x.cols() ? CMatrix(x * x.adjoint()) : CMatrix(x.adjoint() * x);
    if (gram.rows() == 1)
        return std::sqrt(std::max(0.0, gram(0, 0).real()));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Operator norm of a Hermitian matrix (max |eigenvalue|); cheaper than the Gram route.
inline double hermitian_norm(const CMatrix &h) {
    if (h.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// A matrix with orthonormal columns.
class Isometry {
  public:
    Isometry() : m_(CMatrix::Identity(1, 1)) {}

    /// Validates adjoint(V)·V = I within kIsometryTol.
    explicit Isometry(CMatrix v) : m_(std::move(v)) {
        if (m_.cols() > m_.rows())
            throw Error("Isometry: more columns than rows");
        const double defect =
            m_.cols() == 0 ? 0.0 : operator_norm(m_.adjoint() * m_ - identity(m_.cols()));
        if (defect > kIsometryTol)
            throw Error("Isometry: columns are not orthonormal (defect " +
                        std::to_string(defect) + ")");
    }

    /// Wraps columns already known to be orthonormal (eigenvector output).
    static Isometry trusted(CMatrix v) {
        Isometry out;
        out.m_ = std::move(v);
        return out;
    }

    const CMatrix &matrix() const { return m_; }
    Eigen::Index rows() const { return m_.rows(); }
    Eigen::Index cols() const { return m_.cols(); }

    /// V·V*, the projection onto the range.
    CMatrix projection() const { return m_ * m_.adjoint(); }

  private:
    CMatrix m_;
};

/// max(‖P²−P‖, ‖P*−P‖)
inline double projection_defect(const CMatrix &p) {
    return std::max(operator_norm(p * p - p), operator_norm(p.adjoint() - p));
}

/// Orthonormal basis of the range of an orthogonal projection, taken from the
/// eigenvectors of the Hermitian part with eigenvalue above 1/2.
inline Isometry range_basis(const CMatrix &p, double tol = kProjectionTol) {
    if (p.rows() != p.cols())
        throw NotAProjection("matrix is not square");
    const double herm = operator_norm(p.adjoint() - p);
    const double idem = operator_norm(p * p - p);
    if (herm > tol || idem > tol)
        throw NotAProjection("‖P*-P‖=" + std::to_string(herm) +
                             ", ‖P²-P‖=" + std::to_string(idem));
    const CMatrix h = 0.5 * (p + p.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const RVector &ev = es.eigenvalues();
    // eigenvalues ascending; the range is the trailing block
    Eigen::Index first = 0;
    while (first < ev.size() && ev(first) <= 0.5)
        ++first;
    return Isometry::trusted(es.eigenvectors().rightCols(ev.size() - first));
}

/// Number of eigenvalues above 1/2 of a Hermitian matrix.
inline Eigen::Index projection_rank(const CMatrix &h) {
    if (h.size() == 0)
        return 0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    return (es.eigenvalues().array() > 0.5).count();
}

/// Integer power m^n with a saturating guard.
inline std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > static_cast<std::size_t>(-1) / base)
            return static_cast<std::size_t>(-1);
        r *= base;
    }
    return r;
}

} // namespace tlsub
