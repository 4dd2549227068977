#pragma once

// Seeded random matrices for property checks and the CLI's boundary suite.

#include <cstdint>
#include <random>

#include "tlsub/matrix_core.hpp"

namespace tlsub {

using Rng = std::mt19937_64;

inline CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng &rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    CMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = nd(rng);
            const double im = nd(rng);
            out(i, j) = Complex(re, im);
        }
    return out;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the diagonal phases of R removed.
inline CMatrix random_unitary(Eigen::Index n, Rng &rng) {
    const CMatrix g = random_gaussian(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double a = std::abs(r(k, k));
        if (a > 0)
            q.col(k) *= r(k, k) / a;
    }
    return q;
}

inline CMatrix random_hermitian(Eigen::Index n, Rng &rng) {
    const CMatrix g = random_gaussian(n, n, rng);
    return 0.5 * (g + g.adjoint());
}

inline CMatrix random_positive(Eigen::Index n, Rng &rng) {
    const CMatrix g = random_gaussian(n, n, rng);
    return g * g.adjoint();
}

} // namespace tlsub
