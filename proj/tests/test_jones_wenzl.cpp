#include <gtest/gtest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "tlsub/jones_wenzl.hpp"

using namespace tlsub;

namespace {

std::vector<Complex> cvec(std::initializer_list<Complex> v) { return {v}; }

TLSystem su2() { return params_from_polynomial(cvec({1, -1})); }
TLSystem ones3() { return params_from_polynomial(cvec({1, 1, 1})); }
TLSystem quantum(double q) {
    return params_from_polynomial(cvec({1 / std::sqrt(q), -std::sqrt(q)}));
}

/// Projection onto ⋂ ker(1^{⊗i}⊗e⊗1^{⊗(n−i−2)}), from a dense SVD of the stacked e's.
CMatrix joint_kernel_projection(const TLSystem &sys, int n) {
    const auto d = static_cast<Eigen::Index>(ipow(sys.m, n));
    if (n < 2)
        return identity(d);
    CMatrix stacked(d * (n - 1), d);
    for (int i = 0; i + 2 <= n; ++i)
        stacked.middleRows(i * d, d) = embedded_e(sys, n, i);
    Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
    const Eigen::Index rank = (svd.singularValues().array() > 1e-8).count();
    const CMatrix ker = svd.matrixV().rightCols(d - rank);
    return ker * ker.adjoint();
}

} // namespace

TEST(QInteger, Examples) {
    for (double q : {0.2, 0.5, 1.0}) {
        EXPECT_EQ(q_integer(0, q), 0.0);
        EXPECT_NEAR(q_integer(1, q), 1.0, 1e-15);
        EXPECT_NEAR(q_integer(2, q), q + 1 / q, 1e-14);
    }
    EXPECT_NEAR(q_integer(3, 0.5), 5.25, 1e-14);
    EXPECT_EQ(q_integer(7, 1.0), 7.0);
}

TEST(QInteger, MatchesQuotientFormula) {
    for (double q : {0.1, 0.3819660112501051, 0.9})
        for (int k = 0; k < 15; ++k) {
            const double ref = (std::pow(q, k) - std::pow(q, -k)) / (q - 1 / q);
            EXPECT_NEAR(q_integer(k, q), ref, 1e-12 * std::max(1.0, std::abs(ref)));
        }
    // continuity at q = 1
    EXPECT_NEAR(q_integer(6, 1.0 - 1e-13), 6.0, 1e-9);
}

TEST(Phi, Examples) {
    EXPECT_EQ(phi(0, 0.5), 0.0);
    for (int n = 0; n < 10; ++n)
        EXPECT_NEAR(phi(n, 1.0), double(n) / (n + 1), 1e-15);
    EXPECT_LT(std::abs(phi(20, 0.5) - 0.5), std::pow(0.5, 20) * 10);
}

TEST(Dims, Examples) {
    const auto d2 = dims_by_recurrence(2, 8);
    for (int n = 0; n <= 8; ++n)
        EXPECT_EQ(d2[n], n + 1);
    EXPECT_EQ(dims_by_recurrence(3, 8),
              (std::vector<std::int64_t>{1, 3, 8, 21, 55, 144, 377, 987, 2584}));
    EXPECT_EQ(dims_by_recurrence(4, 2)[2], 15);
}

TEST(Dims, MatchRoundedQuantumIntegers) {
    for (int m = 2; m <= 6; ++m) {
        const double t = q_from_sum(m);
        const auto d = dims_by_recurrence(m, 10);
        for (int n = 0; n <= 10; ++n) {
            const double qi = q_integer(n + 1, t);
            EXPECT_NEAR(double(d[n]), qi, 1e-6 * std::max(1.0, qi));
        }
    }
}

TEST(Tower, LowLevels) {
    const JWTower tw = build_tower(su2(), 3);
    EXPECT_EQ(tw.f[0], identity(1));
    EXPECT_EQ(tw.f[1], identity(2));
    EXPECT_LT(operator_norm(tw.f[2] - (identity(4) - tw.system.e)), 1e-12);
    EXPECT_EQ(subspace_basis(tw, 0).matrix(), identity(1));
    const CMatrix &v1 = subspace_basis(tw, 1).matrix();
    EXPECT_LT(operator_norm(v1.adjoint() * v1 - identity(2)), 1e-12);
    EXPECT_LT(operator_norm(v1 * v1.adjoint() - identity(2)), 1e-12);
    const Isometry &v2 = subspace_basis(tw, 2);
    EXPECT_EQ(v2.rows(), 4);
    EXPECT_EQ(v2.cols(), 3);
    EXPECT_LT(operator_norm(v2.projection() - (identity(4) - tw.system.e)), 1e-12);
}

TEST(Tower, SymmetricProjectionForSU2) {
    const JWTower tw = build_tower(su2(), 4);
    for (int n = 2; n <= 4; ++n) {
        const CMatrix sym = oracle::symmetrizer(2, n);
        EXPECT_LT(operator_norm(tw.f[n] - sym), 1e-10) << "n = " << n;
        EXPECT_EQ(tw.bases[n].cols(), n + 1);
    }
}

TEST(Tower, RankEightForAllOnes) {
    const JWTower tw = build_tower(ones3(), 2);
    EXPECT_EQ(tw.bases[2].cols(), 8);
    EXPECT_EQ(tw.dims[2], 8);
}

TEST(Tower, MatchesJointKernelOracle) {
    std::vector<TLSystem> systems = {su2(), ones3(), quantum(0.3),
                                     params_from_polynomial(cvec({2, Complex(0, 1), 0.5}))};
    std::mt19937_64 rng(31);
    systems.push_back(params_from_polynomial(oracle::random_admissible(3, rng)));
    for (const auto &sys : systems) {
        const int top = sys.m == 2 ? 5 : 4;
        const JWTower tw = build_tower(sys, top);
        for (int n = 0; n <= top; ++n)
            EXPECT_LT(operator_norm(tw.f[n] - joint_kernel_projection(sys, n)), 1e-9)
                << "m = " << sys.m << ", n = " << n;
    }
}

TEST(Tower, Invariants) {
    std::mt19937_64 rng(32);
    std::vector<TLSystem> systems = {su2(), ones3(), quantum(0.5)};
    for (int k = 0; k < 4; ++k)
        systems.push_back(params_from_polynomial(oracle::random_admissible(2 + k % 3, rng)));
    for (const auto &sys : systems) {
        const int top = sys.m == 2 ? 7 : (sys.m == 3 ? 5 : 4);
        const JWTower tw = build_tower(sys, top);
        for (int n = 0; n <= top; ++n) {
            const CMatrix &f = tw.f[n];
            EXPECT_LT(operator_norm(f * f - f), 1e-9);
            EXPECT_LT(operator_norm(f - f.adjoint()), 1e-9);
            EXPECT_NEAR(f.trace().real(), double(tw.dims[n]), 1e-6);
            EXPECT_EQ(tw.bases[n].cols(), tw.dims[n]);
            EXPECT_LT(tw.drift[n], kDriftTol);
            EXPECT_LT(operator_norm(tw.bases[n].projection() - f), 1e-9);
            for (int i = 0; i + 2 <= n; ++i) {
                EXPECT_LT(jw_defining_defect(tw, n, i), 1e-8);
                // dense cross-check of the sparse evaluation
                if (n <= 4) {
                    EXPECT_NEAR(jw_defining_defect(tw, n, i),
                                operator_norm(f * embedded_e(sys, n, i)), 1e-12);
                }
            }
        }
        for (int n = 1; n < top; ++n) {
            const auto m = static_cast<Eigen::Index>(sys.m);
            const CMatrix left = kron(identity(m), tw.f[n]);
            const CMatrix right = kron(tw.f[n], identity(m));
            const CMatrix &g = tw.f[n + 1];
            EXPECT_LT(operator_norm(left * g - g), 1e-8);
            EXPECT_LT(operator_norm(right * g - g), 1e-8);
            // the Wenzl correction is a projection equivalent to e⊗f_{n−1}
            const CMatrix corr = wenzl_correction(sys, tw.f[n], n);
            EXPECT_LT(operator_norm(corr * corr - corr), 1e-9);
            EXPECT_EQ(projection_rank(corr), tw.dims[n - 1]);
        }
    }
}

TEST(Tower, ErrorsAndBudget) {
    EXPECT_THROW(build_tower(su2(), 0), Error);
    EXPECT_THROW(build_tower(su2(), 14), MemoryBudgetExceeded);
    EXPECT_THROW(build_tower(ones3(), 9), MemoryBudgetExceeded);
    EXPECT_THROW(build_tower(su2(), 4, 100), MemoryBudgetExceeded);
    EXPECT_NO_THROW(build_tower(su2(), 3, 64));
    const JWTower tw = build_tower(su2(), 3);
    EXPECT_THROW(subspace_basis(tw, 4), Error);
    EXPECT_THROW(wenzl_defect(tw, 3), Error);
    EXPECT_THROW(jw_defining_defect(tw, 3, 2), Error);
}

TEST(WenzlDefect, Examples) {
    const JWTower tw = build_tower(ones3(), 6);
    EXPECT_LT(wenzl_defect(tw, 0), 1e-14);
    const double q = tw.system.q;
    double sup = 0;
    for (int n = 1; n <= 5; ++n)
        sup = std::max(sup, wenzl_defect(tw, n) / std::pow(q, n));
    EXPECT_LE(sup, 3.0);
}

TEST(WenzlDefect, DenseCrossCheck) {
    const JWTower tw = build_tower(quantum(0.4), 5);
    for (int n = 0; n < 5; ++n) {
        const CMatrix ref = tw.f[n + 1] - kron(identity(2), tw.f[n]) * kron(tw.f[n], identity(2));
        EXPECT_NEAR(wenzl_defect(tw, n), oracle::svd_norm(ref), 1e-12);
    }
}

TEST(WenzlDefect, SlowDecayAtQEqualsOne) {
    const JWTower tw = build_tower(su2(), 10);
    const double base = wenzl_defect(tw, 1) * std::sqrt(1.0);
    for (int n = 2; n < 10; ++n) {
        EXPECT_LT(wenzl_defect(tw, n), wenzl_defect(tw, n - 1) + 1e-12);
        EXPECT_LE(wenzl_defect(tw, n) * std::sqrt(double(n)), 2.0 * base);
    }
}
