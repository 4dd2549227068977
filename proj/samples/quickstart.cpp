// Builds the q = 1/2 system, prints its parameters, the first fiber
// dimensions and the generator residuals.

#include <cmath>
#include <cstdio>
#include <vector>

#include "tlsub/fock_toeplitz.hpp"
#include "tlsub/ktheory_fusion.hpp"

int main() {
    using namespace tlsub;
    const double q = 0.5;
    const std::vector<Complex> a = {1 / std::sqrt(q), -std::sqrt(q)};
    const TLSystem sys = params_from_polynomial(a);
    std::printf("m = %d  lambda = %.6f  q = %.6f  tau = %d\n", sys.m, sys.lambda, sys.q, *sys.tau);

    const FockOperators ops = build_fock(sys, 5);
    std::printf("dims:");
    for (auto d : ops.tower.dims)
        std::printf(" %lld", static_cast<long long>(d));
    std::printf("\n");

    for (const auto &[name, value] : verify_relations(ops, 1e-10).entries())
        std::printf("  %-12s %.3e\n", name.c_str(), value);
    for (int n = 0; n < ops.levels(); ++n)
        std::printf("  ||[S*, R]|| on H_%d = %.3e\n", n, commutator_norms(ops, n).c2);

    std::printf("K0 for m = %d: %s\n", sys.m, k0_order(sys.m).to_string().c_str());
    return 0;
}
