#pragma once

// Integer data of the spin-n/2 ladder: Clebsch–Gordan fusion, multiplicities
// inside U_P ⊗ U_k and the pairing matrix of π_* on K₀. All exact arithmetic.

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tlsub/errors.hpp"

namespace tlsub {

/// Finite formal sum Σ mult(n)·[U_n].
struct RepClass {
    std::map<int, std::int64_t> multiplicities;

    std::int64_t operator[](int n) const {
        auto it = multiplicities.find(n);
        return it == multiplicities.end() ? 0 : it->second;
    }
    void add(int n, std::int64_t c) {
        if (c == 0)
            return;
        auto &v = multiplicities[n];
        v += c;
        if (v == 0)
            multiplicities.erase(n);
    }
    friend bool operator==(const RepClass &, const RepClass &) = default;
};

/// U_l ⊗ U_k ≅ U_{|l−k|} ⊕ U_{|l−k|+2} ⊕ … ⊕ U_{l+k}
inline RepClass fuse(int l, int k) {
    if (l < 0 || k < 0)
        throw Error("fuse: spin indices must be non-negative");
    RepClass r;
    for (int j = std::abs(l - k); j <= l + k; j += 2)
        r.add(j, 1);
    return r;
}

/// Bilinear extension of fuse to formal sums.
inline RepClass fuse(const RepClass &x, const RepClass &y) {
    RepClass r;
    for (const auto &[l, a] : x.multiplicities)
        for (const auto &[k, b] : y.multiplicities)
            for (const auto &[j, c] : fuse(l, k).multiplicities)
                r.add(j, a * b * c);
    return r;
}

inline RepClass single(int n) {
    RepClass r;
    r.add(n, 1);
    return r;
}

/// Multiplicity of U_l in (⊕_{i≤T} U_i) ⊗ U_k, summed term by term.
inline std::int64_t mult_in_fock_rep(int l, int k, int truncation) {
    if (truncation <= l + k)
        throw TruncationTooSmall("need T > l + k, got T = " + std::to_string(truncation));
    std::int64_t total = 0;
    for (int i = 0; i <= truncation; ++i)
        total += fuse(i, k)[l];
    return total;
}

/// Rows ([p_∞], [p_0], …, [p_{T−1}]), columns ([U_0], …, [U_{T−1}]).
struct KPairingMatrix {
    int trunc = 0;
    std::vector<std::vector<std::int64_t>> entries; ///< (T+1) × T

    std::int64_t at_infinity(int n) const { return entries[0][static_cast<std::size_t>(n)]; }
    std::int64_t at_level(int k, int n) const {
        return entries[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(n)];
    }
    /// The T×T block on rows [p_∞], [p_0], …, [p_{T−2}]; the dropped row is zero.
    std::vector<std::vector<std::int64_t>> square() const {
        return {entries.begin(), entries.begin() + trunc};
    }
};

/// Entries from (n+1)[p_∞] + Σ_{k<n} (k−n)[p_k].
inline KPairingMatrix pi_star_closed_form(int trunc) {
    KPairingMatrix km;
    km.trunc = trunc;
    km.entries.assign(static_cast<std::size_t>(trunc) + 1,
                      std::vector<std::int64_t>(static_cast<std::size_t>(trunc), 0));
    for (int n = 0; n < trunc; ++n) {
        km.entries[0][n] = n + 1;
        for (int k = 0; k < n; ++k)
            km.entries[k + 1][n] = k - n;
    }
    return km;
}

/// Entries from c = n+1 and c_k = m_{nk} − (n+1)·m_{0k}.
inline KPairingMatrix pi_star_from_multiplicities(int trunc) {
    KPairingMatrix km;
    km.trunc = trunc;
    km.entries.assign(static_cast<std::size_t>(trunc) + 1,
                      std::vector<std::int64_t>(static_cast<std::size_t>(trunc), 0));
    const int big = 2 * trunc + 1; // exceeds every l + k below
    for (int n = 0; n < trunc; ++n) {
        km.entries[0][n] = n + 1;
        for (int k = 0; k < trunc; ++k)
            km.entries[k + 1][n] =
                mult_in_fock_rep(n, k, big) - (n + 1) * mult_in_fock_rep(0, k, big);
    }
    return km;
}

/// Both constructions, required to agree entry for entry.
inline KPairingMatrix pi_star_matrix(int trunc) {
    if (trunc < 1)
        throw Error("pi_star_matrix: truncation must be >= 1");
    KPairingMatrix closed = pi_star_closed_form(trunc);
    if (closed.entries != pi_star_from_multiplicities(trunc).entries)
        throw Error("pi_star_matrix: closed form and multiplicity construction disagree");
    return closed;
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
inline std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> a) {
    const std::size_t n = a.size();
    if (n == 0)
        return 1;
    std::int64_t sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0)
                ++p;
            if (p == n)
                return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

/// ℤ^free_rank ⊕ ℤ/torsion
struct GroupDescriptor {
    int free_rank = 0;
    std::int64_t torsion = 1;

    std::string to_string() const {
        if (free_rank == 0)
            return torsion == 1 ? "0" : "Z/" + std::to_string(torsion);
        std::string s = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
        return torsion == 1 ? s : s + " + Z/" + std::to_string(torsion);
    }
    friend bool operator==(const GroupDescriptor &, const GroupDescriptor &) = default;
};

/// Cokernel of multiplication by 2 − m on ℤ. This corroborates K₀ of the
/// Cuntz–Pimsner algebra through the Euler characteristic of
/// d_{n+1} = m·d_n − d_{n−1}; it is not a proof of that isomorphism.
inline GroupDescriptor k0_order(int m) {
    if (m < 2)
        throw Error("k0_order: m must be >= 2");
    const std::int64_t factor = 2 - m;
    if (factor == 0)
        return {1, 1};
    return {0, std::abs(factor)};
}

} // namespace tlsub
