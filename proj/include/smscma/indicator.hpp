#pragma once
#include <cstdint>
#include <vector>

namespace smscma {

// Binary R x U occupancy pattern: entry (r,u) is 1 iff user u is spread
// onto ORE r. Regularity (uniform row weight d_f, column weight d_v) is
// enforced; the decoders assume it.
struct IndicatorMatrix {
    std::uint32_t ores = 0;  // rows
    std::uint32_t users = 0; // columns
    std::vector<std::uint8_t> a; // row-major

    std::uint8_t at(std::uint32_t r, std::uint32_t u) const { return a[r * users + u]; }
    std::uint8_t& at(std::uint32_t r, std::uint32_t u) { return a[r * users + u]; }

    std::uint32_t row_weight() const;    // d_f
    std::uint32_t column_weight() const; // d_v

    // Entries in {0,1}, uniform row and column weights. Throws ConfigError.
    void validate() const;

    friend bool operator==(const IndicatorMatrix&, const IndicatorMatrix&) = default;
};

// The standard 6-user / 4-ORE overloading pattern (d_v = 2, d_f = 3).
IndicatorMatrix default_indicator();

// Per-ORE and per-user index sets derived from an indicator matrix.
// ore_users[r] lists the users sharing ORE r (ascending); user_ores[u]
// lists the OREs where user u is non-zero (ascending).
struct FactorGraphSets {
    std::vector<std::vector<std::uint32_t>> ore_users; // Lambda_r
    std::vector<std::vector<std::uint32_t>> user_ores; // Omega_u
    std::uint32_t d_f = 0;
    std::uint32_t d_v = 0;
    // slot[r*U + u] = position of u within ore_users[r], or kNoSlot.
    std::vector<std::uint8_t> slot;
    std::uint32_t users = 0;
    static constexpr std::uint8_t kNoSlot = 0xff;

    std::uint8_t slot_of(std::uint32_t r, std::uint32_t u) const { return slot[r * users + u]; }
};

// Rejects indicator matrices with non-uniform row/column sums.
FactorGraphSets derive_factor_graph(const IndicatorMatrix& f);

} // namespace smscma
