#pragma once
#include <cstdint>

namespace smscma {

// Tally of real (scalar) additions and multiplications consumed by a decode.
// Counts are additive: merging two counted code paths is plain addition.
struct OpCount {
    std::uint64_t real_adds = 0;
    std::uint64_t real_muls = 0;

    OpCount& operator+=(const OpCount& o) {
        real_adds += o.real_adds;
        real_muls += o.real_muls;
        return *this;
    }
    friend OpCount operator+(OpCount a, const OpCount& b) { return a += b; }
    friend OpCount operator*(std::uint64_t n, OpCount u) {
        u.real_adds *= n;
        u.real_muls *= n;
        return u;
    }
    friend bool operator==(const OpCount&, const OpCount&) = default;

    void charge(std::uint64_t adds, std::uint64_t muls) {
        real_adds += adds;
        real_muls += muls;
    }
};

} // namespace smscma
