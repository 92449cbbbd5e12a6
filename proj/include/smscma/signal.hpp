#pragma once
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "smscma/codebook.hpp"
#include "smscma/config.hpp"
#include "smscma/indicator.hpp"

namespace smscma {

// Deterministic random source. All mappings from raw 64-bit outputs to
// doubles are explicit, so a (seed, draw order) pair pins every realization
// bit-exactly across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Circularly-symmetric complex Gaussian, zero mean, E|z|^2 = 1.
    cplx cnormal() {
        double u1 = 1.0 - uniform01(); // (0, 1]
        double u2 = uniform01();
        double mag = std::sqrt(-std::log(u1));
        double ph = 2.0 * M_PI * u2;
        return {mag * std::cos(ph), mag * std::sin(ph)};
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// One user message: the activated transmit antenna and the chosen codeword.
// Indices are 0-based here; file formats and logs use 1-based.
struct UserMessage {
    std::uint32_t antenna = 0;
    std::uint32_t codeword = 0;

    friend bool operator==(const UserMessage&, const UserMessage&) = default;

    // Canonical combined index in [0, N_t*M): antenna-major.
    std::uint32_t value(std::uint32_t codewords) const { return antenna * codewords + codeword; }
    static UserMessage from_value(std::uint32_t v, std::uint32_t codewords) {
        return {v / codewords, v % codewords};
    }
};

// Complex fading gains indexed (user, ore, tx antenna, rx antenna),
// one independent unit-variance draw per tuple.
struct ChannelRealization {
    std::uint32_t users = 0, ores = 0, tx = 0, rx = 0;
    std::vector<cplx> h_;

    const cplx& h(std::uint32_t u, std::uint32_t r, std::uint32_t nt, std::uint32_t nr) const {
        return h_[((u * ores + r) * tx + nt) * rx + nr];
    }
    cplx& h(std::uint32_t u, std::uint32_t r, std::uint32_t nt, std::uint32_t nr) {
        return h_[((u * ores + r) * tx + nt) * rx + nr];
    }

    friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

// Superimposed signal at the receiver, indexed (ore, rx antenna), plus the
// noise variance per complex sample that produced it.
struct ReceivedSignal {
    std::uint32_t ores = 0, rx = 0;
    std::vector<cplx> y_;
    double sigma2 = 0.0;

    const cplx& y(std::uint32_t r, std::uint32_t nr) const { return y_[r * rx + nr]; }
    cplx& y(std::uint32_t r, std::uint32_t nr) { return y_[r * rx + nr]; }

    friend bool operator==(const ReceivedSignal&, const ReceivedSignal&) = default;
};

// First log2(N_t) bits (MSB first) select the antenna, the remaining
// log2(M) bits the codeword. Throws ConfigError on wrong length.
UserMessage map_bits(std::span<const std::uint8_t> bits, const SystemConfig& cfg);
// Exact inverse of map_bits.
std::vector<std::uint8_t> demap_bits(const UserMessage& msg, const SystemConfig& cfg);

// Independent CN(0,1) gain per (user, ore, tx, rx) tuple.
ChannelRealization draw_channel(Rng& rng, const SystemConfig& cfg);

// sigma^2 = 10^(-snr_db/10); +infinity means exactly zero noise.
inline double noise_variance(double snr_db) {
    return std::isinf(snr_db) && snr_db > 0 ? 0.0 : std::pow(10.0, -snr_db / 10.0);
}

// y(r,nr) = sum over users sharing ORE r of h(u,r,antenna,nr) * c(u,m,r),
// plus CN(0, sigma^2) noise. With snr_db = +inf the noise term is exactly 0.
ReceivedSignal transmit_and_receive(const std::vector<UserMessage>& messages,
                                    const ChannelRealization& h,
                                    const FactorGraphSets& sets,
                                    const CodebookSet& books,
                                    double snr_db,
                                    Rng& rng);

} // namespace smscma
