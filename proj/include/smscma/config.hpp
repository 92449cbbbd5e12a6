#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace smscma {

constexpr const char* kToolName = "smscma";
constexpr const char* kToolVersion = "0.1.0";

inline bool is_pow2(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }
inline std::uint32_t log2_exact(std::uint64_t x) {
    std::uint32_t n = 0;
    while (x > 1) {
        x >>= 1;
        ++n;
    }
    return n;
}

// Static description of one simulated multi-user link.
//
// users      U   active uplink users
// ores       R   shared orthogonal resource elements
// codewords  M   codewords per user codebook
// tx/rx antennas per user / at the receiver
// rho        per-level survivor counts for the breadth-first tree decoder
//            (exactly R-1 entries)
struct SystemConfig {
    std::uint32_t users = 0;
    std::uint32_t ores = 0;
    std::uint32_t codewords = 0;
    std::uint32_t tx_antennas = 0;
    std::uint32_t rx_antennas = 0;
    std::uint32_t mpa_iters = 1;
    std::uint32_t msud_iters = 1;
    std::vector<std::uint64_t> rho;
    std::vector<double> snr_db_list;
    std::uint64_t seed = 1;
    std::uint64_t ml_guard = std::uint64_t{1} << 30;
    // Iterative refinement reads interferers from the previous iteration by
    // default; this switches it to in-place updates.
    bool msud_gauss_seidel = false;

    // Bits carried by one user message.
    std::uint32_t antenna_bits() const { return log2_exact(tx_antennas); }
    std::uint32_t codeword_bits() const { return log2_exact(codewords); }
    std::uint32_t bits_per_user() const { return antenna_bits() + codeword_bits(); }
    // Distinct (antenna, codeword) values one user can send.
    std::uint32_t message_count() const { return tx_antennas * codewords; }

    // Degenerate configs (U <= R, single user) are permitted for tests only;
    // the CLI always validates with Strict.
    enum class Strictness { Strict, AllowDegenerate };
    void validate(Strictness s = Strictness::Strict) const;
};

// Bits per channel use carried by one user: log2(N_t) + log2(M).
std::uint32_t spectral_efficiency(const SystemConfig& cfg);

// Parses a JSON config file mirroring the SystemConfig fields
// (U, R, M, N_t, N_r, K_mpa, K_msud, rho, snr_db_list, seed, and the
// optional codebook path and ml_guard). Throws ConfigError with a
// line/field diagnostic, IoError if unreadable.
struct LoadedConfig {
    SystemConfig cfg;
    std::string codebook_path; // empty = use built-in default codebooks
};
LoadedConfig load_config_file(const std::string& path);
LoadedConfig parse_config_json(const std::string& text);
std::string config_to_json(const SystemConfig& cfg, const std::string& codebook_path);

} // namespace smscma
