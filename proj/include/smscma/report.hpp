#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "smscma/config.hpp"
#include "smscma/harness.hpp"

namespace smscma {

// 64-bit FNV-1a of a byte string; used to fingerprint codebook inputs.
std::uint64_t fnv1a64(const std::string& bytes);

// Everything needed to reproduce a run bit-exactly, emitted alongside every
// output artifact. The timestamp is informational; all output bytes are
// functions of the remaining fields.
struct RunManifest {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string created_utc; // ISO 8601
    SystemConfig cfg;
    std::string codebook_source; // file path or "builtin:mN"
    std::uint64_t codebook_fnv1a64 = 0;
    std::vector<std::string> decoders;
    std::vector<double> snr_db_list;
    std::uint64_t trials = 0;
    std::uint32_t workers = 1;
    bool noiseless = false;
    std::vector<std::uint64_t> nom_rho_flat; // nom runs: variants joined with size prefixes
    std::vector<std::string> nom_variant_names;

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

std::string iso8601_utc_now();

// CSV with header snr_db,decoder,trials,bit_errors,ber,ber_stderr,nom,
// adds_avg,muls_avg; one row per (snr, decoder); the nom column is empty
// where not applicable. Formatting is deterministic.
std::string sweep_to_csv(const SweepResult& sweep);

// CSV with header snr_db,variant,rho,trials,nom,nom_stderr.
std::string nom_to_csv(const NomResult& nom);

// Deterministic shortest-ish decimal rendering used by all CSV output.
std::string format_double(double v);

std::string read_file(const std::string& path);   // throws IoError
void write_file(const std::string& path, const std::string& bytes); // throws IoError

} // namespace smscma
