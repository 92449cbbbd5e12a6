#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smscma/decoders.hpp"

namespace smscma {

enum class DecoderId { Ml, Mpa, Sud, Msud, Fcsd };

const char* decoder_name(DecoderId id);
std::optional<DecoderId> decoder_from_name(const std::string& name);

// Deterministic per-trial seed: depends only on (base seed, SNR index,
// trial index), never on worker assignment.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint32_t snr_index, std::uint64_t trial_index);

// Everything observed in one Monte-Carlo trial: the transmitted messages and
// bits, and per requested decoder the estimates, bit errors, and op counts.
struct TrialRecord {
    std::uint64_t trial_index = 0;
    std::vector<UserMessage> tx_messages;
    std::vector<std::vector<std::uint8_t>> tx_bits; // per user
    ChannelRealization channel;
    ReceivedSignal received;
    struct PerDecoder {
        DecoderId id{};
        std::vector<UserMessage> estimates;
        std::uint32_t bit_errors = 0;
        OpCount ops;
    };
    std::vector<PerDecoder> decoders;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};
bool operator==(const TrialRecord::PerDecoder& a, const TrialRecord::PerDecoder& b);

// Draws bits, channel, and noise from trial_seed_value; every requested
// decoder sees the identical (y, h). Throws GuardError if the set includes
// the exhaustive decoder on an over-guard config.
TrialRecord run_trial(const System& sys, double snr_db, std::uint64_t trial_seed_value,
                      const std::vector<DecoderId>& decoders);

// Aggregated statistics for one (SNR, decoder) grid point. All accumulators
// are integers, so totals do not depend on summation order.
struct PointStat {
    double snr_db = 0.0;
    DecoderId decoder{};
    std::uint64_t trials = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t adds_total = 0;
    std::uint64_t muls_total = 0;
    // Tree-vs-MPA message disagreements; present only when the decoder set
    // contains both.
    std::uint64_t nom_misses = 0;
    bool has_nom = false;

    double ber(std::uint32_t bits_per_trial) const;
    double ber_stderr(std::uint32_t bits_per_trial) const;
    double nom() const { return trials ? static_cast<double>(nom_misses) / trials : 0.0; }
};

struct SweepResult {
    std::vector<double> snr_db_list;
    std::vector<DecoderId> decoders;
    std::uint64_t trials_per_point = 0;
    std::uint32_t bits_per_trial = 0; // U * eta_u
    std::vector<PointStat> points;    // snr-major, decoder-minor

    const PointStat& at(std::uint32_t snr_index, DecoderId id) const;
};

// Serial reference sweep: one plain loop over (snr, trial). Kept as the
// behavioural baseline the parallel path is checked against.
SweepResult run_sweep_serial(const System& sys, const std::vector<DecoderId>& decoders,
                             const std::vector<double>& snr_db_list, std::uint64_t trials);

// OpenMP sweep over trials. Results are identical to the serial reference
// for every worker count because trial seeding is per-trial and all
// reductions are integer sums.
SweepResult run_sweep_parallel(const System& sys, const std::vector<DecoderId>& decoders,
                               const std::vector<double>& snr_db_list, std::uint64_t trials,
                               std::uint32_t workers);

// Dispatches on workers (<=1 runs the serial reference).
SweepResult run_sweep(const System& sys, const std::vector<DecoderId>& decoders,
                      const std::vector<double>& snr_db_list, std::uint64_t trials,
                      std::uint32_t workers);

// One tree-search variant of the miss study; a variant without survivor
// counts compares the reference decoder against itself (a zero baseline).
struct NomVariant {
    std::string name;
    std::optional<std::vector<std::uint64_t>> rho;
};

// Per (SNR, variant) sums of per-trial miss counts plus second moments and
// pairwise cross products, enough for means, standard errors, and paired
// gap standard errors under common random numbers.
struct NomResult {
    std::vector<double> snr_db_list;
    std::vector<NomVariant> variants;
    std::uint64_t trials = 0;
    // Indexed [snr][variant].
    std::vector<std::vector<std::uint64_t>> sum;
    std::vector<std::vector<std::uint64_t>> sum_sq;
    // Indexed [snr][v][w].
    std::vector<std::vector<std::vector<std::uint64_t>>> cross;

    double mean(std::uint32_t s, std::uint32_t v) const;
    double stderr_of(std::uint32_t s, std::uint32_t v) const;
    // Standard error of mean(v) - mean(w) using the per-trial differences.
    double gap_stderr(std::uint32_t s, std::uint32_t v, std::uint32_t w) const;
};

// Average count of users whose tree-search estimate differs from the MPA
// estimate, per variant, over common trials.
NomResult run_nom(const System& sys, const std::vector<NomVariant>& variants,
                  const std::vector<double>& snr_db_list, std::uint64_t trials,
                  std::uint32_t workers);

// Count of users whose estimates differ between two assignments.
std::uint32_t message_disagreements(const std::vector<UserMessage>& a,
                                    const std::vector<UserMessage>& b);

} // namespace smscma
