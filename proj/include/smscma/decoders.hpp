#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smscma/codebook.hpp"
#include "smscma/config.hpp"
#include "smscma/indicator.hpp"
#include "smscma/opcount.hpp"
#include "smscma/signal.hpp"

namespace smscma {

// Everything a decoder needs to know about the system, assembled once and
// immutable afterwards; safe to share across concurrent trials.
struct System {
    SystemConfig cfg;
    IndicatorMatrix indicator;
    FactorGraphSets sets;
    CodebookSet books;
};

// Validates the config, indicator, and codebooks together.
System make_system(SystemConfig cfg, IndicatorMatrix f, CodebookSet books,
                   SystemConfig::Strictness strictness = SystemConfig::Strictness::Strict);
// Convenience: default indicator + built-in codebooks for cfg.codewords.
System make_default_system(SystemConfig cfg,
                           SystemConfig::Strictness strictness = SystemConfig::Strictness::Strict);

struct DecodeResult {
    std::vector<UserMessage> estimates; // one per user
    OpCount ops;
    std::string decoder;
    std::uint32_t iterations = 0;
    bool rho_clamped = false;
};

// Residual distance at ORE r with every sharing user assigned a message:
// sum over rx antennas of |y - sum_u h*c|^2. msgs holds one message per
// slot of sets.ore_users[r].
double ore_distance(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                    std::uint32_t r, const UserMessage* msgs);

// Total joint metric of a full assignment, summed over all OREs. Used as an
// implementation-independent check on decoder outputs.
double assignment_metric(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                         const std::vector<UserMessage>& estimates);

// ---------------------------------------------------------------------------
// ORE ordering and tree-level planning
// ---------------------------------------------------------------------------

enum class EnergyConvention {
    // Sum |h|^2 over all candidate transmit antennas of each sharing user.
    CandidateSummed,
    // Use the actually transmitted antenna (requires the true messages;
    // sensitivity studies only).
    GenieAided,
};

// OREs sorted by descending received energy, ties by ascending ORE index.
// Charges the conventional ordering cost onto *ops when given.
std::vector<std::uint32_t> ore_energy_order(
    const ChannelRealization& h, const System& sys,
    EnergyConvention convention = EnergyConvention::CandidateSummed,
    const std::vector<UserMessage>* true_messages = nullptr, OpCount* ops = nullptr);

// Visiting plan for the sequential decoders and the tree search: per visited
// ORE, the users estimated there for the first time. Levels with new users
// form the fully expanded stage, levels without them the single expanded
// stage.
struct LevelPlan {
    struct Level {
        std::uint32_t ore = 0;
        std::vector<std::uint32_t> new_users; // ascending
        bool fully_expanded() const { return !new_users.empty(); }
    };
    std::vector<Level> levels;

    // Count of newly estimated users per level.
    std::vector<std::uint32_t> u_sequence() const;
};

LevelPlan build_tree_levels(const FactorGraphSets& sets, const std::vector<std::uint32_t>& ore_order);

// ---------------------------------------------------------------------------
// Decoders. All are deterministic functions of (y, h, sys, options); ties are
// always broken toward the lowest hypothesis / message / node index.
// ---------------------------------------------------------------------------

// (N_t*M)^U, saturated just above cfg.ml_guard on overflow.
std::uint64_t ml_hypothesis_count(const SystemConfig& cfg);

// Exhaustive joint search over all (N_t*M)^U hypotheses. Throws GuardError
// when that count exceeds cfg.ml_guard.
DecodeResult decode_ml(const ReceivedSignal& y, const ChannelRealization& h, const System& sys);

struct MpaRoundStats {
    // Per variable-to-function edge after the round's normalization.
    std::vector<double> vn_sums;
    std::vector<double> vn_min_entry;
};
struct MpaTrace {
    double initial_message = 0.0;
    std::vector<MpaRoundStats> rounds;
};
struct MpaOptions {
    std::optional<std::uint32_t> iterations; // default: cfg.mpa_iters
    MpaTrace* trace = nullptr;
};

// Message passing on the indicator factor graph: per round, every
// function-node edge update marginalizes the cached per-ORE likelihoods over
// the neighbours' messages, then every variable-node edge is normalized to
// sum 1. Likelihoods are handled in the log domain with per-edge max
// subtraction.
DecodeResult decode_mpa(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                        const MpaOptions& options = {});

struct SudTrace {
    struct Visit {
        std::uint32_t ore = 0;
        std::vector<std::uint32_t> new_users;
        std::vector<UserMessage> chosen;            // aligned with new_users
        std::vector<UserMessage> estimates_before;  // full vector; unestimated users hold {0,0}
        std::vector<bool> estimated_before;
    };
    std::vector<Visit> visits;
};
struct SudOptions {
    EnergyConvention energy = EnergyConvention::CandidateSummed;
    const std::vector<UserMessage>* true_messages = nullptr; // genie ordering only
    SudTrace* trace = nullptr;
};

// Successive detection: visit OREs by descending energy; at each ORE,
// exhaustively resolve the users not yet estimated given the users already
// estimated; stop once all users are covered.
DecodeResult decode_sud(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                        const SudOptions& options = {});

enum class MsudSchedule {
    Jacobi,      // interferers held at the previous iteration's estimates
    GaussSeidel, // interferers read from the in-place estimate vector
};
struct MsudOptions {
    std::optional<std::uint32_t> iterations;  // default: cfg.msud_iters
    std::optional<MsudSchedule> schedule;     // default: cfg.msud_gauss_seidel
    SudOptions sud;
};

// Iterative refinement of the successive detector: per iteration, each user
// is re-estimated over its own N_t*M hypotheses against the residual over
// all of its OREs, holding interferers fixed.
DecodeResult decode_msud(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                         const MsudOptions& options = {});

struct FcsdTrace {
    struct Node {
        double metric = 0.0;
        double mother_metric = 0.0;
    };
    std::vector<std::vector<Node>> levels;
};
struct FcsdOptions {
    std::optional<std::vector<std::uint64_t>> rho; // default: cfg.rho
    EnergyConvention energy = EnergyConvention::CandidateSummed;
    const std::vector<UserMessage>* true_messages = nullptr;
    FcsdTrace* trace = nullptr;
};

// Survivor counts meaning "keep everything" at every level.
std::vector<std::uint64_t> keep_all_rho(std::uint32_t ores);

// Breadth-first tree search over the ORE levels: every kept node at level r
// expands into one child per hypothesis of the users first estimated at
// level r+1; the rho_r smallest children survive; the minimum node at the
// last level yields the estimates. rho entries larger than the number of
// available nodes are clamped (flagged in the result), smaller than 1 raised
// to 1.
DecodeResult decode_fcsd(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                         const FcsdOptions& options = {});

} // namespace smscma
