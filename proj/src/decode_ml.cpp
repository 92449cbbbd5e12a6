#include <limits>
#include <vector>

#include "smscma/cost_model.hpp"
#include "smscma/decoders.hpp"
#include "smscma/errors.hpp"

namespace smscma {

std::uint64_t ml_hypothesis_count(const SystemConfig& cfg) {
    const std::uint64_t base = cfg.message_count();
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < cfg.users; ++i) {
        if (v > cfg.ml_guard / base) return cfg.ml_guard + 1;
        v *= base;
    }
    return v;
}

// Exhaustive search, organized as one distance table per ORE over the local
// joint hypotheses of its sharing users, then a scan over all (N_t*M)^U
// global hypotheses summing R table entries each. Hypotheses are ordered
// with user 0 most significant, so the first minimum found is the lowest
// lexicographic one.
DecodeResult decode_ml(const ReceivedSignal& y, const ChannelRealization& h, const System& sys) {
    const std::uint32_t users = sys.cfg.users;
    const std::uint32_t values = sys.cfg.message_count();
    const std::uint32_t ores = sys.cfg.ores;
    const std::uint32_t d_f = sys.sets.d_f;

    const std::uint64_t total = ml_hypothesis_count(sys.cfg);
    if (total > sys.cfg.ml_guard)
        throw GuardError("joint hypothesis count (N_t*M)^U exceeds the exhaustive-search guard");

    DecodeResult res;
    res.decoder = "ml";

    // Per-ORE tables: local index has the first sharing user most significant.
    std::uint64_t local_size = 1;
    for (std::uint32_t i = 0; i < d_f; ++i) local_size *= values;
    std::vector<std::vector<double>> table(ores, std::vector<double>(local_size, 0.0));
    std::vector<UserMessage> local(d_f);
    for (std::uint32_t r = 0; r < ores; ++r) {
        for (std::uint64_t c = 0; c < local_size; ++c) {
            std::uint64_t rem = c;
            for (std::uint32_t p = d_f; p-- > 0;) {
                local[p] = UserMessage::from_value(static_cast<std::uint32_t>(rem % values),
                                                   sys.cfg.codewords);
                rem /= values;
            }
            table[r][c] = ore_distance(y, h, sys, r, local.data());
        }
        res.ops += local_size * cost::ore_hypothesis(d_f, y.rx);
    }

    // Stride of each user's digit inside each of its OREs' local indices.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> strides(users);
    for (std::uint32_t r = 0; r < ores; ++r) {
        const auto& lambda = sys.sets.ore_users[r];
        std::uint64_t stride = 1;
        for (std::size_t p = lambda.size(); p-- > 0;) {
            strides[lambda[p]].push_back({r, stride});
            stride *= values;
        }
    }

    std::vector<std::uint64_t> local_idx(ores, 0);
    std::vector<std::uint32_t> digits(users, 0);
    std::vector<std::uint32_t> best(users, 0);
    double best_metric = std::numeric_limits<double>::infinity();

    // Depth-first odometer over users; strict < keeps the lowest-index tie.
    auto scan = [&](auto&& self, std::uint32_t u) -> void {
        if (u == users) {
            double d = 0.0;
            for (std::uint32_t r = 0; r < ores; ++r) d += table[r][local_idx[r]];
            if (d < best_metric) {
                best_metric = d;
                best = digits;
            }
            return;
        }
        for (std::uint32_t v = 0; v < values; ++v) {
            digits[u] = v;
            for (const auto& [r, s] : strides[u]) local_idx[r] += v * s;
            self(self, u + 1);
            for (const auto& [r, s] : strides[u]) local_idx[r] -= v * s;
        }
    };
    scan(scan, 0);
    res.ops.charge(total * (ores - 1), 0);

    res.estimates.resize(users);
    for (std::uint32_t u = 0; u < users; ++u)
        res.estimates[u] = UserMessage::from_value(best[u], sys.cfg.codewords);
    return res;
}

} // namespace smscma
