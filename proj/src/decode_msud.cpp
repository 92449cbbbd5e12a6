#include <limits>
#include <vector>

#include "smscma/cost_model.hpp"
#include "smscma/decoders.hpp"

namespace smscma {

// Per-iteration refit of one user against the residual over all of its OREs,
// with interferers pinned to ref. Evaluates the full per-ORE residual for
// each of the user's N_t*M candidate values.
static UserMessage refit_user(const ReceivedSignal& y, const ChannelRealization& h,
                              const System& sys, std::uint32_t u,
                              const std::vector<UserMessage>& ref) {
    const std::uint32_t values = sys.cfg.message_count();
    std::vector<UserMessage> local(sys.sets.d_f);

    double best_metric = std::numeric_limits<double>::infinity();
    std::uint32_t best_v = 0;
    for (std::uint32_t v = 0; v < values; ++v) {
        const UserMessage cand = UserMessage::from_value(v, sys.cfg.codewords);
        double d = 0.0;
        for (std::uint32_t r : sys.sets.user_ores[u]) {
            const auto& lambda = sys.sets.ore_users[r];
            for (std::size_t p = 0; p < lambda.size(); ++p)
                local[p] = lambda[p] == u ? cand : ref[lambda[p]];
            d += ore_distance(y, h, sys, r, local.data());
        }
        if (d < best_metric) {
            best_metric = d;
            best_v = v;
        }
    }
    return UserMessage::from_value(best_v, sys.cfg.codewords);
}

DecodeResult decode_msud(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                         const MsudOptions& options) {
    const std::uint32_t users = sys.cfg.users;
    const std::uint32_t values = sys.cfg.message_count();
    const std::uint32_t iters = options.iterations.value_or(sys.cfg.msud_iters);
    const MsudSchedule schedule = options.schedule.value_or(
        sys.cfg.msud_gauss_seidel ? MsudSchedule::GaussSeidel : MsudSchedule::Jacobi);

    DecodeResult res = decode_sud(y, h, sys, options.sud);
    res.decoder = "msud";
    res.iterations = iters;

    for (std::uint32_t k = 0; k < iters; ++k) {
        if (schedule == MsudSchedule::Jacobi) {
            const std::vector<UserMessage> ref = res.estimates;
            for (std::uint32_t u = 0; u < users; ++u)
                res.estimates[u] = refit_user(y, h, sys, u, ref);
        } else {
            for (std::uint32_t u = 0; u < users; ++u)
                res.estimates[u] = refit_user(y, h, sys, u, res.estimates);
        }
        // Each refit hypothesis is charged at the single-ORE combination unit.
        res.ops += std::uint64_t{users} * values * cost::ore_hypothesis(sys.sets.d_f, y.rx);
    }
    return res;
}

} // namespace smscma
