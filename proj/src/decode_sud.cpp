#include <limits>
#include <vector>

#include "smscma/cost_model.hpp"
#include "smscma/decoders.hpp"

namespace smscma {

DecodeResult decode_sud(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                        const SudOptions& options) {
    const std::uint32_t users = sys.cfg.users;
    const std::uint32_t values = sys.cfg.message_count();
    const std::uint32_t d_f = sys.sets.d_f;

    DecodeResult res;
    res.decoder = "sud";
    res.estimates.assign(users, UserMessage{});

    const auto order =
        ore_energy_order(h, sys, options.energy, options.true_messages, &res.ops);
    const LevelPlan plan = build_tree_levels(sys.sets, order);

    std::vector<bool> estimated(users, false);
    std::uint32_t done = 0;

    std::vector<UserMessage> local(d_f);
    for (const auto& level : plan.levels) {
        if (done == users) break;
        const auto& lambda = sys.sets.ore_users[level.ore];
        const auto& fresh = level.new_users;
        if (options.trace) {
            SudTrace::Visit v;
            v.ore = level.ore;
            v.new_users = fresh;
            v.estimates_before = res.estimates;
            v.estimated_before.assign(estimated.begin(), estimated.end());
            options.trace->visits.push_back(std::move(v));
        }
        if (fresh.empty()) continue;

        // Slots of the users resolved here, in ascending user order.
        std::vector<std::uint32_t> fresh_slot;
        for (std::size_t p = 0; p < lambda.size(); ++p) {
            if (estimated[lambda[p]])
                local[p] = res.estimates[lambda[p]];
            else
                fresh_slot.push_back(static_cast<std::uint32_t>(p));
        }

        std::uint64_t hypotheses = 1;
        for (std::size_t i = 0; i < fresh.size(); ++i) hypotheses *= values;

        double best_metric = std::numeric_limits<double>::infinity();
        std::vector<UserMessage> best(fresh.size());
        std::vector<UserMessage> cand(fresh.size());
        for (std::uint64_t j = 0; j < hypotheses; ++j) {
            std::uint64_t rem = j;
            for (std::size_t i = fresh.size(); i-- > 0;) {
                cand[i] = UserMessage::from_value(static_cast<std::uint32_t>(rem % values),
                                                  sys.cfg.codewords);
                rem /= values;
            }
            for (std::size_t i = 0; i < fresh_slot.size(); ++i) local[fresh_slot[i]] = cand[i];
            const double d = ore_distance(y, h, sys, level.ore, local.data());
            if (d < best_metric) {
                best_metric = d;
                best = cand;
            }
        }
        res.ops += hypotheses * cost::ore_hypothesis(d_f, y.rx);

        for (std::size_t i = 0; i < fresh.size(); ++i) {
            res.estimates[fresh[i]] = best[i];
            estimated[fresh[i]] = true;
            ++done;
        }
        if (options.trace) options.trace->visits.back().chosen = best;
    }
    return res;
}

} // namespace smscma
