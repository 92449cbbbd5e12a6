#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "smscma/cost_model.hpp"
#include "smscma/decoders.hpp"
#include "smscma/errors.hpp"

namespace smscma {

namespace {

struct Node {
    double metric = 0.0;
    std::uint32_t mother = 0; // index into the previous level's kept nodes
    std::uint64_t hyp = 0;    // joint value of the users new at this level
};

} // namespace

DecodeResult decode_fcsd(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                         const FcsdOptions& options) {
    const std::uint32_t users = sys.cfg.users;
    const std::uint32_t values = sys.cfg.message_count();
    const std::uint32_t ores = sys.cfg.ores;
    const std::uint32_t d_f = sys.sets.d_f;

    const std::vector<std::uint64_t>& rho = options.rho ? *options.rho : sys.cfg.rho;
    if (rho.size() + 1 != ores) throw ConfigError("rho must have exactly R-1 entries");

    DecodeResult res;
    res.decoder = "fcsd";

    const auto order =
        ore_energy_order(h, sys, options.energy, options.true_messages, &res.ops);
    const LevelPlan plan = build_tree_levels(sys.sets, order);
    if (options.trace) options.trace->levels.assign(ores, {});

    // Kept nodes of the previous level and the partial assignments they
    // carry (one assignment vector per kept node, indexed by user).
    std::vector<Node> kept{Node{}};
    std::vector<std::vector<UserMessage>> kept_assign{std::vector<UserMessage>(users)};

    std::vector<Node> level_nodes;
    std::vector<std::vector<UserMessage>> level_assign;
    std::vector<UserMessage> local(d_f);

    for (std::uint32_t lvl = 0; lvl < ores; ++lvl) {
        const auto& level = plan.levels[lvl];
        const auto& lambda = sys.sets.ore_users[level.ore];
        const auto& fresh = level.new_users;

        std::uint64_t expansions = 1;
        for (std::size_t i = 0; i < fresh.size(); ++i) expansions *= values;

        level_nodes.clear();
        level_assign.clear();
        level_nodes.reserve(kept.size() * expansions);

        for (std::uint32_t s = 0; s < kept.size(); ++s) {
            const auto& base = kept_assign[s];
            std::vector<UserMessage> cand(fresh.size());
            for (std::uint64_t j = 0; j < expansions; ++j) {
                std::uint64_t rem = j;
                for (std::size_t i = fresh.size(); i-- > 0;) {
                    cand[i] = UserMessage::from_value(static_cast<std::uint32_t>(rem % values),
                                                      sys.cfg.codewords);
                    rem /= values;
                }
                for (std::size_t p = 0; p < lambda.size(); ++p) {
                    const std::uint32_t u = lambda[p];
                    bool is_fresh = false;
                    for (std::size_t i = 0; i < fresh.size(); ++i)
                        if (fresh[i] == u) {
                            local[p] = cand[i];
                            is_fresh = true;
                            break;
                        }
                    if (!is_fresh) local[p] = base[u];
                }
                const double e = ore_distance(y, h, sys, level.ore, local.data());
                Node n;
                n.metric = kept[s].metric + e;
                n.mother = s;
                n.hyp = j;
                if (options.trace)
                    options.trace->levels[lvl].push_back({n.metric, kept[s].metric});
                level_nodes.push_back(n);

                auto assign = base;
                for (std::size_t i = 0; i < fresh.size(); ++i) assign[fresh[i]] = cand[i];
                level_assign.push_back(std::move(assign));
            }
        }
        res.ops += level_nodes.size() * cost::tree_node(d_f, y.rx, ores);

        if (lvl + 1 < ores) {
            std::uint64_t keep = std::max<std::uint64_t>(rho[lvl], 1);
            if (keep > level_nodes.size()) {
                keep = level_nodes.size();
                if (rho[lvl] != std::numeric_limits<std::uint64_t>::max()) res.rho_clamped = true;
            }
            // Smallest metrics survive; ties toward the lower node index.
            std::vector<std::uint32_t> idx(level_nodes.size());
            std::iota(idx.begin(), idx.end(), 0u);
            std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
                if (level_nodes[a].metric != level_nodes[b].metric)
                    return level_nodes[a].metric < level_nodes[b].metric;
                return a < b;
            });
            idx.resize(keep);
            std::sort(idx.begin(), idx.end());

            kept.clear();
            kept_assign.clear();
            for (std::uint32_t i : idx) {
                kept.push_back(level_nodes[i]);
                kept_assign.push_back(level_assign[i]);
            }
        } else {
            kept = level_nodes;
            kept_assign = level_assign;
        }
    }

    std::uint32_t best = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < kept.size(); ++i)
        if (kept[i].metric < best_metric) {
            best_metric = kept[i].metric;
            best = i;
        }
    res.estimates = kept_assign[best];
    return res;
}

} // namespace smscma
