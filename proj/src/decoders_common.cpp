#include <algorithm>
#include <limits>
#include <numeric>

#include "smscma/cost_model.hpp"
#include "smscma/decoders.hpp"
#include "smscma/errors.hpp"

namespace smscma {

System make_system(SystemConfig cfg, IndicatorMatrix f, CodebookSet books,
                   SystemConfig::Strictness strictness) {
    cfg.validate(strictness);
    if (f.users != cfg.users || f.ores != cfg.ores)
        throw ConfigError("indicator matrix dimensions do not match the config");
    if (books.codewords != cfg.codewords)
        throw ConfigError("codebook M does not match the config");
    FactorGraphSets sets = derive_factor_graph(f);
    books.validate(f);
    return System{std::move(cfg), std::move(f), std::move(sets), std::move(books)};
}

System make_default_system(SystemConfig cfg, SystemConfig::Strictness strictness) {
    IndicatorMatrix f = default_indicator();
    if (cfg.users != f.users || cfg.ores != f.ores)
        throw ConfigError("no built-in indicator matrix for U=" + std::to_string(cfg.users) +
                          ", R=" + std::to_string(cfg.ores) + "; provide a codebook file");
    CodebookSet books = make_default_codebooks(f, cfg.codewords);
    return make_system(std::move(cfg), std::move(f), std::move(books), strictness);
}

double ore_distance(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                    std::uint32_t r, const UserMessage* msgs) {
    const auto& lambda = sys.sets.ore_users[r];
    double d = 0.0;
    for (std::uint32_t nr = 0; nr < y.rx; ++nr) {
        cplx acc = y.y(r, nr);
        for (std::size_t p = 0; p < lambda.size(); ++p) {
            const std::uint32_t u = lambda[p];
            acc -= h.h(u, r, msgs[p].antenna, nr) * sys.books.entry(u, r, msgs[p].codeword);
        }
        d += std::norm(acc);
    }
    return d;
}

double assignment_metric(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                         const std::vector<UserMessage>& estimates) {
    double total = 0.0;
    std::vector<UserMessage> local(sys.sets.d_f);
    for (std::uint32_t r = 0; r < y.ores; ++r) {
        const auto& lambda = sys.sets.ore_users[r];
        for (std::size_t p = 0; p < lambda.size(); ++p) local[p] = estimates[lambda[p]];
        total += ore_distance(y, h, sys, r, local.data());
    }
    return total;
}

std::vector<std::uint32_t> ore_energy_order(const ChannelRealization& h, const System& sys,
                                            EnergyConvention convention,
                                            const std::vector<UserMessage>* true_messages,
                                            OpCount* ops) {
    const std::uint32_t ores = sys.cfg.ores;
    std::vector<double> energy(ores, 0.0);
    for (std::uint32_t r = 0; r < ores; ++r) {
        for (std::uint32_t u : sys.sets.ore_users[r]) {
            for (std::uint32_t nr = 0; nr < h.rx; ++nr) {
                if (convention == EnergyConvention::CandidateSummed) {
                    for (std::uint32_t nt = 0; nt < h.tx; ++nt)
                        energy[r] += std::norm(h.h(u, r, nt, nr));
                } else {
                    if (!true_messages) throw ConfigError("genie energy ordering needs the true messages");
                    energy[r] += std::norm(h.h(u, r, (*true_messages)[u].antenna, nr));
                }
            }
        }
    }
    if (ops) *ops += cost::energy_ordering(ores, sys.sets.d_f, h.rx);

    std::vector<std::uint32_t> order(ores);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (energy[a] != energy[b]) return energy[a] > energy[b];
        return a < b;
    });
    return order;
}

std::vector<std::uint32_t> LevelPlan::u_sequence() const {
    std::vector<std::uint32_t> seq;
    seq.reserve(levels.size());
    for (const auto& l : levels) seq.push_back(static_cast<std::uint32_t>(l.new_users.size()));
    return seq;
}

LevelPlan build_tree_levels(const FactorGraphSets& sets, const std::vector<std::uint32_t>& ore_order) {
    LevelPlan plan;
    std::vector<bool> estimated(sets.user_ores.size(), false);
    for (std::uint32_t r : ore_order) {
        LevelPlan::Level level;
        level.ore = r;
        for (std::uint32_t u : sets.ore_users[r])
            if (!estimated[u]) {
                estimated[u] = true;
                level.new_users.push_back(u);
            }
        plan.levels.push_back(std::move(level));
    }
    return plan;
}

std::vector<std::uint64_t> keep_all_rho(std::uint32_t ores) {
    return std::vector<std::uint64_t>(ores > 0 ? ores - 1 : 0,
                                      std::numeric_limits<std::uint64_t>::max());
}

} // namespace smscma
