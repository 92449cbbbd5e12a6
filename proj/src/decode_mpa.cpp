#include <cmath>
#include <limits>
#include <vector>

#include "smscma/cost_model.hpp"
#include "smscma/decoders.hpp"

namespace smscma {

namespace {

// Noiseless inputs run the likelihoods at this floor instead of dividing by
// zero; the distances still concentrate all mass on the exact solution.
constexpr double kSigma2Floor = 1e-12;

} // namespace

DecodeResult decode_mpa(const ReceivedSignal& y, const ChannelRealization& h, const System& sys,
                        const MpaOptions& options) {
    const std::uint32_t users = sys.cfg.users;
    const std::uint32_t ores = sys.cfg.ores;
    const std::uint32_t values = sys.cfg.message_count();
    const std::uint32_t d_f = sys.sets.d_f;
    const std::uint32_t d_v = sys.sets.d_v;
    const std::uint32_t iters = options.iterations.value_or(sys.cfg.mpa_iters);
    const double sigma2 = std::max(y.sigma2, kSigma2Floor);

    DecodeResult res;
    res.decoder = "mpa";
    res.iterations = iters;

    std::uint64_t combos = 1;
    for (std::uint32_t i = 0; i < d_f; ++i) combos *= values;

    // Cached log-likelihood per ORE and local joint combination
    // (first sharing user most significant): -D/(2 sigma^2).
    std::vector<std::vector<double>> logl(ores, std::vector<double>(combos));
    {
        std::vector<UserMessage> local(d_f);
        for (std::uint32_t r = 0; r < ores; ++r) {
            for (std::uint64_t c = 0; c < combos; ++c) {
                std::uint64_t rem = c;
                for (std::uint32_t p = d_f; p-- > 0;) {
                    local[p] = UserMessage::from_value(static_cast<std::uint32_t>(rem % values),
                                                       sys.cfg.codewords);
                    rem /= values;
                }
                logl[r][c] = -ore_distance(y, h, sys, r, local.data()) / (2.0 * sigma2);
            }
            // The accounting charges the table once per incident edge.
            res.ops += d_f * combos * cost::mpa_table_entry(d_f, y.rx);
        }
    }

    // Messages per (ore, slot) edge and per message value.
    const auto edge = [&](std::uint32_t r, std::uint32_t p) { return r * d_f + p; };
    std::vector<std::vector<double>> vn2fn(static_cast<std::size_t>(ores) * d_f,
                                           std::vector<double>(values, 1.0 / values));
    std::vector<std::vector<double>> fn2vn(static_cast<std::size_t>(ores) * d_f,
                                           std::vector<double>(values, 0.0));
    if (options.trace) options.trace->initial_message = 1.0 / values;

    std::vector<double> log_msg(static_cast<std::size_t>(ores) * d_f * values);
    std::vector<double> term(combos);
    std::vector<std::uint32_t> digit(d_f);

    for (std::uint32_t k = 0; k < iters; ++k) {
        // Function-node round.
        for (std::size_t e = 0; e < vn2fn.size(); ++e)
            for (std::uint32_t v = 0; v < values; ++v)
                log_msg[e * values + v] = std::log(vn2fn[e][v]);

        for (std::uint32_t r = 0; r < ores; ++r) {
            for (std::uint32_t p = 0; p < d_f; ++p) {
                double peak = -std::numeric_limits<double>::infinity();
                for (std::uint64_t c = 0; c < combos; ++c) {
                    std::uint64_t rem = c;
                    for (std::uint32_t q = d_f; q-- > 0;) {
                        digit[q] = static_cast<std::uint32_t>(rem % values);
                        rem /= values;
                    }
                    double t = logl[r][c];
                    for (std::uint32_t q = 0; q < d_f; ++q)
                        if (q != p) t += log_msg[edge(r, q) * static_cast<std::size_t>(values) + digit[q]];
                    term[c] = t;
                    if (t > peak) peak = t;
                }
                auto& out = fn2vn[edge(r, p)];
                std::fill(out.begin(), out.end(), 0.0);
                std::uint64_t stride = 1; // slot 0 is most significant
                for (std::uint32_t q = d_f - 1; q > p; --q) stride *= values;
                for (std::uint64_t c = 0; c < combos; ++c) {
                    const auto own = static_cast<std::uint32_t>((c / stride) % values);
                    out[own] += std::exp(term[c] - peak);
                }
                res.ops += cost::mpa_edge_iteration(combos, d_f);
            }
        }

        // Variable-node round with per-edge normalization.
        MpaRoundStats stats;
        for (std::uint32_t u = 0; u < users; ++u) {
            const auto& omega = sys.sets.user_ores[u];
            for (std::uint32_t r : omega) {
                const std::uint32_t p = sys.sets.slot_of(r, u);
                auto& out = vn2fn[edge(r, p)];
                std::fill(out.begin(), out.end(), 1.0);
                for (std::uint32_t r2 : omega) {
                    if (r2 == r) continue;
                    const auto& in = fn2vn[edge(r2, sys.sets.slot_of(r2, u))];
                    for (std::uint32_t v = 0; v < values; ++v) out[v] *= in[v];
                }
                double sum = 0.0;
                for (double v : out) sum += v;
                if (sum > 0.0)
                    for (double& v : out) v /= sum;
                else
                    std::fill(out.begin(), out.end(), 1.0 / values);
                res.ops += cost::mpa_value_product(values, d_v);
                if (options.trace) {
                    double s = 0.0, mn = std::numeric_limits<double>::infinity();
                    for (double v : out) {
                        s += v;
                        mn = std::min(mn, v);
                    }
                    stats.vn_sums.push_back(s);
                    stats.vn_min_entry.push_back(mn);
                }
            }
        }
        if (options.trace) options.trace->rounds.push_back(std::move(stats));
    }

    // Decision: product of the final function-node messages over each user's
    // OREs, maximized per user, ties toward the lowest message value.
    res.estimates.resize(users);
    for (std::uint32_t u = 0; u < users; ++u) {
        const auto& omega = sys.sets.user_ores[u];
        std::uint32_t best_v = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::uint32_t v = 0; v < values; ++v) {
            double score = 0.0;
            for (std::uint32_t r : omega)
                score += std::log(fn2vn[edge(r, sys.sets.slot_of(r, u))][v]);
            if (score > best_score) {
                best_score = score;
                best_v = v;
            }
        }
        res.estimates[u] = UserMessage::from_value(best_v, sys.cfg.codewords);
        res.ops += cost::mpa_value_product(values, d_v);
    }
    return res;
}

} // namespace smscma
