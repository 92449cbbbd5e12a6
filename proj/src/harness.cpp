#include "smscma/harness.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "smscma/errors.hpp"

namespace smscma {

const char* decoder_name(DecoderId id) {
    switch (id) {
        case DecoderId::Ml: return "ml";
        case DecoderId::Mpa: return "mpa";
        case DecoderId::Sud: return "sud";
        case DecoderId::Msud: return "msud";
        case DecoderId::Fcsd: return "fcsd";
    }
    return "?";
}

std::optional<DecoderId> decoder_from_name(const std::string& name) {
    if (name == "ml") return DecoderId::Ml;
    if (name == "mpa") return DecoderId::Mpa;
    if (name == "sud") return DecoderId::Sud;
    if (name == "msud") return DecoderId::Msud;
    if (name == "fcsd") return DecoderId::Fcsd;
    return std::nullopt;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint32_t snr_index, std::uint64_t trial_index) {
    return splitmix64(splitmix64(splitmix64(base_seed) ^ snr_index) ^ trial_index);
}

bool operator==(const TrialRecord::PerDecoder& a, const TrialRecord::PerDecoder& b) {
    return a.id == b.id && a.estimates == b.estimates && a.bit_errors == b.bit_errors &&
           a.ops == b.ops;
}

namespace {

std::uint32_t bit_errors_between(const std::vector<std::uint8_t>& a,
                                 const std::vector<std::uint8_t>& b) {
    std::uint32_t e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) e += a[i] != b[i];
    return e;
}

} // namespace

TrialRecord run_trial(const System& sys, double snr_db, std::uint64_t trial_seed_value,
                      const std::vector<DecoderId>& decoders) {
    const std::uint32_t users = sys.cfg.users;
    const std::uint32_t eta = sys.cfg.bits_per_user();

    Rng rng(trial_seed_value);
    TrialRecord rec;
    rec.tx_bits.resize(users);
    rec.tx_messages.resize(users);
    for (std::uint32_t u = 0; u < users; ++u) {
        rec.tx_bits[u].resize(eta);
        for (auto& b : rec.tx_bits[u]) b = static_cast<std::uint8_t>(rng.raw() & 1u);
        rec.tx_messages[u] = map_bits(rec.tx_bits[u], sys.cfg);
    }

    rec.channel = draw_channel(rng, sys.cfg);
    rec.received = transmit_and_receive(rec.tx_messages, rec.channel, sys.sets, sys.books, snr_db, rng);
    const ChannelRealization& h = rec.channel;
    const ReceivedSignal& y = rec.received;

    for (DecoderId id : decoders) {
        TrialRecord::PerDecoder out;
        out.id = id;
        DecodeResult res;
        switch (id) {
            case DecoderId::Ml: res = decode_ml(y, h, sys); break;
            case DecoderId::Mpa: res = decode_mpa(y, h, sys); break;
            case DecoderId::Sud: res = decode_sud(y, h, sys); break;
            case DecoderId::Msud: res = decode_msud(y, h, sys); break;
            case DecoderId::Fcsd: res = decode_fcsd(y, h, sys); break;
        }
        out.estimates = std::move(res.estimates);
        out.ops = res.ops;
        for (std::uint32_t u = 0; u < users; ++u)
            out.bit_errors += bit_errors_between(rec.tx_bits[u], demap_bits(out.estimates[u], sys.cfg));
        rec.decoders.push_back(std::move(out));
    }
    return rec;
}

double PointStat::ber(std::uint32_t bits_per_trial) const {
    const double n = static_cast<double>(trials) * bits_per_trial;
    return n > 0 ? static_cast<double>(bit_errors) / n : 0.0;
}

double PointStat::ber_stderr(std::uint32_t bits_per_trial) const {
    const double n = static_cast<double>(trials) * bits_per_trial;
    if (n <= 0) return 0.0;
    const double p = static_cast<double>(bit_errors) / n;
    return std::sqrt(p * (1.0 - p) / n);
}

const PointStat& SweepResult::at(std::uint32_t snr_index, DecoderId id) const {
    for (const auto& p : points)
        if (p.snr_db == snr_db_list[snr_index] && p.decoder == id) return p;
    throw ConfigError("no such sweep point");
}

namespace {

SweepResult make_sweep_shell(const System& sys, const std::vector<DecoderId>& decoders,
                             const std::vector<double>& snr_db_list, std::uint64_t trials) {
    SweepResult sweep;
    sweep.snr_db_list = snr_db_list;
    sweep.decoders = decoders;
    sweep.trials_per_point = trials;
    sweep.bits_per_trial = sys.cfg.users * sys.cfg.bits_per_user();
    for (double snr : snr_db_list)
        for (DecoderId id : decoders) {
            PointStat p;
            p.snr_db = snr;
            p.decoder = id;
            p.trials = trials;
            sweep.points.push_back(p);
        }
    return sweep;
}

void accumulate_trial(SweepResult& sweep, const std::vector<DecoderId>& decoders,
                      std::uint32_t snr_index, const TrialRecord& rec) {
    const std::size_t base = static_cast<std::size_t>(snr_index) * decoders.size();
    // Tree-vs-MPA misses need both present on the same trial.
    const TrialRecord::PerDecoder* mpa = nullptr;
    for (const auto& d : rec.decoders)
        if (d.id == DecoderId::Mpa) mpa = &d;
    for (std::size_t i = 0; i < decoders.size(); ++i) {
        PointStat& p = sweep.points[base + i];
        const auto& d = rec.decoders[i];
        p.bit_errors += d.bit_errors;
        p.adds_total += d.ops.real_adds;
        p.muls_total += d.ops.real_muls;
        if (d.id == DecoderId::Fcsd && mpa) {
            p.has_nom = true;
            p.nom_misses += message_disagreements(d.estimates, mpa->estimates);
        }
    }
}

void guard_check(const System& sys, const std::vector<DecoderId>& decoders) {
    for (DecoderId id : decoders)
        if (id == DecoderId::Ml && ml_hypothesis_count(sys.cfg) > sys.cfg.ml_guard)
            throw GuardError("joint hypothesis count (N_t*M)^U exceeds the exhaustive-search guard");
}

} // namespace

SweepResult run_sweep_serial(const System& sys, const std::vector<DecoderId>& decoders,
                             const std::vector<double>& snr_db_list, std::uint64_t trials) {
    guard_check(sys, decoders);
    SweepResult sweep = make_sweep_shell(sys, decoders, snr_db_list, trials);
    for (std::uint32_t s = 0; s < snr_db_list.size(); ++s)
        for (std::uint64_t t = 0; t < trials; ++t) {
            const TrialRecord rec =
                run_trial(sys, snr_db_list[s], trial_seed(sys.cfg.seed, s, t), decoders);
            accumulate_trial(sweep, decoders, s, rec);
        }
    return sweep;
}

SweepResult run_sweep_parallel(const System& sys, const std::vector<DecoderId>& decoders,
                               const std::vector<double>& snr_db_list, std::uint64_t trials,
                               std::uint32_t workers) {
    guard_check(sys, decoders);
    SweepResult sweep = make_sweep_shell(sys, decoders, snr_db_list, trials);
    const std::uint64_t total = trials * snr_db_list.size();

#ifdef _OPENMP
#pragma omp parallel num_threads(static_cast<int>(workers))
    {
        SweepResult local = make_sweep_shell(sys, decoders, snr_db_list, trials);
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
            const auto s = static_cast<std::uint32_t>(i / trials);
            const std::uint64_t t = static_cast<std::uint64_t>(i) % trials;
            const TrialRecord rec =
                run_trial(sys, snr_db_list[s], trial_seed(sys.cfg.seed, s, t), decoders);
            accumulate_trial(local, decoders, s, rec);
        }
#pragma omp critical
        for (std::size_t p = 0; p < sweep.points.size(); ++p) {
            sweep.points[p].bit_errors += local.points[p].bit_errors;
            sweep.points[p].adds_total += local.points[p].adds_total;
            sweep.points[p].muls_total += local.points[p].muls_total;
            sweep.points[p].nom_misses += local.points[p].nom_misses;
            sweep.points[p].has_nom = sweep.points[p].has_nom || local.points[p].has_nom;
        }
    }
#else
    (void)workers;
    for (std::uint64_t i = 0; i < total; ++i) {
        const auto s = static_cast<std::uint32_t>(i / trials);
        const std::uint64_t t = i % trials;
        const TrialRecord rec =
            run_trial(sys, snr_db_list[s], trial_seed(sys.cfg.seed, s, t), decoders);
        accumulate_trial(sweep, decoders, s, rec);
    }
#endif
    return sweep;
}

SweepResult run_sweep(const System& sys, const std::vector<DecoderId>& decoders,
                      const std::vector<double>& snr_db_list, std::uint64_t trials,
                      std::uint32_t workers) {
    if (workers <= 1) return run_sweep_serial(sys, decoders, snr_db_list, trials);
    return run_sweep_parallel(sys, decoders, snr_db_list, trials, workers);
}

std::uint32_t message_disagreements(const std::vector<UserMessage>& a,
                                    const std::vector<UserMessage>& b) {
    std::uint32_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += !(a[i] == b[i]);
    return n;
}

double NomResult::mean(std::uint32_t s, std::uint32_t v) const {
    return trials ? static_cast<double>(sum[s][v]) / trials : 0.0;
}

double NomResult::stderr_of(std::uint32_t s, std::uint32_t v) const {
    if (trials < 2) return 0.0;
    const double n = static_cast<double>(trials);
    const double m = mean(s, v);
    const double var = (static_cast<double>(sum_sq[s][v]) - n * m * m) / (n - 1.0);
    return std::sqrt(std::max(var, 0.0) / n);
}

double NomResult::gap_stderr(std::uint32_t s, std::uint32_t v, std::uint32_t w) const {
    if (trials < 2) return 0.0;
    const double n = static_cast<double>(trials);
    const double md = mean(s, v) - mean(s, w);
    // E[d^2] from the tracked second moments and cross products.
    const double d2 = static_cast<double>(sum_sq[s][v]) + static_cast<double>(sum_sq[s][w]) -
                      2.0 * static_cast<double>(cross[s][v][w]);
    const double var = (d2 - n * md * md) / (n - 1.0);
    return std::sqrt(std::max(var, 0.0) / n);
}

NomResult run_nom(const System& sys, const std::vector<NomVariant>& variants,
                  const std::vector<double>& snr_db_list, std::uint64_t trials,
                  std::uint32_t workers) {
    const std::size_t nv = variants.size();
    NomResult res;
    res.snr_db_list = snr_db_list;
    res.variants = variants;
    res.trials = trials;
    res.sum.assign(snr_db_list.size(), std::vector<std::uint64_t>(nv, 0));
    res.sum_sq.assign(snr_db_list.size(), std::vector<std::uint64_t>(nv, 0));
    res.cross.assign(snr_db_list.size(),
                     std::vector<std::vector<std::uint64_t>>(nv, std::vector<std::uint64_t>(nv, 0)));

    const std::uint64_t total = trials * snr_db_list.size();
    const auto run_one = [&](std::uint32_t s, std::uint64_t t, NomResult& acc) {
        Rng rng(trial_seed(sys.cfg.seed, s, t));
        std::vector<UserMessage> msgs(sys.cfg.users);
        std::vector<std::uint8_t> bits(sys.cfg.bits_per_user());
        for (auto& m : msgs) {
            for (auto& b : bits) b = static_cast<std::uint8_t>(rng.raw() & 1u);
            m = map_bits(bits, sys.cfg);
        }
        const ChannelRealization h = draw_channel(rng, sys.cfg);
        const ReceivedSignal y =
            transmit_and_receive(msgs, h, sys.sets, sys.books, snr_db_list[s], rng);
        const DecodeResult mpa = decode_mpa(y, h, sys);

        std::vector<std::uint32_t> misses(nv, 0);
        for (std::size_t v = 0; v < nv; ++v) {
            if (!variants[v].rho) continue; // reference compared against itself
            FcsdOptions opt;
            opt.rho = variants[v].rho;
            const DecodeResult fcsd = decode_fcsd(y, h, sys, opt);
            misses[v] = message_disagreements(fcsd.estimates, mpa.estimates);
        }
        for (std::size_t v = 0; v < nv; ++v) {
            acc.sum[s][v] += misses[v];
            acc.sum_sq[s][v] += std::uint64_t{misses[v]} * misses[v];
            for (std::size_t w = 0; w < nv; ++w)
                acc.cross[s][v][w] += std::uint64_t{misses[v]} * misses[w];
        }
    };

#ifdef _OPENMP
    if (workers > 1) {
#pragma omp parallel num_threads(static_cast<int>(workers))
        {
            NomResult local = res;
#pragma omp for schedule(dynamic, 16)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i)
                run_one(static_cast<std::uint32_t>(i / trials),
                        static_cast<std::uint64_t>(i) % trials, local);
#pragma omp critical
            for (std::size_t s = 0; s < snr_db_list.size(); ++s)
                for (std::size_t v = 0; v < nv; ++v) {
                    res.sum[s][v] += local.sum[s][v];
                    res.sum_sq[s][v] += local.sum_sq[s][v];
                    for (std::size_t w = 0; w < nv; ++w) res.cross[s][v][w] += local.cross[s][v][w];
                }
        }
        return res;
    }
#else
    (void)workers;
#endif
    for (std::uint64_t i = 0; i < total; ++i)
        run_one(static_cast<std::uint32_t>(i / trials), i % trials, res);
    return res;
}

} // namespace smscma
