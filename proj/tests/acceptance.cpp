// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Expected runtime is a few minutes on two cores; criteria
// with Monte-Carlo loops parallelize over trials.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "smscma/complexity.hpp"
#include "smscma/harness.hpp"
#include "smscma/report.hpp"

using namespace smscma;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
int g_failed = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failed;
}

System paper_system(std::uint32_t m, std::uint32_t nr, std::vector<std::uint64_t> rho,
                    std::uint32_t tx = 4) {
    SystemConfig cfg;
    cfg.users = 6;
    cfg.ores = 4;
    cfg.codewords = m;
    cfg.tx_antennas = tx;
    cfg.rx_antennas = nr;
    cfg.mpa_iters = 5;
    cfg.msud_iters = 4;
    cfg.rho = std::move(rho);
    cfg.snr_db_list = {10.0};
    cfg.seed = 20240501;
    return make_default_system(cfg);
}

// N_t = 2, M = 2 exhaustive-friendly config used by criteria 3 and 4.
System small_system() { return paper_system(2, 4, {4, 4, 4}, 2); }

struct Realization {
    std::vector<UserMessage> msgs;
    ChannelRealization h;
    ReceivedSignal y;
};

Realization draw(const System& sys, double snr_db, std::uint64_t seed) {
    Rng rng(seed);
    Realization out;
    out.msgs.resize(sys.cfg.users);
    for (auto& m : out.msgs)
        m = UserMessage::from_value(static_cast<std::uint32_t>(rng.raw() % sys.cfg.message_count()),
                                    sys.cfg.codewords);
    out.h = draw_channel(rng, sys.cfg);
    out.y = transmit_and_receive(out.msgs, out.h, sys.sets, sys.books, snr_db, rng);
    return out;
}

// --------------------------------------------------------------------------
// 1. Instrumented counts equal the closed forms exactly for the sequential
//    and tree decoders over the full N_r grid at both spectral efficiencies.
// --------------------------------------------------------------------------
void criterion_1() {
    bool pass = true;
    std::string detail;
    const std::vector<std::uint64_t> rho{35, 70, 50};

    for (std::uint32_t m : {2u, 4u}) {
        for (std::uint32_t nr : {2u, 4u, 6u, 10u}) {
            const System sys = paper_system(m, nr, rho);
            const Realization real = draw(sys, 10.0, 1);
            const ComplexityParams p = ComplexityParams::from_system(sys);
            const auto useq = build_tree_levels(sys.sets, ore_energy_order(real.h, sys)).u_sequence();

            const OpCount sud = decode_sud(real.y, real.h, sys).ops;
            const OpCount msud = decode_msud(real.y, real.h, sys).ops;
            const OpCount fcsd = decode_fcsd(real.y, real.h, sys).ops;
            pass = pass && sud == formula_sud(p, useq);
            pass = pass && msud == formula_msud(p, useq, 4);
            pass = pass && fcsd == formula_fcsd(p, useq, rho);

            if (m == 2 && nr == 2) {
                pass = pass && sud == OpCount{15812, 16400};
                pass = pass && msud.real_adds == 20996;
                detail = "sud " + std::to_string(sud.real_adds) + "/" +
                         std::to_string(sud.real_muls) + " msud adds " +
                         std::to_string(msud.real_adds) + " at eta3 N_r2; ";
            }
        }
    }
    report(1, pass, detail + "measured == formula for sud/msud/fcsd over N_r {2,4,6,10}, both eta");
}

// --------------------------------------------------------------------------
// 2. MPA closed form evaluates to the golden count and the instrumented MPA
//    reconciles exactly under the documented accounting.
// --------------------------------------------------------------------------
void criterion_2() {
    bool pass = true;
    const System base = paper_system(2, 2, {35, 70, 50});
    const std::uint64_t golden = formula_mpa(ComplexityParams::from_system(base), 5).real_adds;
    pass = pass && golden == 196548;

    for (std::uint32_t m : {2u, 4u}) {
        for (std::uint32_t nr : {2u, 4u, 6u, 10u}) {
            const System sys = paper_system(m, nr, {35, 70, 50});
            const Realization real = draw(sys, 10.0, 2);
            pass = pass &&
                   decode_mpa(real.y, real.h, sys).ops ==
                       formula_mpa(ComplexityParams::from_system(sys), 5);
        }
    }
    report(2, pass,
           "mpa formula adds = " + std::to_string(golden) +
               " at eta3 N_r2 K5; measured == formula over the grid");
}

// --------------------------------------------------------------------------
// 3. Keep-all tree search returns the ml estimates on every realization.
// --------------------------------------------------------------------------
void criterion_3() {
    const System sys = small_system();
    FcsdOptions keep_all;
    keep_all.rho = keep_all_rho(sys.cfg.ores);

    std::int64_t mismatches = 0;
    const std::int64_t trials = 1000;
    const double snrs[] = {0.0, 10.0, 20.0};
    for (int s = 0; s < 3; ++s) {
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : mismatches) schedule(dynamic, 8)
#endif
        for (std::int64_t t = 0; t < trials; ++t) {
            const Realization real = draw(sys, snrs[s], trial_seed(3, s, t));
            const auto ml = decode_ml(real.y, real.h, sys);
            const auto fcsd = decode_fcsd(real.y, real.h, sys, keep_all);
            mismatches += fcsd.estimates == ml.estimates ? 0 : 1;
        }
    }
    report(3, mismatches == 0,
           "keep-all fcsd == ml on 1000 realizations at each of {0,10,20} dB (mismatches: " +
               std::to_string(mismatches) + ")");
}

// --------------------------------------------------------------------------
// 4. MPA agrees with ml on at least 99% of user messages at 10 dB.
// --------------------------------------------------------------------------
void criterion_4() {
    const System sys = small_system();
    std::int64_t agree = 0;
    const std::int64_t trials = 2000;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : agree) schedule(dynamic, 8)
#endif
    for (std::int64_t t = 0; t < trials; ++t) {
        const Realization real = draw(sys, 10.0, trial_seed(4, 0, t));
        const auto ml = decode_ml(real.y, real.h, sys);
        const auto mpa = decode_mpa(real.y, real.h, sys);
        for (std::uint32_t u = 0; u < sys.cfg.users; ++u)
            agree += ml.estimates[u] == mpa.estimates[u];
    }
    const double rate = static_cast<double>(agree) / (trials * sys.cfg.users);
    char buf[96];
    std::snprintf(buf, sizeof buf, "mpa/ml per-user agreement %.4f (need >= 0.99) over 2000 trials",
                  rate);
    report(4, rate >= 0.99, buf);
}

// --------------------------------------------------------------------------
// 5. BER ordering at eta3, N_r4, 2e4 trials per point, mid SNR {6, 8} dB:
//    sud > msud > fcsd, and fcsd within 2 combined standard errors of mpa.
// --------------------------------------------------------------------------
void criterion_5() {
    const System sys = paper_system(2, 4, {35, 70, 50});
    const std::vector<double> snrs{6.0, 8.0};
    const std::vector<DecoderId> ids{DecoderId::Sud, DecoderId::Msud, DecoderId::Fcsd,
                                     DecoderId::Mpa};
    const SweepResult sw = run_sweep(sys, ids, snrs, 20000, 8);

    bool pass = true;
    std::string detail;
    for (std::uint32_t s = 0; s < snrs.size(); ++s) {
        const double sud = sw.at(s, DecoderId::Sud).ber(sw.bits_per_trial);
        const double msud = sw.at(s, DecoderId::Msud).ber(sw.bits_per_trial);
        const double fcsd = sw.at(s, DecoderId::Fcsd).ber(sw.bits_per_trial);
        const double mpa = sw.at(s, DecoderId::Mpa).ber(sw.bits_per_trial);
        const double se_f = sw.at(s, DecoderId::Fcsd).ber_stderr(sw.bits_per_trial);
        const double se_m = sw.at(s, DecoderId::Mpa).ber_stderr(sw.bits_per_trial);
        const double bound = 2.0 * std::sqrt(se_f * se_f + se_m * se_m);
        pass = pass && sud > msud && msud > fcsd && std::abs(fcsd - mpa) <= bound;
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "%g dB: sud %.3g > msud %.3g > fcsd %.3g, |fcsd-mpa| %.2g <= %.2g; ",
                      snrs[s], sud, msud, fcsd, std::abs(fcsd - mpa), bound);
        detail += buf;
    }
    report(5, pass, detail);
}

// --------------------------------------------------------------------------
// 6. NoM level sensitivity at eta3, N_r4, 2 dB, 1.5e4 common trials:
//    nom([15,50,15]) < nom([50,15,15]) < nom([15,15,15]), every gap more
//    than twice its paired standard error.
// --------------------------------------------------------------------------
void criterion_6() {
    const System sys = paper_system(2, 4, {35, 70, 50});
    const std::vector<NomVariant> variants{
        {"base", std::vector<std::uint64_t>{15, 15, 15}},
        {"level1", std::vector<std::uint64_t>{50, 15, 15}},
        {"level2", std::vector<std::uint64_t>{15, 50, 15}},
    };
    const NomResult res = run_nom(sys, variants, {2.0}, 15000, 8);

    const double base = res.mean(0, 0), lvl1 = res.mean(0, 1), lvl2 = res.mean(0, 2);
    const double gap21 = lvl1 - lvl2, se21 = res.gap_stderr(0, 1, 2);
    const double gap10 = base - lvl1, se10 = res.gap_stderr(0, 0, 1);
    const bool pass = lvl2 < lvl1 && lvl1 < base && gap21 > 2.0 * se21 && gap10 > 2.0 * se10;
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "nom [15,50,15] %.4f < [50,15,15] %.4f < [15,15,15] %.4f; gaps %.4f (2se %.4f), "
                  "%.4f (2se %.4f), paired over common trials",
                  lvl2, lvl1, base, gap21, 2 * se21, gap10, 2 * se10);
    report(6, pass, buf);
}

// --------------------------------------------------------------------------
// 7. All five decoders are exact over 1000 noiseless trials on both
//    spectral-efficiency configs.
// --------------------------------------------------------------------------
void criterion_7() {
    std::int64_t errors = 0;
    for (std::uint32_t m : {2u, 4u}) {
        const System sys = paper_system(m, 2, m == 2 ? std::vector<std::uint64_t>{35, 70, 50}
                                                     : std::vector<std::uint64_t>{110, 320, 300});
        const std::int64_t trials = 1000;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : errors) schedule(dynamic, 4)
#endif
        for (std::int64_t t = 0; t < trials; ++t) {
            const TrialRecord rec =
                run_trial(sys, kInf, trial_seed(7, m, t),
                          {DecoderId::Ml, DecoderId::Mpa, DecoderId::Sud, DecoderId::Msud,
                           DecoderId::Fcsd});
            for (const auto& d : rec.decoders) errors += d.bit_errors;
        }
    }
    report(7, errors == 0,
           "noiseless bit errors across all five decoders, both eta configs: " +
               std::to_string(errors));
}

// --------------------------------------------------------------------------
// 8. Property suites: message normalization, metric monotonicity, survival
//    probability vs quadrature, byte-exact reproducibility, worker-count
//    independence.
// --------------------------------------------------------------------------

// Quadrature oracle: bessel series plus Simpson on the x = t^2 axis, where
// the half-odd powers of x in the density are smooth.
double bessel_i(std::uint32_t n, double x) {
    double term = std::pow(0.5 * x, n);
    for (std::uint32_t k = 1; k <= n; ++k) term /= k;
    double sum = term;
    for (std::uint32_t k = 1; k < 300; ++k) {
        term *= 0.25 * x * x / (k * (n + k));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double metric_pdf(double x, double alpha2, double sigma2, std::uint32_t order) {
    if (x <= 0.0) return 0.0;
    return (1.0 / sigma2) * std::pow(x / alpha2, (order - 1) / 2.0) *
           std::exp(-(alpha2 + x) / sigma2) *
           bessel_i(order - 1, 2.0 * std::sqrt(x * alpha2) / sigma2);
}

double quadrature_cdf(double gamma, double alpha2, double sigma2, std::uint32_t order) {
    const int n = 4000;
    const double tmax = std::sqrt(gamma);
    const double step = tmax / n;
    const auto g = [&](double t) { return metric_pdf(t * t, alpha2, sigma2, order) * 2.0 * t; };
    double sum = g(0.0) + g(tmax);
    for (int i = 1; i < n; ++i) sum += g(i * step) * (i % 2 ? 4.0 : 2.0);
    return sum * step / 3.0;
}

void criterion_8() {
    bool pass = true;
    std::string detail;

    // MPA message normalization over 100 decodes.
    {
        const System sys = paper_system(2, 4, {35, 70, 50});
        double worst = 0.0;
        for (std::uint64_t t = 0; t < 100; ++t) {
            const Realization real = draw(sys, 6.0, trial_seed(81, 0, t));
            MpaTrace trace;
            MpaOptions opt;
            opt.trace = &trace;
            decode_mpa(real.y, real.h, sys, opt);
            for (const auto& round : trace.rounds) {
                for (double s : round.vn_sums) worst = std::max(worst, std::abs(s - 1.0));
                for (double mn : round.vn_min_entry) pass = pass && mn >= 0.0;
            }
        }
        pass = pass && worst <= 1e-9;
        char buf[64];
        std::snprintf(buf, sizeof buf, "norm dev %.1e; ", worst);
        detail += buf;
    }

    // Tree metric monotonicity along all branches of 100 decodes.
    {
        const System sys = paper_system(2, 2, {35, 70, 50});
        bool mono = true;
        for (std::uint64_t t = 0; t < 100; ++t) {
            const Realization real = draw(sys, 8.0, trial_seed(82, 0, t));
            FcsdTrace trace;
            FcsdOptions opt;
            opt.trace = &trace;
            decode_fcsd(real.y, real.h, sys, opt);
            for (const auto& level : trace.levels)
                for (const auto& node : level)
                    mono = mono && node.metric >= node.mother_metric - 1e-12;
        }
        pass = pass && mono;
        detail += mono ? "metrics monotone; " : "metric monotonicity VIOLATED; ";
    }

    // Survival probability against quadrature on a 20-point grid.
    {
        double worst = 0.0;
        const double alpha2s[] = {0.3, 1.0, 2.5, 0.5};
        const double gammas[] = {0.5, 1.5, 4.0, 2.0};
        const std::uint32_t orders[] = {1, 2, 4, 6, 8};
        int points = 0;
        for (std::uint32_t order : orders)
            for (int i = 0; i < 4; ++i) {
                const double lhs = survival_probability(alpha2s[i], 1.0, gammas[i], order);
                const double rhs = quadrature_cdf(gammas[i], alpha2s[i], 1.0, order);
                worst = std::max(worst, std::abs(lhs - rhs));
                ++points;
            }
        pass = pass && worst <= 1e-6 && points == 20;
        char buf[64];
        std::snprintf(buf, sizeof buf, "survival vs quadrature dev %.1e over 20 pts; ", worst);
        detail += buf;
    }

    // Reproducibility and worker-count independence, byte for byte.
    {
        const System sys = small_system();
        const std::vector<DecoderId> ids{DecoderId::Mpa, DecoderId::Sud, DecoderId::Fcsd};
        const std::vector<double> snrs{4.0, 10.0};
        const std::string a = sweep_to_csv(run_sweep(sys, ids, snrs, 300, 1));
        const std::string b = sweep_to_csv(run_sweep(sys, ids, snrs, 300, 1));
        const std::string c = sweep_to_csv(run_sweep(sys, ids, snrs, 300, 8));
        const bool repro = a == b && a == c;
        pass = pass && repro;
        detail += repro ? "csv bytes identical across reruns and 1 vs 8 workers"
                        : "csv bytes DIFFER across reruns/workers";
    }

    report(8, pass, detail);
}

} // namespace

int main(int argc, char** argv) {
    // Optional filter: run only the listed criteria numbers.
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const auto want = [&](int c) {
        if (only.empty()) return true;
        for (int o : only)
            if (o == c) return true;
        return false;
    };

    if (want(1)) criterion_1();
    if (want(2)) criterion_2();
    if (want(3)) criterion_3();
    if (want(4)) criterion_4();
    if (want(5)) criterion_5();
    if (want(6)) criterion_6();
    if (want(7)) criterion_7();
    if (want(8)) criterion_8();

    if (g_failed == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failed);
    return g_failed;
}
