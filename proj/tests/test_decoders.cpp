#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "smscma/decoders.hpp"
#include "smscma/errors.hpp"

using namespace smscma;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SystemConfig config(std::uint32_t nt, std::uint32_t m, std::uint32_t nr) {
    SystemConfig cfg;
    cfg.users = 6;
    cfg.ores = 4;
    cfg.codewords = m;
    cfg.tx_antennas = nt;
    cfg.rx_antennas = nr;
    cfg.mpa_iters = 5;
    cfg.msud_iters = 4;
    cfg.rho = {4, 4, 4};
    cfg.snr_db_list = {10.0};
    cfg.seed = 11;
    return cfg;
}

// N_t = 2, M = 2: 4096 joint hypotheses, cheap enough for exhaustive checks.
System tiny_system(std::uint32_t nr = 4) { return make_default_system(config(2, 2, nr)); }

struct Realization {
    std::vector<UserMessage> msgs;
    ChannelRealization h;
    ReceivedSignal y;
};

Realization random_trial(const System& sys, double snr_db, std::uint64_t seed) {
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

// Test-local residual distance, written against the full per-user assignment.
double ref_distance(const System& sys, const ReceivedSignal& y, const ChannelRealization& h,
                    std::uint32_t r, const std::vector<UserMessage>& full) {
    double d = 0.0;
    for (std::uint32_t nr = 0; nr < y.rx; ++nr) {
        cplx acc = y.y(r, nr);
        for (std::uint32_t u : sys.sets.ore_users[r])
            acc -= h.h(u, r, full[u].antenna, nr) * sys.books.entry(u, r, full[u].codeword);
        d += std::norm(acc);
    }
    return d;
}

double ref_total(const System& sys, const ReceivedSignal& y, const ChannelRealization& h,
                 const std::vector<UserMessage>& full) {
    double d = 0.0;
    for (std::uint32_t r = 0; r < sys.cfg.ores; ++r) d += ref_distance(sys, y, h, r, full);
    return d;
}

System degenerate_single_user() {
    SystemConfig cfg;
    cfg.users = 1;
    cfg.ores = 2;
    cfg.codewords = 2;
    cfg.tx_antennas = 2;
    cfg.rx_antennas = 1;
    cfg.mpa_iters = 3;
    cfg.msud_iters = 2;
    cfg.rho = {2};
    cfg.snr_db_list = {10.0};
    cfg.seed = 9;
    IndicatorMatrix f;
    f.ores = 2;
    f.users = 1;
    f.a = {1, 1};
    return make_system(cfg, f, make_default_codebooks(f, 2),
                       SystemConfig::Strictness::AllowDegenerate);
}

} // namespace

// ---------------------------------------------------------------------------
// ML
// ---------------------------------------------------------------------------

TEST_CASE("ml recovers the transmitted messages on a noiseless channel") {
    const System sys = tiny_system(2);
    for (std::uint64_t t = 0; t < 50; ++t) {
        const Realization real = random_trial(sys, kInf, 1000 + t);
        const DecodeResult res = decode_ml(real.y, real.h, sys);
        CHECK(res.estimates == real.msgs);
    }
}

TEST_CASE("ml matches an exhaustive scan on a single-user system") {
    const System sys = degenerate_single_user();
    for (std::uint64_t t = 0; t < 200; ++t) {
        const Realization real = random_trial(sys, 8.0, 2000 + t);
        const DecodeResult res = decode_ml(real.y, real.h, sys);

        double best = std::numeric_limits<double>::infinity();
        UserMessage best_msg{};
        for (std::uint32_t v = 0; v < sys.cfg.message_count(); ++v) {
            const std::vector<UserMessage> cand{UserMessage::from_value(v, sys.cfg.codewords)};
            const double d = ref_total(sys, real.y, real.h, cand);
            if (d < best) {
                best = d;
                best_msg = cand[0];
            }
        }
        CHECK(res.estimates[0] == best_msg);
    }
}

TEST_CASE("ml guard arithmetic") {
    CHECK(ml_hypothesis_count(config(4, 4, 2)) == 16777216);
    const SystemConfig huge = [] {
        SystemConfig c = config(8, 8, 2);
        c.users = 8;
        return c;
    }();
    CHECK(ml_hypothesis_count(huge) > huge.ml_guard);

    System sys = tiny_system(2);
    sys.cfg.ml_guard = 100; // 4096 hypotheses exceed it
    const Realization real = random_trial(sys, 10.0, 1);
    CHECK_THROWS_AS(decode_ml(real.y, real.h, sys), GuardError);
}

// ---------------------------------------------------------------------------
// ORE energy ordering
// ---------------------------------------------------------------------------

TEST_CASE("energy order under a flat channel is the identity with the stated value") {
    const System sys = make_default_system(config(4, 2, 2));
    ChannelRealization h;
    h.users = 6;
    h.ores = 4;
    h.tx = 4;
    h.rx = 2;
    h.h_.assign(static_cast<std::size_t>(6) * 4 * 4 * 2, cplx{1.0, 0.0});

    const auto order = ore_energy_order(h, sys);
    CHECK(order == std::vector<std::uint32_t>{0, 1, 2, 3});

    // Candidate-summed energy of each ORE: N_r * d_f * N_t.
    // Doubling one ORE's gains must move it to the front.
    ChannelRealization boosted = h;
    for (std::uint32_t u : sys.sets.ore_users[2])
        for (std::uint32_t nt = 0; nt < 4; ++nt)
            for (std::uint32_t nr = 0; nr < 2; ++nr) boosted.h(u, 2, nt, nr) = {2.0, 0.0};
    CHECK(ore_energy_order(boosted, sys)[0] == 2);
}

TEST_CASE("energy order agrees with a recomputed energy list") {
    const System sys = make_default_system(config(4, 2, 4));
    for (std::uint64_t t = 0; t < 30; ++t) {
        const Realization real = random_trial(sys, 10.0, 3000 + t);
        const auto order = ore_energy_order(real.h, sys);

        std::vector<double> energy(sys.cfg.ores, 0.0);
        for (std::uint32_t r = 0; r < sys.cfg.ores; ++r)
            for (std::uint32_t u : sys.sets.ore_users[r])
                for (std::uint32_t nt = 0; nt < sys.cfg.tx_antennas; ++nt)
                    for (std::uint32_t nr = 0; nr < sys.cfg.rx_antennas; ++nr)
                        energy[r] += std::norm(real.h.h(u, r, nt, nr));
        std::vector<std::uint32_t> expect(sys.cfg.ores);
        std::iota(expect.begin(), expect.end(), 0u);
        std::stable_sort(expect.begin(), expect.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return energy[a] > energy[b]; });
        CHECK(order == expect);
    }
}

TEST_CASE("genie-aided ordering variant runs") {
    const System sys = make_default_system(config(4, 2, 2));
    const Realization real = random_trial(sys, 10.0, 5);
    const auto order =
        ore_energy_order(real.h, sys, EnergyConvention::GenieAided, &real.msgs);
    std::vector<std::uint32_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::uint32_t>{0, 1, 2, 3});
}

// ---------------------------------------------------------------------------
// Tree level planning
// ---------------------------------------------------------------------------

TEST_CASE("level plan for the default indicator is (3,2,1,0) under any order") {
    const System sys = tiny_system();
    std::vector<std::uint32_t> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end());
    do {
        const LevelPlan plan = build_tree_levels(sys.sets, order);
        CHECK(plan.u_sequence() == std::vector<std::uint32_t>{3, 2, 1, 0});
        CHECK(plan.levels[0].new_users.size() == sys.sets.d_f);
        CHECK(plan.levels[0].fully_expanded());
        CHECK_FALSE(plan.levels[3].fully_expanded());

        // Each user is newly estimated at exactly one level.
        std::vector<int> seen(sys.cfg.users, 0);
        std::uint32_t total = 0;
        for (const auto& l : plan.levels)
            for (std::uint32_t u : l.new_users) {
                ++seen[u];
                ++total;
            }
        CHECK(total == sys.cfg.users);
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    } while (std::next_permutation(order.begin(), order.end()));
}

// ---------------------------------------------------------------------------
// SUD
// ---------------------------------------------------------------------------

TEST_CASE("sud is exact on a noiseless channel") {
    const System sys = make_default_system(config(4, 2, 4));
    for (std::uint64_t t = 0; t < 50; ++t) {
        const Realization real = random_trial(sys, kInf, 4000 + t);
        CHECK(decode_sud(real.y, real.h, sys).estimates == real.msgs);
    }
}

TEST_CASE("sud visits (3,2,1) fresh users and stops early") {
    const System sys = make_default_system(config(4, 2, 2));
    const Realization real = random_trial(sys, 10.0, 17);
    SudTrace trace;
    SudOptions opt;
    opt.trace = &trace;
    decode_sud(real.y, real.h, sys, opt);

    REQUIRE(trace.visits.size() == 3); // fourth ORE never visited
    CHECK(trace.visits[0].new_users.size() == 3);
    CHECK(trace.visits[1].new_users.size() == 2);
    CHECK(trace.visits[2].new_users.size() == 1);
}

TEST_CASE("each sud stage solves its per-ORE subproblem exactly") {
    const System sys = make_default_system(config(4, 2, 2));
    for (std::uint64_t t = 0; t < 25; ++t) {
        const Realization real = random_trial(sys, 6.0, 5000 + t);
        SudTrace trace;
        SudOptions opt;
        opt.trace = &trace;
        decode_sud(real.y, real.h, sys, opt);

        for (const auto& visit : trace.visits) {
            if (visit.new_users.empty()) continue;
            const std::uint32_t k = static_cast<std::uint32_t>(visit.new_users.size());
            std::uint64_t count = 1;
            for (std::uint32_t i = 0; i < k; ++i) count *= sys.cfg.message_count();

            double best = std::numeric_limits<double>::infinity();
            std::vector<UserMessage> best_cand(k);
            std::vector<UserMessage> full = visit.estimates_before;
            for (std::uint64_t j = 0; j < count; ++j) {
                std::uint64_t rem = j;
                std::vector<UserMessage> cand(k);
                for (std::uint32_t i = k; i-- > 0;) {
                    cand[i] = UserMessage::from_value(
                        static_cast<std::uint32_t>(rem % sys.cfg.message_count()), sys.cfg.codewords);
                    rem /= sys.cfg.message_count();
                }
                for (std::uint32_t i = 0; i < k; ++i) full[visit.new_users[i]] = cand[i];
                const double d = ref_distance(sys, real.y, real.h, visit.ore, full);
                if (d < best) {
                    best = d;
                    best_cand = cand;
                }
            }
            CHECK(visit.chosen == best_cand);
        }
    }
}

// ---------------------------------------------------------------------------
// MSUD
// ---------------------------------------------------------------------------

TEST_CASE("msud with zero iterations is sud") {
    const System sys = make_default_system(config(4, 2, 2));
    const Realization real = random_trial(sys, 8.0, 21);
    MsudOptions opt;
    opt.iterations = 0;
    CHECK(decode_msud(real.y, real.h, sys, opt).estimates ==
          decode_sud(real.y, real.h, sys).estimates);
}

TEST_CASE("msud keeps the exact answer on a noiseless channel") {
    const System sys = make_default_system(config(4, 2, 4));
    for (std::uint64_t t = 0; t < 25; ++t) {
        const Realization real = random_trial(sys, kInf, 6000 + t);
        CHECK(decode_msud(real.y, real.h, sys).estimates == real.msgs);
    }
}

TEST_CASE("one msud round equals a per-user refit with interference subtracted") {
    const System sys = make_default_system(config(4, 2, 2));
    for (std::uint64_t t = 0; t < 25; ++t) {
        const Realization real = random_trial(sys, 6.0, 7000 + t);
        const std::vector<UserMessage> init = decode_sud(real.y, real.h, sys).estimates;

        // Jacobi refit against the fixed initial estimates.
        std::vector<UserMessage> expect(sys.cfg.users);
        for (std::uint32_t u = 0; u < sys.cfg.users; ++u) {
            double best = std::numeric_limits<double>::infinity();
            UserMessage best_msg{};
            for (std::uint32_t v = 0; v < sys.cfg.message_count(); ++v) {
                std::vector<UserMessage> full = init;
                full[u] = UserMessage::from_value(v, sys.cfg.codewords);
                double d = 0.0;
                for (std::uint32_t r : sys.sets.user_ores[u])
                    d += ref_distance(sys, real.y, real.h, r, full);
                if (d < best) {
                    best = d;
                    best_msg = full[u];
                }
            }
            expect[u] = best_msg;
        }

        MsudOptions opt;
        opt.iterations = 1;
        CHECK(decode_msud(real.y, real.h, sys, opt).estimates == expect);
    }
}

TEST_CASE("gauss-seidel schedule is available and deterministic") {
    const System sys = make_default_system(config(4, 2, 2));
    const Realization real = random_trial(sys, 6.0, 23);
    MsudOptions opt;
    opt.schedule = MsudSchedule::GaussSeidel;
    const DecodeResult a = decode_msud(real.y, real.h, sys, opt);
    const DecodeResult b = decode_msud(real.y, real.h, sys, opt);
    CHECK(a.estimates == b.estimates);
}

// ---------------------------------------------------------------------------
// MPA
// ---------------------------------------------------------------------------

TEST_CASE("mpa messages start equiprobable") {
    const System sys = make_default_system(config(4, 2, 2));
    const Realization real = random_trial(sys, 10.0, 31);
    MpaTrace trace;
    MpaOptions opt;
    opt.trace = &trace;
    decode_mpa(real.y, real.h, sys, opt);
    CHECK(trace.initial_message == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("mpa messages stay normalized and non-negative every round") {
    const System sys = make_default_system(config(4, 2, 4));
    for (std::uint64_t t = 0; t < 10; ++t) {
        const Realization real = random_trial(sys, 8.0, 8000 + t);
        MpaTrace trace;
        MpaOptions opt;
        opt.trace = &trace;
        decode_mpa(real.y, real.h, sys, opt);
        REQUIRE(trace.rounds.size() == sys.cfg.mpa_iters);
        for (const auto& round : trace.rounds) {
            for (double s : round.vn_sums) CHECK(std::abs(s - 1.0) <= 1e-9);
            for (double m : round.vn_min_entry) CHECK(m >= 0.0);
        }
    }
}

TEST_CASE("mpa is exact on a noiseless channel") {
    const System sys = tiny_system(4);
    for (std::uint64_t t = 0; t < 25; ++t) {
        const Realization real = random_trial(sys, kInf, 9000 + t);
        CHECK(decode_mpa(real.y, real.h, sys).estimates == real.msgs);
    }
}

TEST_CASE("mpa tracks ml closely at moderate snr") {
    const System sys = tiny_system(4);
    std::uint64_t agree = 0, total = 0;
    for (std::uint64_t t = 0; t < 300; ++t) {
        const Realization real = random_trial(sys, 10.0, 10000 + t);
        const auto ml = decode_ml(real.y, real.h, sys);
        const auto mpa = decode_mpa(real.y, real.h, sys);
        for (std::uint32_t u = 0; u < sys.cfg.users; ++u) {
            agree += ml.estimates[u] == mpa.estimates[u];
            ++total;
        }
    }
    CHECK(static_cast<double>(agree) / total >= 0.97);
}

// ---------------------------------------------------------------------------
// FCSD
// ---------------------------------------------------------------------------

TEST_CASE("keep-all tree search reproduces ml") {
    const System sys = tiny_system(4);
    FcsdOptions opt;
    opt.rho = keep_all_rho(sys.cfg.ores);
    for (std::uint64_t t = 0; t < 200; ++t) {
        const Realization real = random_trial(sys, 10.0, 11000 + t);
        const auto ml = decode_ml(real.y, real.h, sys);
        const auto fcsd = decode_fcsd(real.y, real.h, sys, opt);
        CHECK(fcsd.estimates == ml.estimates);
        CHECK(fcsd.rho_clamped == false);
    }
}

TEST_CASE("single-survivor tree search is the per-level greedy") {
    const System sys = make_default_system(config(4, 2, 2));
    for (std::uint64_t t = 0; t < 25; ++t) {
        const Realization real = random_trial(sys, 8.0, 12000 + t);

        // Greedy oracle: fix the minimum child at every level.
        const auto order = ore_energy_order(real.h, sys);
        const LevelPlan plan = build_tree_levels(sys.sets, order);
        std::vector<UserMessage> assign(sys.cfg.users);
        for (const auto& level : plan.levels) {
            const std::uint32_t k = static_cast<std::uint32_t>(level.new_users.size());
            std::uint64_t count = 1;
            for (std::uint32_t i = 0; i < k; ++i) count *= sys.cfg.message_count();
            double best = std::numeric_limits<double>::infinity();
            std::vector<UserMessage> best_cand(k);
            for (std::uint64_t j = 0; j < count; ++j) {
                std::uint64_t rem = j;
                std::vector<UserMessage> cand(k);
                for (std::uint32_t i = k; i-- > 0;) {
                    cand[i] = UserMessage::from_value(
                        static_cast<std::uint32_t>(rem % sys.cfg.message_count()), sys.cfg.codewords);
                    rem /= sys.cfg.message_count();
                }
                std::vector<UserMessage> full = assign;
                for (std::uint32_t i = 0; i < k; ++i) full[level.new_users[i]] = cand[i];
                const double d = ref_distance(sys, real.y, real.h, level.ore, full);
                if (d < best) {
                    best = d;
                    best_cand = cand;
                }
            }
            for (std::uint32_t i = 0; i < k; ++i) assign[level.new_users[i]] = best_cand[i];
        }

        FcsdOptions opt;
        opt.rho = std::vector<std::uint64_t>{1, 1, 1};
        CHECK(decode_fcsd(real.y, real.h, sys, opt).estimates == assign);
    }
}

TEST_CASE("tree metrics never decrease along a branch") {
    const System sys = make_default_system(config(4, 2, 2));
    for (std::uint64_t t = 0; t < 20; ++t) {
        const Realization real = random_trial(sys, 8.0, 13000 + t);
        FcsdTrace trace;
        FcsdOptions opt;
        opt.trace = &trace;
        decode_fcsd(real.y, real.h, sys, opt);
        for (const auto& level : trace.levels)
            for (const auto& node : level) CHECK(node.metric >= node.mother_metric - 1e-12);
    }
}

TEST_CASE("enlarging every survivor count never worsens the final metric") {
    const System sys = make_default_system(config(4, 2, 2));
    for (std::uint64_t t = 0; t < 20; ++t) {
        const Realization real = random_trial(sys, 8.0, 14000 + t);
        FcsdOptions small;
        small.rho = std::vector<std::uint64_t>{4, 4, 4};
        FcsdOptions big;
        big.rho = std::vector<std::uint64_t>{8, 8, 8};
        const double m_small =
            assignment_metric(real.y, real.h, sys, decode_fcsd(real.y, real.h, sys, small).estimates);
        const double m_big =
            assignment_metric(real.y, real.h, sys, decode_fcsd(real.y, real.h, sys, big).estimates);
        CHECK(m_big <= m_small + 1e-12);
    }
}

TEST_CASE("oversized survivor counts clamp and are flagged") {
    const System sys = tiny_system(2);
    const Realization real = random_trial(sys, 10.0, 41);
    FcsdOptions opt;
    opt.rho = std::vector<std::uint64_t>{100000, 100000, 100000};
    const DecodeResult res = decode_fcsd(real.y, real.h, sys, opt);
    CHECK(res.rho_clamped);
    CHECK(res.estimates == decode_ml(real.y, real.h, sys).estimates);
}

TEST_CASE("noiseless exactness for the tree search") {
    const System sys = make_default_system(config(4, 2, 4));
    FcsdOptions opt;
    opt.rho = std::vector<std::uint64_t>{35, 70, 50};
    for (std::uint64_t t = 0; t < 25; ++t) {
        const Realization real = random_trial(sys, kInf, 15000 + t);
        CHECK(decode_fcsd(real.y, real.h, sys, opt).estimates == real.msgs);
    }
}

// ---------------------------------------------------------------------------
// Determinism
// ---------------------------------------------------------------------------

TEST_CASE("all decoders are deterministic in their inputs") {
    const System sys = tiny_system(2);
    const Realization real = random_trial(sys, 6.0, 51);
    const auto same = [&](auto&& f) {
        const DecodeResult a = f();
        const DecodeResult b = f();
        CHECK(a.estimates == b.estimates);
        CHECK(a.ops == b.ops);
    };
    same([&] { return decode_ml(real.y, real.h, sys); });
    same([&] { return decode_mpa(real.y, real.h, sys); });
    same([&] { return decode_sud(real.y, real.h, sys); });
    same([&] { return decode_msud(real.y, real.h, sys); });
    same([&] { return decode_fcsd(real.y, real.h, sys); });
}
