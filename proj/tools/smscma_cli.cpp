// Command-line front end: simulate | complexity | nom | validate over JSON
// config files, emitting plot-ready CSV plus JSON reports and a manifest
// sufficient to reproduce every output byte.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "smscma/complexity.hpp"
#include "smscma/decoders.hpp"
#include "smscma/errors.hpp"
#include "smscma/harness.hpp"
#include "smscma/report.hpp"

using namespace smscma;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitIo = 4;

std::uint32_t default_workers() {
    if (const char* env = std::getenv("SMSCMA_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::uint32_t>(v);
        throw ConfigError("SMSCMA_WORKERS must be a positive integer");
    }
#ifdef _OPENMP
    return static_cast<std::uint32_t>(omp_get_max_threads());
#else
    return 1;
#endif
}

// "start:step:stop" (inclusive) or a single value.
std::vector<double> parse_snr_spec(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    if (parts.size() == 1) return parts;
    if (parts.size() != 3 || parts[1] <= 0.0 || parts[2] < parts[0])
        throw ConfigError("--snr expects start:step:stop with positive step");
    std::vector<double> out;
    for (double v = parts[0]; v <= parts[2] + 1e-9; v += parts[1]) out.push_back(v);
    return out;
}

std::vector<DecoderId> parse_decoders(const std::string& list) {
    std::vector<DecoderId> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto id = decoder_from_name(tok);
        if (!id) throw ConfigError("unknown decoder '" + tok + "'");
        out.push_back(*id);
    }
    if (out.empty()) throw ConfigError("--decoders must name at least one decoder");
    return out;
}

struct LoadedSystem {
    System sys;
    std::string codebook_source;
    std::uint64_t codebook_fnv = 0;
};

LoadedSystem assemble(const SystemConfig& cfg, const std::string& codebook_path) {
    LoadedSystem out{System{}, "", 0};
    if (!codebook_path.empty()) {
        const std::string bytes = read_file(codebook_path);
        CodebookLoad load = parse_codebook_json(bytes);
        for (const auto& w : load.warnings) std::cerr << "warning: " << w << "\n";
        out.sys = make_system(cfg, load.indicator, load.books);
        out.codebook_source = codebook_path;
        out.codebook_fnv = fnv1a64(bytes);
    } else {
        out.sys = make_default_system(cfg);
        out.codebook_source = "builtin:m" + std::to_string(cfg.codewords);
        out.codebook_fnv = fnv1a64(codebook_to_json(out.sys.books, out.sys.indicator));
    }
    return out;
}

ordered_json sweep_report(const SweepResult& sweep) {
    ordered_json rows = ordered_json::array();
    for (const auto& p : sweep.points) {
        ordered_json row;
        row["snr_db"] = p.snr_db;
        row["decoder"] = decoder_name(p.decoder);
        row["trials"] = p.trials;
        row["bit_errors"] = p.bit_errors;
        row["ber"] = p.ber(sweep.bits_per_trial);
        row["ber_stderr"] = p.ber_stderr(sweep.bits_per_trial);
        if (p.has_nom)
            row["nom"] = p.nom();
        else
            row["nom"] = nullptr;
        row["adds_avg"] = p.trials ? static_cast<double>(p.adds_total) / p.trials : 0.0;
        row["muls_avg"] = p.trials ? static_cast<double>(p.muls_total) / p.trials : 0.0;
        rows.push_back(row);
    }
    return rows;
}

// Structured text dump of the first few realizations per SNR point.
std::string realization_trace(const System& sys, const std::vector<double>& snr_list,
                              std::uint64_t trials) {
    std::ostringstream out;
    for (std::uint32_t s = 0; s < snr_list.size(); ++s) {
        const std::uint64_t n = std::min<std::uint64_t>(trials, 3);
        for (std::uint64_t t = 0; t < n; ++t) {
            const TrialRecord rec = run_trial(sys, snr_list[s], trial_seed(sys.cfg.seed, s, t), {});
            const ChannelRealization& h = rec.channel;
            const ReceivedSignal& y = rec.received;

            ordered_json j;
            j["snr_db"] = snr_list[s];
            j["trial"] = t;
            ordered_json tx = ordered_json::array();
            for (const auto& m : rec.tx_messages)
                tx.push_back(ordered_json::array({m.antenna + 1, m.codeword + 1}));
            j["tx"] = tx;
            j["h_dims"] = ordered_json::array({h.users, h.ores, h.tx, h.rx});
            ordered_json hv = ordered_json::array();
            for (const auto& v : h.h_) hv.push_back(ordered_json::array({v.real(), v.imag()}));
            j["h"] = hv;
            j["sigma2"] = y.sigma2;
            ordered_json yv = ordered_json::array();
            for (const auto& v : y.y_) yv.push_back(ordered_json::array({v.real(), v.imag()}));
            j["y"] = yv;
            out << j.dump() << "\n";
        }
    }
    return out.str();
}

int cmd_simulate(const std::string& config_path, const std::string& manifest_path,
                 const std::string& codebook_flag, const std::string& decoders_flag,
                 const std::string& snr_flag, std::optional<std::uint64_t> trials_flag,
                 std::optional<std::uint64_t> seed_flag, std::optional<std::uint32_t> workers_flag,
                 bool noiseless, const std::string& out_path, const std::string& trace_path) {
    SystemConfig cfg;
    std::string codebook_path;
    std::vector<DecoderId> decoders{DecoderId::Mpa, DecoderId::Sud, DecoderId::Msud,
                                    DecoderId::Fcsd};
    std::vector<double> snr_list;
    std::uint64_t trials = 1000;
    std::uint32_t workers = default_workers();

    if (!manifest_path.empty()) {
        const RunManifest m = RunManifest::from_json(read_file(manifest_path));
        cfg = m.cfg;
        codebook_path = m.codebook_source.rfind("builtin:", 0) == 0 ? "" : m.codebook_source;
        decoders.clear();
        for (const auto& name : m.decoders) {
            const auto id = decoder_from_name(name);
            if (!id) throw ConfigError("manifest: unknown decoder '" + name + "'");
            decoders.push_back(*id);
        }
        snr_list = m.snr_db_list;
        trials = m.trials;
        workers = m.workers;
        noiseless = m.noiseless;
    } else {
        LoadedConfig lc = load_config_file(config_path);
        cfg = lc.cfg;
        codebook_path = lc.codebook_path;
        snr_list = cfg.snr_db_list;
    }
    if (!codebook_flag.empty()) codebook_path = codebook_flag;
    if (!decoders_flag.empty()) decoders = parse_decoders(decoders_flag);
    if (!snr_flag.empty()) snr_list = parse_snr_spec(snr_flag);
    if (trials_flag) trials = *trials_flag;
    if (seed_flag) cfg.seed = *seed_flag;
    if (workers_flag) workers = *workers_flag;
    if (noiseless) snr_list = {std::numeric_limits<double>::infinity()};
    if (trials < 1) throw ConfigError("--trials must be at least 1");
    if (snr_list.empty()) throw ConfigError("no SNR points requested");

    const LoadedSystem loaded = assemble(cfg, codebook_path);
    const SweepResult sweep = run_sweep(loaded.sys, decoders, snr_list, trials, workers);

    RunManifest manifest;
    manifest.created_utc = iso8601_utc_now();
    manifest.cfg = cfg;
    manifest.codebook_source = loaded.codebook_source;
    manifest.codebook_fnv1a64 = loaded.codebook_fnv;
    for (DecoderId id : decoders) manifest.decoders.push_back(decoder_name(id));
    manifest.snr_db_list = snr_list;
    manifest.trials = trials;
    manifest.workers = workers;
    manifest.noiseless = noiseless;

    write_file(out_path, sweep_to_csv(sweep));
    write_file(out_path + ".manifest.json", manifest.to_json());
    if (!trace_path.empty()) write_file(trace_path, realization_trace(loaded.sys, snr_list, trials));
    ordered_json report;
    report["manifest"] = ordered_json::parse(manifest.to_json());
    report["results"] = sweep_report(sweep);
    write_file(out_path + ".report.json", report.dump(2) + "\n");
    std::cout << "wrote " << out_path << ", " << out_path << ".manifest.json, " << out_path
              << ".report.json\n";
    return kExitOk;
}

int cmd_complexity(const std::string& config_path, const std::string& codebook_flag,
                   const std::string& out_path) {
    LoadedConfig lc = load_config_file(config_path);
    const std::string codebook = !codebook_flag.empty() ? codebook_flag : lc.codebook_path;
    const LoadedSystem loaded = assemble(lc.cfg, codebook);
    const std::string report = complexity_report_json(loaded.sys);
    if (out_path.empty()) {
        std::cout << report;
    } else {
        write_file(out_path, report);
        std::cout << "wrote " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_nom(const std::string& config_path, const std::string& codebook_flag,
            const std::vector<std::string>& rho_specs, const std::string& snr_flag,
            std::optional<std::uint64_t> trials_flag, std::optional<std::uint32_t> workers_flag,
            const std::string& out_path) {
    LoadedConfig lc = load_config_file(config_path);
    SystemConfig cfg = lc.cfg;
    const std::string codebook = !codebook_flag.empty() ? codebook_flag : lc.codebook_path;

    std::vector<NomVariant> variants;
    if (rho_specs.empty()) {
        variants.push_back({"config", cfg.rho});
    } else {
        for (const auto& spec : rho_specs) {
            NomVariant v;
            v.name = spec;
            std::vector<std::uint64_t> rho;
            std::stringstream ss(spec);
            std::string tok;
            while (std::getline(ss, tok, ',')) rho.push_back(std::stoull(tok));
            if (rho.size() + 1 != cfg.ores) throw ConfigError("--rho needs R-1 entries: " + spec);
            v.rho = rho;
            variants.push_back(v);
        }
    }
    std::vector<double> snr_list = snr_flag.empty() ? cfg.snr_db_list : parse_snr_spec(snr_flag);
    const std::uint64_t trials = trials_flag.value_or(10000);
    const std::uint32_t workers = workers_flag ? *workers_flag : default_workers();

    const LoadedSystem loaded = assemble(cfg, codebook);
    const NomResult res = run_nom(loaded.sys, variants, snr_list, trials, workers);

    RunManifest manifest;
    manifest.created_utc = iso8601_utc_now();
    manifest.cfg = cfg;
    manifest.codebook_source = loaded.codebook_source;
    manifest.codebook_fnv1a64 = loaded.codebook_fnv;
    manifest.decoders = {"mpa", "fcsd"};
    manifest.snr_db_list = snr_list;
    manifest.trials = trials;
    manifest.workers = workers;
    for (const auto& v : variants) {
        manifest.nom_variant_names.push_back(v.name);
        if (v.rho) {
            manifest.nom_rho_flat.push_back(v.rho->size());
            for (auto x : *v.rho) manifest.nom_rho_flat.push_back(x);
        } else {
            manifest.nom_rho_flat.push_back(0);
        }
    }

    write_file(out_path, nom_to_csv(res));
    write_file(out_path + ".manifest.json", manifest.to_json());
    std::cout << "wrote " << out_path << ", " << out_path << ".manifest.json\n";
    return kExitOk;
}

int cmd_validate(const std::string& config_path, const std::string& codebook_flag) {
    LoadedConfig lc = load_config_file(config_path);
    const std::string codebook = !codebook_flag.empty() ? codebook_flag : lc.codebook_path;
    const LoadedSystem loaded = assemble(lc.cfg, codebook);
    const System& sys = loaded.sys;

    std::cout << "config OK: U=" << sys.cfg.users << " R=" << sys.cfg.ores << " M="
              << sys.cfg.codewords << " N_t=" << sys.cfg.tx_antennas << " N_r="
              << sys.cfg.rx_antennas << "\n";
    std::cout << "codebook OK: " << loaded.codebook_source << " (fnv1a64="
              << loaded.codebook_fnv << ")\n";
    std::cout << "d_f=" << sys.sets.d_f << " d_v=" << sys.sets.d_v << "\n";

    for (std::uint32_t r = 0; r < sys.cfg.ores; ++r) {
        std::cout << "Lambda_" << (r + 1) << ":";
        for (std::uint32_t u : sys.sets.ore_users[r]) std::cout << ' ' << (u + 1);
        std::cout << "\n";
    }
    for (std::uint32_t u = 0; u < sys.cfg.users; ++u) {
        std::cout << "Omega_" << (u + 1) << ":";
        for (std::uint32_t r : sys.sets.user_ores[u]) std::cout << ' ' << (r + 1);
        std::cout << "\n";
    }

    std::vector<std::uint32_t> natural(sys.cfg.ores);
    for (std::uint32_t r = 0; r < sys.cfg.ores; ++r) natural[r] = r;
    const LevelPlan plan = build_tree_levels(sys.sets, natural);
    std::cout << "level plan (natural ORE order): U_seq =";
    for (auto n : plan.u_sequence()) std::cout << ' ' << n;
    std::cout << "  stages:";
    for (const auto& l : plan.levels) std::cout << ' ' << (l.fully_expanded() ? "FES" : "SES");
    std::cout << "\n";

    std::cout << "spectral efficiency: eta_u = " << spectral_efficiency(sys.cfg)
              << " bpcu per user, " << sys.cfg.users * spectral_efficiency(sys.cfg)
              << " bpcu total\n";
    std::cout << "all invariants hold\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SM-SCMA uplink link-level simulator"};
    app.require_subcommand(1);

    std::string config_path, codebook_path, manifest_path;
    std::string sim_out = "simulate.csv", nom_out = "nom.csv", cx_out;
    std::string decoders_flag, snr_flag;
    std::optional<std::uint64_t> trials_flag, seed_flag;
    std::optional<std::uint32_t> workers_flag;
    bool noiseless = false;
    std::string trace_path;
    std::vector<std::string> rho_specs;

    auto* sim = app.add_subcommand("simulate", "Monte-Carlo BER sweep over the SNR grid");
    sim->add_option("--config", config_path, "JSON config file");
    sim->add_option("--from-manifest", manifest_path, "re-run a previous run's manifest");
    sim->add_option("--codebook", codebook_path, "codebook JSON file (default: built-in)");
    sim->add_option("--decoders", decoders_flag, "comma list: ml,mpa,sud,msud,fcsd");
    sim->add_option("--snr", snr_flag, "start:step:stop in dB (overrides config)");
    sim->add_option("--trials", trials_flag, "trials per SNR point");
    sim->add_option("--seed", seed_flag, "base RNG seed (overrides config)");
    sim->add_option("--workers", workers_flag, "worker threads (default: env/hardware)");
    sim->add_flag("--noiseless", noiseless, "zero-noise run (single +inf SNR point)");
    sim->add_option("--out", sim_out, "output CSV path");
    sim->add_option("--dump-realizations", trace_path,
                    "also dump the first realizations per SNR point as JSON lines");

    auto* cx = app.add_subcommand("complexity", "formula vs measured operation counts");
    cx->add_option("--config", config_path, "JSON config file")->required();
    cx->add_option("--codebook", codebook_path, "codebook JSON file");
    cx->add_option("--out", cx_out, "output JSON path (default: stdout)");

    auto* nom = app.add_subcommand("nom", "tree-search misses versus the message-passing decoder");
    nom->add_option("--config", config_path, "JSON config file")->required();
    nom->add_option("--codebook", codebook_path, "codebook JSON file");
    nom->add_option("--rho", rho_specs, "survivor counts, e.g. 15,15,15 (repeatable)");
    nom->add_option("--snr", snr_flag, "start:step:stop in dB (overrides config)");
    nom->add_option("--trials", trials_flag, "trials per SNR point");
    nom->add_option("--workers", workers_flag, "worker threads");
    nom->add_option("--out", nom_out, "output CSV path");

    auto* val = app.add_subcommand("validate", "check config/codebook invariants and print the sets");
    val->add_option("--config", config_path, "JSON config file")->required();
    val->add_option("--codebook", codebook_path, "codebook JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sim->parsed()) {
            if (config_path.empty() && manifest_path.empty())
                throw ConfigError("simulate requires --config or --from-manifest");
            return cmd_simulate(config_path, manifest_path, codebook_path, decoders_flag, snr_flag,
                                trials_flag, seed_flag, workers_flag, noiseless, sim_out,
                                trace_path);
        }
        if (cx->parsed()) return cmd_complexity(config_path, codebook_path, cx_out);
        if (nom->parsed())
            return cmd_nom(config_path, codebook_path, rho_specs, snr_flag, trials_flag,
                           workers_flag, nom_out);
        if (val->parsed()) return cmd_validate(config_path, codebook_path);
    } catch (const GuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
