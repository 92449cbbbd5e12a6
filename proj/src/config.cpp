#include "smscma/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "smscma/errors.hpp"

namespace smscma {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void SystemConfig::validate(Strictness s) const {
    if (users == 0 || ores == 0) throw ConfigError("U and R must be positive");
    if (s == Strictness::Strict && users <= ores)
        throw ConfigError("overloaded system required: U must exceed R");
    if (!is_pow2(tx_antennas)) throw ConfigError("N_t must be a power of two");
    if (!is_pow2(codewords)) throw ConfigError("M must be a power of two");
    if (rx_antennas == 0) throw ConfigError("N_r must be positive");
    if (mpa_iters == 0) throw ConfigError("K_mpa must be at least 1");
    if (rho.size() != static_cast<std::size_t>(ores) - 1)
        throw ConfigError("rho must have exactly R-1 entries");
    for (auto v : rho)
        if (v < 1) throw ConfigError("rho entries must be at least 1");
    if (ml_guard == 0) throw ConfigError("ml_guard must be positive");
}

std::uint32_t spectral_efficiency(const SystemConfig& cfg) {
    return cfg.antenna_bits() + cfg.codeword_bits();
}

namespace {

[[noreturn]] void config_fail(const std::string& text, std::size_t byte, const std::string& what) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    throw ConfigError("config error at line " + std::to_string(line) + ": " + what);
}

template <typename T>
T field(const json& j, const std::string& text, const char* name) {
    if (!j.contains(name)) throw ConfigError(std::string("config error: missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: field '") + name + "': " + e.what());
    }
}

} // namespace

LoadedConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        config_fail(text, e.byte, e.what());
    }
    if (!j.is_object()) throw ConfigError("config error: top level must be an object");

    static const char* known[] = {"U",     "R",           "M",    "N_t",      "N_r",
                                  "K_mpa", "K_msud",      "rho",  "snr_db_list", "seed",
                                  "ml_guard", "codebook", "msud_schedule"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (auto* k : known) ok = ok || it.key() == k;
        if (!ok) throw ConfigError("config error: unknown field '" + it.key() + "'");
    }

    LoadedConfig out;
    SystemConfig& c = out.cfg;
    c.users = field<std::uint32_t>(j, text, "U");
    c.ores = field<std::uint32_t>(j, text, "R");
    c.codewords = field<std::uint32_t>(j, text, "M");
    c.tx_antennas = field<std::uint32_t>(j, text, "N_t");
    c.rx_antennas = field<std::uint32_t>(j, text, "N_r");
    c.mpa_iters = field<std::uint32_t>(j, text, "K_mpa");
    c.msud_iters = field<std::uint32_t>(j, text, "K_msud");
    c.rho = field<std::vector<std::uint64_t>>(j, text, "rho");
    c.snr_db_list = field<std::vector<double>>(j, text, "snr_db_list");
    c.seed = field<std::uint64_t>(j, text, "seed");
    if (j.contains("ml_guard")) c.ml_guard = field<std::uint64_t>(j, text, "ml_guard");
    if (j.contains("msud_schedule")) {
        const auto sched = field<std::string>(j, text, "msud_schedule");
        if (sched == "gauss_seidel")
            c.msud_gauss_seidel = true;
        else if (sched != "jacobi")
            throw ConfigError("config error: msud_schedule must be 'jacobi' or 'gauss_seidel'");
    }
    if (j.contains("codebook")) out.codebook_path = field<std::string>(j, text, "codebook");
    c.validate();
    return out;
}

LoadedConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

std::string config_to_json(const SystemConfig& cfg, const std::string& codebook_path) {
    ordered_json j;
    j["U"] = cfg.users;
    j["R"] = cfg.ores;
    j["M"] = cfg.codewords;
    j["N_t"] = cfg.tx_antennas;
    j["N_r"] = cfg.rx_antennas;
    j["K_mpa"] = cfg.mpa_iters;
    j["K_msud"] = cfg.msud_iters;
    j["rho"] = cfg.rho;
    j["snr_db_list"] = cfg.snr_db_list;
    j["seed"] = cfg.seed;
    j["ml_guard"] = cfg.ml_guard;
    j["msud_schedule"] = cfg.msud_gauss_seidel ? "gauss_seidel" : "jacobi";
    if (!codebook_path.empty()) j["codebook"] = codebook_path;
    return j.dump(2) + "\n";
}

} // namespace smscma
