#include "smscma/report.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "smscma/errors.hpp"

namespace smscma {

using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string iso8601_utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string RunManifest::to_json() const {
    ordered_json j;
    j["tool"] = tool;
    j["version"] = version;
    j["created_utc"] = created_utc;
    j["config"] = ordered_json::parse(config_to_json(cfg, ""));
    j["codebook"] = ordered_json{{"source", codebook_source},
                                 {"fnv1a64", codebook_fnv1a64}};
    j["decoders"] = decoders;
    j["snr_db_list"] = snr_db_list;
    j["trials"] = trials;
    j["workers"] = workers;
    j["noiseless"] = noiseless;
    if (!nom_variant_names.empty()) {
        j["nom_variants"] = nom_variant_names;
        j["nom_rho_flat"] = nom_rho_flat;
    }
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
    RunManifest m;
    try {
        m.tool = j.at("tool").get<std::string>();
        m.version = j.at("version").get<std::string>();
        m.created_utc = j.value("created_utc", "");
        m.cfg = parse_config_json(j.at("config").dump()).cfg;
        m.codebook_source = j.at("codebook").at("source").get<std::string>();
        m.codebook_fnv1a64 = j.at("codebook").at("fnv1a64").get<std::uint64_t>();
        m.decoders = j.at("decoders").get<std::vector<std::string>>();
        m.snr_db_list = j.at("snr_db_list").get<std::vector<double>>();
        m.trials = j.at("trials").get<std::uint64_t>();
        m.workers = j.at("workers").get<std::uint32_t>();
        m.noiseless = j.at("noiseless").get<bool>();
        if (j.contains("nom_variants")) {
            m.nom_variant_names = j.at("nom_variants").get<std::vector<std::string>>();
            m.nom_rho_flat = j.at("nom_rho_flat").get<std::vector<std::uint64_t>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
    return m;
}

std::string sweep_to_csv(const SweepResult& sweep) {
    std::ostringstream out;
    out << "snr_db,decoder,trials,bit_errors,ber,ber_stderr,nom,adds_avg,muls_avg\n";
    for (const auto& p : sweep.points) {
        out << format_double(p.snr_db) << ',' << decoder_name(p.decoder) << ',' << p.trials << ','
            << p.bit_errors << ',' << format_double(p.ber(sweep.bits_per_trial)) << ','
            << format_double(p.ber_stderr(sweep.bits_per_trial)) << ',';
        if (p.has_nom) out << format_double(p.nom());
        out << ',';
        const double n = static_cast<double>(p.trials);
        out << format_double(n > 0 ? p.adds_total / n : 0.0) << ','
            << format_double(n > 0 ? p.muls_total / n : 0.0) << '\n';
    }
    return out.str();
}

std::string nom_to_csv(const NomResult& nom) {
    std::ostringstream out;
    out << "snr_db,variant,rho,trials,nom,nom_stderr\n";
    for (std::uint32_t s = 0; s < nom.snr_db_list.size(); ++s) {
        for (std::uint32_t v = 0; v < nom.variants.size(); ++v) {
            out << format_double(nom.snr_db_list[s]) << ',' << nom.variants[v].name << ',';
            if (nom.variants[v].rho) {
                const auto& rho = *nom.variants[v].rho;
                for (std::size_t i = 0; i < rho.size(); ++i) out << (i ? "|" : "") << rho[i];
            } else {
                out << "self";
            }
            out << ',' << nom.trials << ',' << format_double(nom.mean(s, v)) << ','
                << format_double(nom.stderr_of(s, v)) << '\n';
        }
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << bytes;
    if (!out) throw IoError("write failed: " + path);
}

} // namespace smscma
