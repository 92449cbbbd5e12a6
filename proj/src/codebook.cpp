#include "smscma/codebook.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "smscma/errors.hpp"

namespace smscma {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

double average_codeword_energy(const CodebookSet& cb, std::uint32_t u) {
    double e = 0.0;
    for (std::uint32_t m = 0; m < cb.codewords; ++m)
        for (std::uint32_t r = 0; r < cb.ores; ++r) e += std::norm(cb.entry(u, r, m));
    return e / cb.codewords;
}

} // namespace

void CodebookSet::validate(const IndicatorMatrix& f) const {
    if (users != f.users || ores != f.ores)
        throw ConfigError("codebook dimensions do not match the indicator matrix");
    if (codewords == 0) throw ConfigError("codebook has no codewords");
    if (books.size() != users) throw ConfigError("codebook count does not match U");

    for (std::uint32_t u = 0; u < users; ++u) {
        if (books[u].size() != static_cast<std::size_t>(ores) * codewords)
            throw ConfigError("codebook " + std::to_string(u + 1) + " has wrong dimensions");
        for (std::uint32_t m = 0; m < codewords; ++m) {
            double cw_energy = 0.0;
            for (std::uint32_t r = 0; r < ores; ++r) {
                const cplx v = entry(u, r, m);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw ConfigError("codebook entry is not finite");
                if (!f.at(r, u)) {
                    if (v != cplx{0.0, 0.0})
                        throw ConfigError("codebook " + std::to_string(u + 1) +
                                          " is non-zero where the indicator matrix is zero");
                } else if (std::norm(v) < 1e-24) {
                    throw ConfigError("codebook " + std::to_string(u + 1) +
                                      " has a zero entry at an occupied position");
                }
                cw_energy += std::norm(v);
            }
            if (cw_energy < 1e-24)
                throw ConfigError("codebook " + std::to_string(u + 1) + " contains an all-zero codeword");
        }
        const double avg = average_codeword_energy(*this, u);
        if (std::abs(avg - 1.0) > 1e-9)
            throw ConfigError("codebook " + std::to_string(u + 1) +
                              " average codeword energy is not 1");
    }
}

CodebookSet make_default_codebooks(const IndicatorMatrix& f, std::uint32_t codewords) {
    if (codewords != 2 && codewords != 4)
        throw ConfigError("built-in codebooks support M = 2 or 4 only");
    const FactorGraphSets sets = derive_factor_graph(f);

    CodebookSet cb;
    cb.users = f.users;
    cb.ores = f.ores;
    cb.codewords = codewords;
    cb.books.assign(f.users, std::vector<cplx>(static_cast<std::size_t>(f.ores) * codewords, {0.0, 0.0}));

    // 4-point base constellation; M = 2 uses the antipodal pair.
    const double scale = 1.0 / std::sqrt(static_cast<double>(sets.d_v));
    for (std::uint32_t u = 0; u < f.users; ++u) {
        const auto& rows = sets.user_ores[u];
        for (std::uint32_t p = 0; p < rows.size(); ++p) {
            const double rot = M_PI * (u * sets.d_v + p) / (2.0 * f.users * sets.d_v);
            for (std::uint32_t m = 0; m < codewords; ++m) {
                const std::uint32_t base = codewords == 2 ? 2 * m : m;
                const double ph = M_PI_2 * base + rot;
                cb.books[u][rows[p] * codewords + m] = scale * cplx{std::cos(ph), std::sin(ph)};
            }
        }
    }
    cb.validate(f);
    return cb;
}

namespace {

IndicatorMatrix indicator_from_json(const json& j) {
    IndicatorMatrix f;
    const auto& rows = j.at("F");
    if (!rows.is_array() || rows.empty()) throw ConfigError("codebook file: F must be a non-empty array");
    f.ores = static_cast<std::uint32_t>(rows.size());
    f.users = static_cast<std::uint32_t>(rows.at(0).size());
    for (const auto& row : rows) {
        if (row.size() != f.users) throw ConfigError("codebook file: ragged F rows");
        for (const auto& v : row) f.a.push_back(v.get<std::uint8_t>());
    }
    return f;
}

} // namespace

CodebookLoad parse_codebook_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("codebook file: ") + e.what());
    }

    CodebookLoad out;
    try {
        out.indicator = indicator_from_json(j);
        out.indicator.validate();

        CodebookSet& cb = out.books;
        cb.users = j.at("U").get<std::uint32_t>();
        cb.ores = j.at("R").get<std::uint32_t>();
        cb.codewords = j.at("M").get<std::uint32_t>();
        if (cb.users != out.indicator.users || cb.ores != out.indicator.ores)
            throw ConfigError("codebook file: U/R fields disagree with F");

        const auto& books = j.at("books");
        if (books.size() != cb.users) throw ConfigError("codebook file: books count != U");
        cb.books.resize(cb.users);
        for (std::uint32_t u = 0; u < cb.users; ++u) {
            const auto& rows = books.at(u);
            if (rows.size() != cb.ores) throw ConfigError("codebook file: book row count != R");
            cb.books[u].assign(static_cast<std::size_t>(cb.ores) * cb.codewords, {0.0, 0.0});
            for (std::uint32_t r = 0; r < cb.ores; ++r) {
                const auto& cols = rows.at(r);
                if (cols.size() != cb.codewords) throw ConfigError("codebook file: book column count != M");
                for (std::uint32_t m = 0; m < cb.codewords; ++m) {
                    const auto& pair = cols.at(m);
                    if (pair.size() != 2) throw ConfigError("codebook file: entries must be [re, im]");
                    cb.books[u][r * cb.codewords + m] = {pair.at(0).get<double>(),
                                                         pair.at(1).get<double>()};
                }
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("codebook file: ") + e.what());
    }

    // Re-normalize off-unit books before the strict validation pass.
    for (std::uint32_t u = 0; u < out.books.users; ++u) {
        const double avg = average_codeword_energy(out.books, u);
        if (avg < 1e-24) continue; // caught by validate below
        if (std::abs(avg - 1.0) > 1e-9) {
            const double s = 1.0 / std::sqrt(avg);
            for (auto& v : out.books.books[u]) v *= s;
            out.warnings.push_back("codebook " + std::to_string(u + 1) +
                                   " re-normalized to unit average energy (was " +
                                   std::to_string(avg) + ")");
        }
    }
    out.books.validate(out.indicator);
    return out;
}

CodebookLoad load_codebook_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open codebook file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_codebook_json(ss.str());
}

std::string codebook_to_json(const CodebookSet& books, const IndicatorMatrix& f) {
    ordered_json j;
    j["U"] = books.users;
    j["R"] = books.ores;
    j["M"] = books.codewords;
    ordered_json rows = ordered_json::array();
    for (std::uint32_t r = 0; r < f.ores; ++r) {
        ordered_json row = ordered_json::array();
        for (std::uint32_t u = 0; u < f.users; ++u) row.push_back(f.at(r, u));
        rows.push_back(row);
    }
    j["F"] = rows;
    ordered_json all = ordered_json::array();
    for (std::uint32_t u = 0; u < books.users; ++u) {
        ordered_json bu = ordered_json::array();
        for (std::uint32_t r = 0; r < books.ores; ++r) {
            ordered_json br = ordered_json::array();
            for (std::uint32_t m = 0; m < books.codewords; ++m) {
                const cplx v = books.entry(u, r, m);
                br.push_back(ordered_json::array({v.real(), v.imag()}));
            }
            bu.push_back(br);
        }
        all.push_back(bu);
    }
    j["books"] = all;
    return j.dump(2) + "\n";
}

} // namespace smscma
