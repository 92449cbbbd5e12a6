#include "smscma/indicator.hpp"

#include "smscma/errors.hpp"

namespace smscma {

std::uint32_t IndicatorMatrix::row_weight() const {
    std::uint32_t w = 0;
    for (std::uint32_t u = 0; u < users; ++u) w += at(0, u);
    return w;
}

std::uint32_t IndicatorMatrix::column_weight() const {
    std::uint32_t w = 0;
    for (std::uint32_t r = 0; r < ores; ++r) w += at(r, 0);
    return w;
}

void IndicatorMatrix::validate() const {
    if (ores == 0 || users == 0 || a.size() != static_cast<std::size_t>(ores) * users)
        throw ConfigError("indicator matrix has inconsistent dimensions");
    for (auto v : a)
        if (v > 1) throw ConfigError("indicator matrix entries must be 0 or 1");

    const std::uint32_t d_f = row_weight();
    for (std::uint32_t r = 0; r < ores; ++r) {
        std::uint32_t w = 0;
        for (std::uint32_t u = 0; u < users; ++u) w += at(r, u);
        if (w != d_f) throw ConfigError("indicator matrix row sums are not uniform");
    }
    const std::uint32_t d_v = column_weight();
    for (std::uint32_t u = 0; u < users; ++u) {
        std::uint32_t w = 0;
        for (std::uint32_t r = 0; r < ores; ++r) w += at(r, u);
        if (w != d_v) throw ConfigError("indicator matrix column sums are not uniform");
    }
    if (d_f == 0 || d_v == 0) throw ConfigError("indicator matrix must not have empty rows/columns");
}

IndicatorMatrix default_indicator() {
    IndicatorMatrix f;
    f.ores = 4;
    f.users = 6;
    f.a = {
        0, 1, 1, 0, 1, 0, //
        1, 0, 1, 0, 0, 1, //
        0, 1, 0, 1, 0, 1, //
        1, 0, 0, 1, 1, 0, //
    };
    return f;
}

FactorGraphSets derive_factor_graph(const IndicatorMatrix& f) {
    f.validate();

    FactorGraphSets sets;
    sets.users = f.users;
    sets.d_f = f.row_weight();
    sets.d_v = f.column_weight();
    sets.ore_users.resize(f.ores);
    sets.user_ores.resize(f.users);
    sets.slot.assign(static_cast<std::size_t>(f.ores) * f.users, FactorGraphSets::kNoSlot);

    for (std::uint32_t r = 0; r < f.ores; ++r) {
        for (std::uint32_t u = 0; u < f.users; ++u) {
            if (!f.at(r, u)) continue;
            sets.slot[r * f.users + u] = static_cast<std::uint8_t>(sets.ore_users[r].size());
            sets.ore_users[r].push_back(u);
            sets.user_ores[u].push_back(r);
        }
    }
    return sets;
}

} // namespace smscma
