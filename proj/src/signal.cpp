#include "smscma/signal.hpp"

#include "smscma/errors.hpp"

namespace smscma {

UserMessage map_bits(std::span<const std::uint8_t> bits, const SystemConfig& cfg) {
    if (bits.size() != cfg.bits_per_user())
        throw ConfigError("bit vector length must equal log2(N_t) + log2(M)");
    std::uint32_t v = 0;
    for (auto b : bits) v = (v << 1) | (b & 1u);
    return UserMessage::from_value(v, cfg.codewords);
}

std::vector<std::uint8_t> demap_bits(const UserMessage& msg, const SystemConfig& cfg) {
    const std::uint32_t n = cfg.bits_per_user();
    std::uint32_t v = msg.value(cfg.codewords);
    std::vector<std::uint8_t> bits(n);
    for (std::uint32_t i = 0; i < n; ++i) bits[n - 1 - i] = (v >> i) & 1u;
    return bits;
}

ChannelRealization draw_channel(Rng& rng, const SystemConfig& cfg) {
    ChannelRealization h;
    h.users = cfg.users;
    h.ores = cfg.ores;
    h.tx = cfg.tx_antennas;
    h.rx = cfg.rx_antennas;
    h.h_.resize(static_cast<std::size_t>(cfg.users) * cfg.ores * cfg.tx_antennas * cfg.rx_antennas);
    for (auto& v : h.h_) v = rng.cnormal();
    return h;
}

ReceivedSignal transmit_and_receive(const std::vector<UserMessage>& messages,
                                    const ChannelRealization& h,
                                    const FactorGraphSets& sets,
                                    const CodebookSet& books,
                                    double snr_db,
                                    Rng& rng) {
    const std::uint32_t ores = static_cast<std::uint32_t>(sets.ore_users.size());
    if (messages.size() != sets.user_ores.size())
        throw ConfigError("message count does not match user count");
    for (const auto& m : messages)
        if (m.antenna >= h.tx || m.codeword >= books.codewords)
            throw ConfigError("message index out of range");

    ReceivedSignal out;
    out.ores = ores;
    out.rx = h.rx;
    out.sigma2 = noise_variance(snr_db);
    out.y_.assign(static_cast<std::size_t>(ores) * h.rx, {0.0, 0.0});

    const double sigma = std::sqrt(out.sigma2);
    for (std::uint32_t r = 0; r < ores; ++r) {
        for (std::uint32_t nr = 0; nr < h.rx; ++nr) {
            cplx acc{0.0, 0.0};
            for (std::uint32_t u : sets.ore_users[r])
                acc += h.h(u, r, messages[u].antenna, nr) * books.entry(u, r, messages[u].codeword);
            if (sigma > 0.0) acc += sigma * rng.cnormal();
            out.y(r, nr) = acc;
        }
    }
    return out;
}

} // namespace smscma
