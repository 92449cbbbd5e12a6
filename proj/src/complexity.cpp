#include "smscma/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smscma/decoders.hpp"
#include "smscma/errors.hpp"

namespace smscma {

ComplexityParams ComplexityParams::from_system(const System& sys) {
    ComplexityParams p;
    p.users = sys.cfg.users;
    p.ores = sys.cfg.ores;
    p.codewords = sys.cfg.codewords;
    p.tx_antennas = sys.cfg.tx_antennas;
    p.rx_antennas = sys.cfg.rx_antennas;
    p.d_f = sys.sets.d_f;
    p.d_v = sys.sets.d_v;
    return p;
}

namespace {

std::uint64_t ipow(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t v = 1;
    while (exp--) v *= base;
    return v;
}

} // namespace

OpCount formula_mpa(const ComplexityParams& p, std::uint32_t iterations) {
    const std::uint64_t edges = std::uint64_t{p.ores} * p.d_f;
    const std::uint64_t combos = ipow(p.message_count(), p.d_f);
    const std::uint64_t unit = std::uint64_t{2} * p.rx_antennas * (2 * p.d_f + 1); // N_r(4 d_f + 2)

    OpCount c;
    c.real_adds = edges * combos * (unit - 1) + std::uint64_t{iterations} * edges * (combos - 1);
    c.real_muls = edges * combos * (unit + std::uint64_t{iterations} * p.d_f + 1) +
                  std::uint64_t{p.message_count()} * (p.d_v - 1) *
                      (std::uint64_t{iterations} * edges + p.users);
    return c;
}

OpCount formula_sud(const ComplexityParams& p, const std::vector<std::uint32_t>& u_sequence) {
    const std::uint64_t unit = std::uint64_t{p.rx_antennas} * (4 * p.d_f + 2);
    std::uint64_t hypotheses = 0;
    for (auto u : u_sequence)
        if (u != 0) hypotheses += ipow(p.message_count(), u);

    OpCount c;
    c.real_adds = std::uint64_t{p.ores} * (2 * p.rx_antennas * p.d_f - 1) + (unit - 1) * hypotheses;
    c.real_muls = std::uint64_t{2} * p.ores * p.rx_antennas * p.d_f + unit * hypotheses;
    return c;
}

OpCount formula_msud(const ComplexityParams& p, const std::vector<std::uint32_t>& u_sequence,
                     std::uint32_t iterations) {
    const std::uint64_t unit = std::uint64_t{p.rx_antennas} * (4 * p.d_f + 2);
    std::uint64_t hypotheses = std::uint64_t{iterations} * p.users * p.message_count();
    for (auto u : u_sequence)
        if (u != 0) hypotheses += ipow(p.message_count(), u);

    OpCount c;
    c.real_adds = std::uint64_t{p.ores} * (2 * p.rx_antennas * p.d_f - 1) + (unit - 1) * hypotheses;
    c.real_muls = std::uint64_t{2} * p.ores * p.rx_antennas * p.d_f + unit * hypotheses;
    return c;
}

OpCount formula_fcsd(const ComplexityParams& p, const std::vector<std::uint32_t>& u_sequence,
                     std::vector<std::uint64_t> rho) {
    if (rho.size() + 1 != u_sequence.size())
        throw ConfigError("rho length must be one less than the level count");
    const std::uint64_t unit = std::uint64_t{p.rx_antennas} * (4 * p.d_f + 2);

    // Nodes per level, with rho clamped to [1, nodes available] as at runtime.
    std::uint64_t nodes = ipow(p.message_count(), u_sequence[0]);
    std::uint64_t visited = nodes;
    for (std::size_t lvl = 1; lvl < u_sequence.size(); ++lvl) {
        std::uint64_t keep = std::clamp<std::uint64_t>(rho[lvl - 1], 1, nodes);
        nodes = keep * ipow(p.message_count(), u_sequence[lvl]);
        visited += nodes;
    }

    OpCount c;
    c.real_adds =
        std::uint64_t{p.ores} * (2 * p.rx_antennas * p.d_f - 1) + (unit - p.ores - 2) * visited;
    c.real_muls = std::uint64_t{2} * p.ores * p.rx_antennas * p.d_f + unit * visited;
    return c;
}

// ---------------------------------------------------------------------------
// Marcum Q and the pruned-radius survival probability
// ---------------------------------------------------------------------------

namespace {

// log of the Poisson pmf at integer k, stable for any rate.
double log_pois(double rate, double k) {
    if (rate == 0.0) return k == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return -rate + k * std::log(rate) - std::lgamma(k + 1.0);
}

} // namespace

double marcum_q(std::uint32_t order, double a, double b) {
    if (order < 1) throw ConfigError("marcum_q order must be at least 1");
    if (!(a >= 0.0) || !(b >= 0.0)) throw ConfigError("marcum_q arguments must be non-negative");

    const double x = 0.5 * a * a; // outer Poisson rate
    const double yv = 0.5 * b * b;

    // Q_order(a,b) = sum_k Pois(k; x) * P[Pois(yv) <= order-1+k].
    // All terms are non-negative and the inner factor is <= 1, so truncating
    // once the neglected outer mass falls below tol bounds the error by tol.
    // Each pmf is evaluated from its logarithm, so large rates do not
    // underflow; the outer sum starts far enough below the mode that the
    // skipped left tail is negligible against tol.
    constexpr double tol = 1e-12;
    const double spread = 40.0 * std::sqrt(x) + 20.0;
    const std::uint64_t k_lo = x > spread ? static_cast<std::uint64_t>(x - spread) : 0;

    // Inner CDF at the starting k: P[Pois(yv) <= order-1+k_lo].
    double inner;
    {
        const double jmax = static_cast<double>(order - 1 + k_lo);
        const double jspread = 40.0 * std::sqrt(yv) + 20.0;
        if (jmax >= yv + jspread) {
            inner = 1.0;
        } else {
            const std::uint64_t j0 =
                yv > jspread ? static_cast<std::uint64_t>(yv - jspread) : 0;
            inner = 0.0;
            for (std::uint64_t j = j0; j <= order - 1 + k_lo; ++j)
                inner += std::exp(log_pois(yv, static_cast<double>(j)));
            inner = std::min(inner, 1.0);
        }
    }

    double q = 0.0;
    double outer_mass = 0.0;
    for (std::uint64_t k = k_lo; k <= k_lo + 400000; ++k) {
        if (k > k_lo)
            inner = std::min(
                inner + std::exp(log_pois(yv, static_cast<double>(order - 1 + k))), 1.0);
        const double w = std::exp(log_pois(x, static_cast<double>(k)));
        q += w * inner;
        outer_mass += w;
        if (outer_mass >= 1.0 - tol) break;
        if (static_cast<double>(k) > x + spread && w < 1e-18) break;
    }
    return std::min(q, 1.0);
}

double survival_probability(double alpha2, double sigma2, double gamma, std::uint32_t order) {
    if (!std::isfinite(alpha2) || !std::isfinite(sigma2) || !std::isfinite(gamma))
        throw ConfigError("survival_probability arguments must be finite");
    if (alpha2 < 0.0 || sigma2 < 0.0 || gamma < 0.0)
        throw ConfigError("survival_probability arguments must be non-negative");
    if (order < 1) throw ConfigError("survival_probability order must be at least 1");
    if (sigma2 == 0.0) return alpha2 <= gamma ? 1.0 : 0.0;

    const double sigma = std::sqrt(sigma2);
    const double a = std::sqrt(2.0 * alpha2) / sigma;
    const double b = std::sqrt(2.0 * gamma) / sigma;
    return 1.0 - marcum_q(order, a, b);
}

RadiusDiagnostic make_radius_diagnostic(std::uint32_t level, std::uint32_t rx_antennas,
                                        double alpha2, double sigma2, double gamma) {
    RadiusDiagnostic d;
    d.level = level;
    d.alpha2 = alpha2;
    d.sigma2 = sigma2;
    d.gamma = gamma;
    d.survival = survival_probability(alpha2, sigma2, gamma, level * rx_antennas);
    return d;
}

} // namespace smscma
