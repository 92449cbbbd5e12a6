#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "smscma/opcount.hpp"

namespace smscma {

struct System;

// Scalars the closed-form complexity expressions depend on.
struct ComplexityParams {
    std::uint32_t users = 0;       // U
    std::uint32_t ores = 0;        // R
    std::uint32_t codewords = 0;   // M
    std::uint32_t tx_antennas = 0; // N_t
    std::uint32_t rx_antennas = 0; // N_r
    std::uint32_t d_f = 0;
    std::uint32_t d_v = 0;

    std::uint32_t message_count() const { return tx_antennas * codewords; }
    static ComplexityParams from_system(const System& sys);
};

// Closed-form operation counts per decode.
OpCount formula_mpa(const ComplexityParams& p, std::uint32_t iterations);
// u_sequence: newly estimated users per visited ORE (see build_tree_levels).
OpCount formula_sud(const ComplexityParams& p, const std::vector<std::uint32_t>& u_sequence);
OpCount formula_msud(const ComplexityParams& p, const std::vector<std::uint32_t>& u_sequence,
                     std::uint32_t iterations);
// rho entries are clamped to [1, nodes available at that level], matching the
// decoder's runtime behaviour.
OpCount formula_fcsd(const ComplexityParams& p, const std::vector<std::uint32_t>& u_sequence,
                     std::vector<std::uint64_t> rho);

// Generalized Marcum Q of integer order nu >= 1, computed by the
// non-negative Poisson-mixture series truncated once the neglected outer
// mass drops below 1e-12.
double marcum_q(std::uint32_t order, double a, double b);

// Probability that an accumulated tree metric with non-centrality alpha2 at
// a level of order r*N_r stays within the pruning radius gamma:
// 1 - Q_order(alpha*sqrt(2)/sigma, sqrt(2*gamma)/sigma). Throws ConfigError
// on non-finite inputs.
double survival_probability(double alpha2, double sigma2, double gamma, std::uint32_t order);

// Pruned-radius diagnostic record for one tree level.
struct RadiusDiagnostic {
    std::uint32_t level = 0; // 1-based tree level r
    double alpha2 = 0.0;
    double sigma2 = 0.0;
    double gamma = 0.0;
    double survival = 0.0;
};
RadiusDiagnostic make_radius_diagnostic(std::uint32_t level, std::uint32_t rx_antennas,
                                        double alpha2, double sigma2, double gamma);

// Formula and instrumented counts per decoder for one system, plus the fixed
// comparison tables over N_r in {2,4,6,10} at both shipped spectral
// efficiencies; serialized as a JSON report by the CLI.
struct DecoderComplexityRow {
    std::string decoder;
    OpCount formula;  // zero for decoders without a closed form
    OpCount measured;
    bool has_formula = false;
};
std::vector<DecoderComplexityRow> complexity_rows(const System& sys, bool include_ml);
std::string complexity_report_json(const System& sys);

} // namespace smscma
