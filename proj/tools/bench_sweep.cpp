// Times the serial reference sweep against the OpenMP sweep on the same
// workload and checks that their outputs agree byte for byte.

#include <chrono>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "smscma/harness.hpp"
#include "smscma/report.hpp"

using namespace smscma;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    std::uint64_t trials = 2000;
    if (argc > 1) trials = std::stoull(argv[1]);

    SystemConfig cfg;
    cfg.users = 6;
    cfg.ores = 4;
    cfg.codewords = 2;
    cfg.tx_antennas = 4;
    cfg.rx_antennas = 4;
    cfg.mpa_iters = 5;
    cfg.msud_iters = 4;
    cfg.rho = {35, 70, 50};
    cfg.snr_db_list = {8.0};
    cfg.seed = 7;
    const System sys = make_default_system(cfg);
    const std::vector<DecoderId> decoders{DecoderId::Mpa, DecoderId::Sud, DecoderId::Msud,
                                          DecoderId::Fcsd};

#ifdef _OPENMP
    const std::uint32_t workers = static_cast<std::uint32_t>(omp_get_max_threads());
#else
    const std::uint32_t workers = 1;
#endif

    std::cout << "trials=" << trials << " decoders=mpa,sud,msud,fcsd snr=8dB workers=" << workers
              << "\n";

    auto t0 = std::chrono::steady_clock::now();
    const SweepResult serial = run_sweep_serial(sys, decoders, cfg.snr_db_list, trials);
    const double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const SweepResult parallel = run_sweep_parallel(sys, decoders, cfg.snr_db_list, trials, workers);
    const double t_parallel = seconds_since(t0);

    const bool identical = sweep_to_csv(serial) == sweep_to_csv(parallel);
    std::cout << "serial:   " << t_serial << " s (" << trials / t_serial << " trials/s)\n";
    std::cout << "parallel: " << t_parallel << " s (" << trials / t_parallel << " trials/s)\n";
    std::cout << "speedup:  " << t_serial / t_parallel << "x\n";
    std::cout << "outputs identical: " << (identical ? "yes" : "NO") << "\n";
    return identical ? 0 : 1;
}
