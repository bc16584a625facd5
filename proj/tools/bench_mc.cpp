// Times the OpenMP Monte Carlo path against the serial reference and checks
// that both produce the same aggregate.

#include "codedfog/straggler.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
    const std::int64_t trials = argc > 1 ? std::atoll(argv[1]) : 2000000;
    const codedfog::ShiftedExponential model{1.0, 1.0};
    const codedfog::ExecutionScheme scheme{codedfog::SchemeKind::Mds, 20, 10};

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto serial = codedfog::scheme_latency_mc_serial(scheme, model, trials, 42);
    const auto t1 = clock::now();
    const auto parallel = codedfog::scheme_latency_mc(scheme, model, trials, 42);
    const auto t2 = clock::now();

    const double serialMs = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const double parallelMs = std::chrono::duration<double, std::milli>(t2 - t1).count();
    std::printf("trials=%lld scheme=mds(n=20,k=10)\n", static_cast<long long>(trials));
    std::printf("serial:   %10.2f ms  mean=%.12f\n", serialMs, serial.mcMean);
    std::printf("parallel: %10.2f ms  mean=%.12f  speedup=%.2fx\n", parallelMs, parallel.mcMean,
                serialMs / parallelMs);
    if (serial.mcMean != parallel.mcMean || serial.mcStdErr != parallel.mcStdErr) {
        std::printf("MISMATCH between serial and parallel aggregates\n");
        return 1;
    }
    std::printf("aggregates identical\n");
    return 0;
}
