#pragma once

#include <cstdint>
#include <vector>

namespace codedfog {

/// Runtime law: a task of work w runs for w*s plus an exponential tail of
/// rate lambda/w (mean w/lambda).
struct ShiftedExponential {
    double shift = 0.0;    ///< s, seconds per unit work
    double rate = 1.0;     ///< lambda, per second per unit work

    void validate() const;

    /// One sampled duration for a task of work w, from the given stream.
    double sample(double work, std::uint64_t& state) const;
};

enum class SchemeKind { Uncoded, Repetition, Mds };

struct ExecutionScheme {
    SchemeKind kind = SchemeKind::Uncoded;
    int n = 1;   ///< nodes
    int k = 1;   ///< source tasks (k = n for uncoded; k | n for repetition)

    void validate() const;
};

struct LatencyEstimate {
    double analyticMean = 0.0;
    double mcMean = 0.0;
    double mcStdErr = 0.0;
    std::int64_t trials = 0;
};

/// H_m by direct summation.
double harmonic(int m);

/// Mean of the q-th smallest of n iid Exp(rate): (H_n - H_{n-q}) / rate.
double exp_order_stat_mean(int n, int q, double rate);

double scheme_latency_analytic(const ExecutionScheme& scheme, const ShiftedExponential& model);

/// One simulated job completion time.
double scheme_trial(const ExecutionScheme& scheme, const ShiftedExponential& model,
                    std::uint64_t trialSeed);

/// Monte Carlo estimate. Per-trial derived seeds; the aggregate is
/// bit-identical whether trials run serially or under OpenMP.
LatencyEstimate scheme_latency_mc(const ExecutionScheme& scheme, const ShiftedExponential& model,
                                  std::int64_t trials, std::uint64_t seed);

/// Serial reference kept for testing the parallel path.
LatencyEstimate scheme_latency_mc_serial(const ExecutionScheme& scheme, const ShiftedExponential& model,
                                         std::int64_t trials, std::uint64_t seed);

struct OptimalMds {
    int kStar = 1;
    double speedup = 1.0;   ///< uncoded latency / best MDS latency
};

/// Exhaustive scan over k; ties broken toward larger k.
OptimalMds optimal_mds_k(int n, const ShiftedExponential& model);

}  // namespace codedfog
