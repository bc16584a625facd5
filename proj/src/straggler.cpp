#include "codedfog/straggler.hpp"

#include "codedfog/mapfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace codedfog {

void ShiftedExponential::validate() const {
    if (shift < 0.0) throw std::invalid_argument("ShiftedExponential: shift must be >= 0");
    if (rate <= 0.0) throw std::invalid_argument("ShiftedExponential: rate must be > 0");
}

double ShiftedExponential::sample(double work, std::uint64_t& state) const {
    // Uniform in (0, 1]; -log keeps the sample finite and >= 0.
    const double u = ((splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
    return work * shift + -std::log(u) * work / rate;
}

void ExecutionScheme::validate() const {
    if (n < 1 || k < 1) throw std::invalid_argument("ExecutionScheme: n and k must be >= 1");
    switch (kind) {
        case SchemeKind::Uncoded:
            if (k != n) throw std::invalid_argument("ExecutionScheme: uncoded requires k = n");
            break;
        case SchemeKind::Repetition:
            if (n % k != 0) throw std::invalid_argument("ExecutionScheme: repetition requires k | n");
            break;
        case SchemeKind::Mds:
            if (k > n) throw std::invalid_argument("ExecutionScheme: mds requires k <= n");
            break;
    }
}

double harmonic(int m) {
    double h = 0.0;
    for (int i = 1; i <= m; ++i) h += 1.0 / i;
    return h;
}

double exp_order_stat_mean(int n, int q, double rate) {
    if (q < 1 || q > n) throw std::invalid_argument("exp_order_stat_mean: need 1 <= q <= n");
    if (rate <= 0.0) throw std::invalid_argument("exp_order_stat_mean: rate must be > 0");
    return (harmonic(n) - harmonic(n - q)) / rate;
}

double scheme_latency_analytic(const ExecutionScheme& scheme, const ShiftedExponential& model) {
    scheme.validate();
    model.validate();
    const double s = model.shift;
    const double lambda = model.rate;
    const int n = scheme.n;
    const int k = scheme.k;
    switch (scheme.kind) {
        case SchemeKind::Uncoded:
            return s / n + harmonic(n) / (lambda * n);
        case SchemeKind::Repetition:
            return s / k + harmonic(k) / (lambda * n);
        case SchemeKind::Mds:
            return s / k + (harmonic(n) - harmonic(n - k)) / (lambda * k);
    }
    return 0.0;
}

double scheme_trial(const ExecutionScheme& scheme, const ShiftedExponential& model,
                    std::uint64_t trialSeed) {
    const int n = scheme.n;
    const int k = scheme.k;
    const double work = 1.0 / k;   // k = n for uncoded
    std::uint64_t state = trialSeed;
    switch (scheme.kind) {
        case SchemeKind::Uncoded: {
            double worst = 0.0;
            for (int i = 0; i < n; ++i) worst = std::max(worst, model.sample(1.0 / n, state));
            return worst;
        }
        case SchemeKind::Repetition: {
            // n/k copies per group; done when every group finished at least once.
            const int g = n / k;
            double worstGroup = 0.0;
            for (int grp = 0; grp < k; ++grp) {
                double firstCopy = std::numeric_limits<double>::infinity();
                for (int c = 0; c < g; ++c) firstCopy = std::min(firstCopy, model.sample(work, state));
                worstGroup = std::max(worstGroup, firstCopy);
            }
            return worstGroup;
        }
        case SchemeKind::Mds: {
            std::vector<double> t(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = model.sample(work, state);
            std::nth_element(t.begin(), t.begin() + (k - 1), t.end());
            return t[static_cast<std::size_t>(k - 1)];
        }
    }
    return 0.0;
}

namespace {

LatencyEstimate aggregate(const ExecutionScheme& scheme, const ShiftedExponential& model,
                          const std::vector<double>& samples) {
    LatencyEstimate est;
    est.trials = static_cast<std::int64_t>(samples.size());
    est.analyticMean = scheme_latency_analytic(scheme, model);
    double sum = 0.0;
    for (double v : samples) sum += v;
    est.mcMean = sum / static_cast<double>(samples.size());
    double ss = 0.0;
    for (double v : samples) ss += (v - est.mcMean) * (v - est.mcMean);
    if (samples.size() > 1) {
        est.mcStdErr = std::sqrt(ss / (static_cast<double>(samples.size()) - 1.0) /
                                 static_cast<double>(samples.size()));
    }
    return est;
}

}  // namespace

LatencyEstimate scheme_latency_mc(const ExecutionScheme& scheme, const ShiftedExponential& model,
                                  std::int64_t trials, std::uint64_t seed) {
    scheme.validate();
    model.validate();
    if (trials < 1) throw std::invalid_argument("scheme_latency_mc: trials must be >= 1");
    std::vector<double> samples(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < trials; ++t) {
        samples[static_cast<std::size_t>(t)] =
            scheme_trial(scheme, model, derive_seed(seed, static_cast<std::uint64_t>(t)));
    }
    return aggregate(scheme, model, samples);
}

LatencyEstimate scheme_latency_mc_serial(const ExecutionScheme& scheme, const ShiftedExponential& model,
                                         std::int64_t trials, std::uint64_t seed) {
    scheme.validate();
    model.validate();
    if (trials < 1) throw std::invalid_argument("scheme_latency_mc_serial: trials must be >= 1");
    std::vector<double> samples(static_cast<std::size_t>(trials));
    for (std::int64_t t = 0; t < trials; ++t) {
        samples[static_cast<std::size_t>(t)] =
            scheme_trial(scheme, model, derive_seed(seed, static_cast<std::uint64_t>(t)));
    }
    return aggregate(scheme, model, samples);
}

OptimalMds optimal_mds_k(int n, const ShiftedExponential& model) {
    if (n < 1) throw std::invalid_argument("optimal_mds_k: n must be >= 1");
    model.validate();
    const double uncoded =
        scheme_latency_analytic({SchemeKind::Uncoded, n, n}, model);
    OptimalMds best;
    double bestLatency = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n; ++k) {
        const double latency = scheme_latency_analytic({SchemeKind::Mds, n, k}, model);
        if (latency <= bestLatency) {   // ties toward larger k
            bestLatency = latency;
            best.kStar = k;
        }
    }
    best.speedup = uncoded / bestLatency;
    return best;
}

}  // namespace codedfog
