#include "codedfog/unified.hpp"

#include "codedfog/mapfn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace codedfog {

namespace {

std::uint32_t subset_mask(const Subset& s) {
    std::uint32_t mask = 0;
    for (int v : s) mask |= 1u << (v - 1);
    return mask;
}

template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - (k - i)) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace

void UnifiedSpec::validate() const {
    if (K < 2) throw std::invalid_argument("UnifiedSpec: K must be >= 2");
    if (m < 1) throw std::invalid_argument("UnifiedSpec: m must be >= 1");
    if (mu < Rational(1, K) || mu > Rational(1)) {
        throw std::invalid_argument("UnifiedSpec: mu must satisfy 1/K <= mu <= 1");
    }
    const Rational muq = mu * Rational(q);
    if (muq.denominator() != 1 || muq.numerator() < 1) {
        throw std::invalid_argument("plan infeasible: mu*q must be a positive integer");
    }
    // q >= ceil(1/mu)
    const BigInt num = mu.numerator();
    const BigInt den = mu.denominator();
    const BigInt qmin = (den + num - 1) / num;
    if (BigInt(q) < qmin || q > K) {
        throw std::invalid_argument("plan infeasible: q must satisfy ceil(1/mu) <= q <= K");
    }
    if ((static_cast<std::int64_t>(K) * m) % q != 0) {
        throw std::invalid_argument("plan infeasible: (K/q)*m must be an integer");
    }
    const auto nTasks = coded_tasks();
    const auto subsets = static_cast<std::int64_t>(binomial(K, hosts_per_task()));
    if (nTasks % subsets != 0) {
        throw std::invalid_argument("plan infeasible: (K/q)*m must be divisible by C(K, mu*q) = " +
                                    std::to_string(subsets));
    }
    const Rational perNode = mu * Rational(m);
    if (perNode.denominator() != 1) {
        throw std::invalid_argument("plan infeasible: mu*m per-node task count must be an integer");
    }
}

int UnifiedSpec::hosts_per_task() const {
    const Rational muq = mu * Rational(q);
    return muq.numerator().convert_to<int>();
}

std::int64_t UnifiedSpec::coded_tasks() const {
    return static_cast<std::int64_t>(K) * m / q;
}

std::int64_t UnifiedSpec::tasks_per_subset() const {
    return coded_tasks() / static_cast<std::int64_t>(binomial(K, hosts_per_task()));
}

std::int64_t UnifiedSpec::tasks_per_node() const {
    return ((mu * Rational(m)).numerator()).convert_to<std::int64_t>();
}

UnifiedPlan build_unified_plan(const UnifiedSpec& spec, Field field, std::uint64_t seed,
                               std::int64_t materializeLimit) {
    spec.validate();
    UnifiedPlan plan;
    plan.spec = spec;
    plan.codedTaskCount = spec.coded_tasks();
    plan.tasksPerSubset = spec.tasks_per_subset();
    plan.hostSubsets = enumerate_subsets(spec.K, spec.hosts_per_task());
    const bool fits = plan.codedTaskCount <= materializeLimit &&
                      (field == Field::Real || plan.codedTaskCount <= 255);
    if (fits) {
        plan.code = make_mds(static_cast<int>(plan.codedTaskCount), static_cast<int>(spec.m),
                             field, seed);
    }
    return plan;
}

std::int64_t coverage_min(const UnifiedPlan& plan) {
    const auto& spec = plan.spec;
    std::vector<std::uint32_t> hostMasks;
    hostMasks.reserve(plan.hostSubsets.size());
    for (const auto& h : plan.hostSubsets) hostMasks.push_back(subset_mask(h));

    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& F : enumerate_subsets(spec.K, spec.q)) {
        const std::uint32_t fmask = subset_mask(F);
        std::int64_t disjoint = 0;
        for (std::uint32_t h : hostMasks) {
            if ((h & fmask) == 0) ++disjoint;
        }
        best = std::min(best, plan.codedTaskCount - plan.tasksPerSubset * disjoint);
    }
    return best;
}

UnifiedLoadReport shuffle_load(const UnifiedPlan& plan, const Subset& finishers,
                               DemandModel demand) {
    const auto& spec = plan.spec;
    if (static_cast<int>(finishers.size()) != spec.q) {
        throw std::invalid_argument("shuffle_load: finisher set must have q nodes");
    }
    UnifiedLoadReport report;
    if (demand == DemandModel::ClientCollects) {
        return report;   // results go straight to the client; no peer traffic
    }

    const int muq = spec.hosts_per_task();
    const std::int64_t t = plan.tasksPerSubset;
    const std::uint32_t fmask = subset_mask(finishers);

    // Host subsets grouped by availability level |hosts & F|, lex order kept.
    std::vector<std::vector<std::uint32_t>> levelMasks(static_cast<std::size_t>(muq) + 1);
    for (const auto& h : plan.hostSubsets) {
        const std::uint32_t inter = subset_mask(h) & fmask;
        levelMasks[static_cast<std::size_t>(std::popcount(inter))].push_back(inter);
    }

    // Select m results, highest availability first; within the partial level
    // the round-robin task ids put full rounds first, then the lex-smallest
    // subsets of the final round.
    std::vector<std::unordered_map<std::uint32_t, std::int64_t>> counts(
        static_cast<std::size_t>(muq) + 1);
    std::int64_t remaining = spec.m;
    int minLevel = 0;
    for (int a = muq; a >= 1 && remaining > 0; --a) {
        const auto& masks = levelMasks[static_cast<std::size_t>(a)];
        if (masks.empty()) continue;
        const std::int64_t levelTotal = t * static_cast<std::int64_t>(masks.size());
        auto& c = counts[static_cast<std::size_t>(a)];
        if (remaining >= levelTotal) {
            for (std::uint32_t mask : masks) c[mask] += t;
            remaining -= levelTotal;
        } else {
            const std::int64_t fullRounds = remaining / static_cast<std::int64_t>(masks.size());
            std::int64_t extra = remaining % static_cast<std::int64_t>(masks.size());
            for (std::uint32_t mask : masks) {
                std::int64_t sel = fullRounds + (extra > 0 ? 1 : 0);
                if (extra > 0) --extra;
                if (sel > 0) c[mask] += sel;
            }
            remaining = 0;
        }
        minLevel = a;
    }
    if (remaining > 0) {
        throw std::runtime_error("shuffle_load: coverage violation, finishers hold only " +
                                 std::to_string(spec.m - remaining) + " of " +
                                 std::to_string(spec.m) + " results");
    }
    report.minSelectedAvailability = minLevel;

    // Coded multicast per level a >= 2: over every (a+1)-subset S of F, each
    // sender ships one XOR of 1/a segments, padded to the largest term.
    const std::vector<int>& F = finishers;
    const int q = spec.q;
    for (int a = muq; a >= 2; --a) {
        const auto& c = counts[static_cast<std::size_t>(a)];
        if (c.empty()) continue;
        std::int64_t sumMax = 0;
        for_each_combination(q, a + 1, [&](const std::vector<int>& idx) {
            std::uint32_t smask = 0;
            for (int i : idx) smask |= 1u << (F[static_cast<std::size_t>(i)] - 1);
            for (int j : idx) {
                const std::uint32_t without = smask & ~(1u << (F[static_cast<std::size_t>(j)] - 1));
                // sender F[j]; terms are the known-sets S \ {k} for k != j
                std::int64_t maxTerm = 0;
                for (int ki : idx) {
                    if (ki == j) continue;
                    const std::uint32_t known = smask & ~(1u << (F[static_cast<std::size_t>(ki)] - 1));
                    const auto it = c.find(known);
                    if (it != c.end()) maxTerm = std::max(maxTerm, it->second);
                }
                (void)without;
                sumMax += maxTerm;
            }
        });
        if (sumMax > 0) report.multicastUnits += Rational(sumMax, a);
    }

    // Residual: results known by a single finisher are unicast to the rest.
    {
        const auto& c = counts[1];
        std::int64_t singles = 0;
        for (const auto& [mask, cnt] : c) singles += cnt;
        report.unicastUnits = Rational(singles * (q - 1));
    }

    report.totalUnits = report.multicastUnits + report.unicastUnits;
    report.normalizedLoad = report.totalUnits / Rational(BigInt(q) * spec.m);
    return report;
}

double map_phase_latency_analytic(const UnifiedSpec& spec, const ShiftedExponential& model) {
    const double w = to_double(spec.mu);
    return w * model.shift + exp_order_stat_mean(spec.K, spec.q, model.rate / w);
}

LatencyEstimate map_phase_latency(const UnifiedSpec& spec, const ShiftedExponential& model,
                                  std::int64_t trials, std::uint64_t seed) {
    spec.validate();
    model.validate();
    if (trials < 1) throw std::invalid_argument("map_phase_latency: trials must be >= 1");
    const double w = to_double(spec.mu);
    std::vector<double> samples(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        std::uint64_t state = derive_seed(seed, static_cast<std::uint64_t>(trial), 0x756e6966u);
        std::vector<double> done(static_cast<std::size_t>(spec.K));
        for (auto& d : done) d = model.sample(w, state);
        std::nth_element(done.begin(), done.begin() + (spec.q - 1), done.end());
        samples[static_cast<std::size_t>(trial)] = done[static_cast<std::size_t>(spec.q - 1)];
    }
    LatencyEstimate est;
    est.trials = trials;
    est.analyticMean = map_phase_latency_analytic(spec, model);
    double sum = 0.0;
    for (double v : samples) sum += v;
    est.mcMean = sum / static_cast<double>(trials);
    double ss = 0.0;
    for (double v : samples) ss += (v - est.mcMean) * (v - est.mcMean);
    if (trials > 1) {
        est.mcStdErr = std::sqrt(ss / (static_cast<double>(trials) - 1.0) / static_cast<double>(trials));
    }
    return est;
}

std::vector<int> feasible_q_values(int K, const Rational& mu, std::int64_t m) {
    std::vector<int> out;
    for (int q = 1; q <= K; ++q) {
        UnifiedSpec spec{K, mu, m, q};
        try {
            spec.validate();
        } catch (const std::invalid_argument&) {
            continue;
        }
        out.push_back(q);
    }
    return out;
}

SweepResult tradeoff_sweep(const SweepConfig& config) {
    const auto qs = feasible_q_values(config.K, config.mu, config.m);
    if (qs.empty()) throw std::runtime_error("tradeoff_sweep: no feasible q values");

    const double totalValueBits =
        static_cast<double>(config.rows) * static_cast<double>(config.entryBits);
    SweepResult result;
    double bestTotal = std::numeric_limits<double>::infinity();
    for (int q : qs) {
        UnifiedSpec spec{config.K, config.mu, config.m, q};
        UnifiedPlan plan = build_unified_plan(spec, Field::Real, config.seed, 0);

        // Average the load over finisher sets: exhaustive when cheap,
        // otherwise a fixed-seed sample.
        Rational loadSum{0};
        std::int64_t loadCount = 0;
        if (binomial(config.K, q) <= 1000) {
            for (const auto& F : enumerate_subsets(config.K, q)) {
                loadSum += shuffle_load(plan, F, config.demand).normalizedLoad;
                ++loadCount;
            }
        } else {
            std::uint64_t state = derive_seed(config.seed, static_cast<std::uint64_t>(q), 0x73616d70u);
            std::vector<int> nodes(static_cast<std::size_t>(config.K));
            for (int i = 0; i < config.K; ++i) nodes[static_cast<std::size_t>(i)] = i + 1;
            for (int sampleIdx = 0; sampleIdx < config.finisherSamples; ++sampleIdx) {
                for (int i = config.K - 1; i > 0; --i) {
                    const int j = static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(i + 1));
                    std::swap(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
                }
                Subset F(nodes.begin(), nodes.begin() + q);
                std::sort(F.begin(), F.end());
                loadSum += shuffle_load(plan, F, config.demand).normalizedLoad;
                ++loadCount;
            }
        }
        TradeoffPoint point;
        point.q = q;
        point.mapLatency = map_phase_latency_analytic(spec, config.model);
        point.normalizedLoad = loadSum / Rational(loadCount);
        point.shuffleTime = to_double(point.normalizedLoad) * totalValueBits / config.networkRateBps;
        point.totalTime = point.mapLatency + point.shuffleTime;
        if (point.totalTime < bestTotal) {
            bestTotal = point.totalTime;
            result.qStar = q;
        }
        result.points.push_back(point);
    }
    return result;
}

ComputationLoadChoice optimal_computation_load(double tTask, double tData, int K) {
    if (tTask <= 0.0) throw std::invalid_argument("optimal_computation_load: tTask must be > 0");
    if (tData < 0.0) throw std::invalid_argument("optimal_computation_load: tData must be >= 0");
    if (K < 1) throw std::invalid_argument("optimal_computation_load: K must be >= 1");
    ComputationLoadChoice choice;
    choice.continuous = std::clamp(std::sqrt(tData / tTask), 1.0, static_cast<double>(K));
    const auto total = [&](int r) { return r * tTask + tData / r; };
    const int lo = std::clamp(static_cast<int>(std::floor(choice.continuous)), 1, K);
    const int hi = std::clamp(static_cast<int>(std::ceil(choice.continuous)), 1, K);
    choice.rStar = total(lo) <= total(hi) ? lo : hi;
    choice.totalCoded = total(choice.rStar);
    choice.totalUncoded = tTask + tData;
    return choice;
}

}  // namespace codedfog
