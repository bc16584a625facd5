// Acceptance gate: one line per criterion, exit 0 iff all pass.

#include "codedfog/erasure.hpp"
#include "codedfog/mapfn.hpp"
#include "codedfog/matmul.hpp"
#include "codedfog/placement.hpp"
#include "codedfog/shuffle.hpp"
#include "codedfog/straggler.hpp"
#include "codedfog/unified.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

using namespace codedfog;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
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
        for (int j = i + 1; j < k; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

// 1. Three-node example: 12 / 6 / 3 intermediate value units, under a second.
void criterion_small_example() {
    const double start = now_seconds();
    const auto r1 = uncoded_shuffle(build_placement({3, 6, 3, 1, 8}));
    const auto r2u = uncoded_shuffle(build_placement({3, 6, 3, 2, 8}));
    const auto r2c = coded_shuffle(build_placement({3, 6, 3, 2, 8}), 0xC0DEDF06ULL);
    const bool counts = r1.report.totalBitsSent == BigInt(12 * 8) &&
                        r2u.report.totalBitsSent == BigInt(6 * 8) &&
                        r2c.report.totalBitsSent == BigInt(3 * 8);
    const double elapsed = now_seconds() - start;
    std::ostringstream d;
    d << "units " << r1.report.totalBitsSent / 8 << "/" << r2u.report.totalBitsSent / 8 << "/"
      << r2c.report.totalBitsSent / 8 << ", " << elapsed << " s";
    report("1 three-node shuffle counts 12/6/3", counts && elapsed < 1.0, d.str());
}

// 2. Closed-form load exactness for all K <= 8 plus two ten-node points.
void criterion_load_formula() {
    bool ok = true;
    for (int K = 2; K <= 8 && ok; ++K) {
        for (int r = 1; r <= K && ok; ++r) {
            const JobSpec spec{K, static_cast<std::int64_t>(binomial(K, r)), K, r, 8 * r};
            const auto plan = build_placement(spec);
            const auto loads = load_formula(K, r);
            ok = ok && coded_shuffle(plan, 1).report.normalizedLoad == loads.coded;
            ok = ok && uncoded_shuffle(plan).report.normalizedLoad == loads.uncoded;
            ok = ok && loads.coded == Rational(K - r, static_cast<std::int64_t>(K) * r);
            ok = ok && loads.uncoded == Rational(K - r, K);
        }
    }
    ok = ok && load_formula(10, 2).coded == Rational(2, 5);
    ok = ok && load_formula(10, 5).coded == Rational(1, 10);
    report("2 coded load (1/r)(1-r/K) exact for K<=8, ten-node points 0.4 and 0.1", ok);
}

// 3. 200 randomized specs, every node reconstructs bit-exactly.
void criterion_reconstruction() {
    std::uint64_t state = 0xC0DEDF06ULL;
    int checked = 0;
    bool ok = true;
    while (checked < 200 && ok) {
        const int K = 2 + static_cast<int>(splitmix64(state) % 5);
        const int r = 1 + static_cast<int>(splitmix64(state) % K);
        const auto eta = static_cast<std::int64_t>(1 + splitmix64(state) % 2);
        const JobSpec spec{K, eta * static_cast<std::int64_t>(binomial(K, r)), K, r, 8 * r};
        const auto plan = build_placement(spec);
        const auto seed = splitmix64(state);
        const auto coded = coded_shuffle(plan, seed);
        for (int node = 1; node <= K && ok; ++node) {
            const auto values = decode_shuffle(node, coded.messages, plan, seed);
            ok = ok && static_cast<std::int64_t>(values.size()) ==
                           spec.functions_per_node() * spec.N;
            for (const auto& v : values) {
                if (v.payload != map_value(v.functionId, v.fileId, seed, spec.T)) {
                    ok = false;
                    break;
                }
            }
        }
        ++checked;
    }
    report("3 bit-exact reconstruction over 200 randomized specs", ok,
           std::to_string(checked) + " specs");
}

// 4. Any k of n decodes: exhaustive GF256, Real within 1e-8.
void criterion_mds() {
    bool ok = true;
    for (const auto [n, k] : {std::pair{6, 3}, std::pair{5, 2}, std::pair{12, 8}}) {
        const auto code = make_mds(n, k, Field::GF256, 2);
        std::vector<std::vector<std::uint8_t>> blocks(static_cast<std::size_t>(k));
        std::uint64_t state = static_cast<std::uint64_t>(n * 31 + k);
        for (auto& b : blocks) {
            b.resize(32);
            for (auto& byte : b) byte = static_cast<std::uint8_t>(splitmix64(state));
        }
        const auto coded = encode_gf(code, blocks);
        for_each_combination(n, k, [&](const std::vector<int>& rows) {
            std::map<int, std::vector<std::uint8_t>> available;
            for (int idx : rows) available[idx] = coded[static_cast<std::size_t>(idx)];
            if (decode_gf(code, available) != blocks) ok = false;
        });
    }
    const auto rc = make_mds(6, 3, Field::Real, 7);
    std::uint64_t state = 5;
    std::vector<std::vector<double>> blocks(3);
    for (auto& b : blocks) {
        b.resize(10);
        for (auto& v : b) v = (splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
    }
    const auto coded = encode_real(rc, blocks);
    for_each_combination(6, 3, [&](const std::vector<int>& rows) {
        std::map<int, std::vector<double>> available;
        for (int idx : rows) available[idx] = coded[static_cast<std::size_t>(idx)];
        const auto decoded = decode_real(rc, available);
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 10; ++i) {
                const double want = blocks[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
                if (std::abs(decoded.blocks[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -
                             want) > 1e-8) {
                    ok = false;
                }
            }
        }
    });
    report("4 any-k-of-n decode: GF256 exhaustive (n<=12), Real within 1e-8", ok);
}

// 5. Latency model: analytic vs Monte Carlo on a grid, plus the order
// statistic spot value and growing speedup.
void criterion_latency_model() {
    const std::int64_t trials = 100000;
    const ShiftedExponential model{1.0, 1.0};
    bool ok = true;
    std::uint64_t salt = 0;
    for (int n : {2, 4, 10, 20}) {
        for (int k = 1; k <= n; ++k) {
            if (n % k != 0) continue;
            std::vector<ExecutionScheme> schemes{{SchemeKind::Mds, n, k},
                                                 {SchemeKind::Repetition, n, k}};
            if (k == n) schemes.push_back({SchemeKind::Uncoded, n, n});
            for (const auto& scheme : schemes) {
                const auto est = scheme_latency_mc(scheme, model, trials, ++salt);
                if (std::abs(est.mcMean - est.analyticMean) > 3 * est.mcStdErr) ok = false;
            }
        }
    }
    const double spot = exp_order_stat_mean(10, 5, 1.0);
    ok = ok && std::abs(spot - 0.6456349) <= 1e-6;
    // per-node work is 1/k, so the raw order statistic is k times the mean
    const auto mc = scheme_latency_mc({SchemeKind::Mds, 10, 5}, {0.0, 1.0}, trials, 99);
    ok = ok && std::abs(5 * mc.mcMean - 0.6456349) <= 3 * 5 * mc.mcStdErr;
    ok = ok && optimal_mds_k(100, model).speedup > optimal_mds_k(10, model).speedup;
    report("5 analytic latency matches Monte Carlo within 3 SE; speedup grows with n", ok);
}

// 6. (3,2) coded matrix multiply survives any single straggler; simulated
// makespan is exactly the second-smallest delay.
void criterion_matmul() {
    MatMulJob job;
    job.A = random_matrix(10, 6, 3);
    job.X = random_matrix(6, 4, 4);
    job.n = 3;
    job.k = 2;
    job.model = {1.0, 1.0};
    job.seed = 0xC0DEDF06ULL;
    const auto expect = multiply(job.A, job.X);
    bool ok = true;
    for (int straggler = 0; straggler < 3; ++straggler) {
        job.forcedStragglers = {straggler};
        const auto r = run_job(job);
        ok = ok && relative_error(r.result, expect) <= 1e-8;
        std::vector<double> delays;
        for (const auto& t : r.tasks) delays.push_back(t.wallTime);
        std::sort(delays.begin(), delays.end());
        ok = ok && r.makespan == delays[1];
        ok = ok && std::find(r.decodedFrom.begin(), r.decodedFrom.end(), straggler) ==
                       r.decodedFrom.end();
    }
    report("6 (3,2) multiply survives every single straggler, exact makespan", ok);
}

// 7. Six-node worked example: (30,20) code, 2 tasks per pair, 10 per node,
// any four finishers can reach at least 28 coded results.
void criterion_unified_example() {
    const UnifiedSpec spec{6, Rational(1, 2), 20, 4};
    const auto plan = build_unified_plan(spec, Field::GF256, 1);
    bool ok = plan.codedTaskCount == 30 && plan.tasksPerSubset == 2 &&
              plan.code.has_value() && plan.code->n == 30 && plan.code->k == 20;
    for (int node = 1; node <= 6 && ok; ++node) {
        std::int64_t count = 0;
        for (std::int64_t t = 0; t < 30; ++t) {
            if (subset_contains(plan.hosts_of(t), node)) ++count;
        }
        ok = count == 10;
    }
    const auto minCover = coverage_min(plan);
    ok = ok && minCover >= 20;
    report("7 six-node plan: (30,20) code, 10 tasks per node, coverage ok", ok,
           "min available " + std::to_string(minCover));
}

// 8. Sweep endpoints: q=K load matches the closed form, q_min has zero
// peer load when the client collects, map latency strictly increasing.
void criterion_unified_endpoints() {
    const UnifiedSpec endSpec{6, Rational(1, 2), 20, 6};
    const auto endPlan = build_unified_plan(endSpec, Field::Real, 1, 0);
    bool ok = shuffle_load(endPlan, {1, 2, 3, 4, 5, 6}, DemandModel::PeerReduce).normalizedLoad ==
              load_formula(6, 3).coded;

    const UnifiedSpec minSpec{6, Rational(1, 2), 20, 2};
    const auto minPlan = build_unified_plan(minSpec, Field::Real, 1, 0);
    ok = ok && shuffle_load(minPlan, {2, 5}, DemandModel::ClientCollects).totalUnits == Rational(0);

    SweepConfig config;
    config.K = 6;
    config.mu = Rational(1, 2);
    config.m = 20;
    config.model = {1.0, 1.0};
    config.seed = 1;
    const auto sweep = tradeoff_sweep(config);
    for (std::size_t i = 1; i < sweep.points.size(); ++i) {
        ok = ok && sweep.points[i].mapLatency > sweep.points[i - 1].mapLatency;
    }
    report("8 endpoint loads exact, map latency strictly increasing in q", ok);
}

// 9. Default 18-node sweep: an interior q beats both endpoints on total time.
void criterion_tradeoff_interior() {
    SweepConfig config;
    config.K = 18;
    config.mu = Rational(1, 3);
    config.m = 185640;
    config.model = {1.0, 1.0};
    config.networkRateBps = 10e6;
    config.rows = 1000000;
    config.entryBits = 16;
    config.seed = 0xC0DEDF06ULL;
    const auto sweep = tradeoff_sweep(config);
    bool ok = sweep.points.size() >= 3;
    std::ostringstream d;
    if (ok) {
        const auto& first = sweep.points.front();
        const auto& last = sweep.points.back();
        const TradeoffPoint* best = &first;
        for (const auto& p : sweep.points) {
            if (p.totalTime < best->totalTime) best = &p;
        }
        ok = best->q != first.q && best->q != last.q && best->q == sweep.qStar &&
             best->totalTime < first.totalTime && best->totalTime < last.totalTime;
        d << "q*=" << sweep.qStar << ", total " << best->totalTime << " s vs " << first.totalTime
          << " / " << last.totalTime;
    }
    report("9 interior optimum in the default 18-node sweep", ok, d.str());
}

// 10. Optimal computation load: continuous optimum 10 at ratio 100 with
// speedup 5.05, and r*=1 at ratio 1.
void criterion_rstar() {
    const auto heavy = optimal_computation_load(1.0, 100.0, 16);
    const auto flat = optimal_computation_load(1.0, 1.0, 16);
    const double speedup = heavy.totalUncoded / heavy.totalCoded;
    const bool ok = std::abs(heavy.continuous - 10.0) <= 1e-12 && heavy.rStar == 10 &&
                    std::abs(speedup - 5.05) <= 0.01 && flat.rStar == 1;
    std::ostringstream d;
    d << "speedup " << speedup;
    report("10 computation load optimum: r*=10, speedup 5.05, r*=1 at parity", ok, d.str());
}

// 11. Sixteen-node, r=5 stage accounting: coded shuffle bits are exactly
// one fifth of the uncoded bits.
void criterion_stage_accounting() {
    const JobSpec spec{16, static_cast<std::int64_t>(binomial(16, 5)), 16, 5, 40};
    const auto plan = build_placement(spec);
    const auto coded = coded_shuffle(plan, 0xC0DEDF06ULL);
    const auto uncoded = uncoded_shuffle(plan);
    const bool ok = coded.report.totalBitsSent * 5 == uncoded.report.totalBitsSent;
    std::ostringstream d;
    d << coded.report.totalBitsSent << " vs " << uncoded.report.totalBitsSent << " bits";
    report("11 sixteen-node r=5 shuffle bits reduced exactly fivefold", ok, d.str());
}

}  // namespace

int main() {
    const double start = now_seconds();
    criterion_small_example();
    criterion_load_formula();
    criterion_reconstruction();
    criterion_mds();
    criterion_latency_model();
    criterion_matmul();
    criterion_unified_example();
    criterion_unified_endpoints();
    criterion_tradeoff_interior();
    criterion_rstar();
    criterion_stage_accounting();
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
              << " in " << now_seconds() - start << " s\n";
    return failures == 0 ? 0 : 1;
}
