#pragma once

#include "codedfog/combinatorics.hpp"
#include "codedfog/erasure.hpp"
#include "codedfog/rational.hpp"
#include "codedfog/straggler.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace codedfog {

/// One operating point of the MDS-coded Map + coded shuffle scheme.
struct UnifiedSpec {
    int K = 0;             ///< nodes
    Rational mu{1, 2};     ///< per-node storage/task fraction
    std::int64_t m = 0;    ///< source Map tasks
    int q = 0;             ///< Map phase ends when q nodes finish

    void validate() const;

    int hosts_per_task() const;            ///< mu * q
    std::int64_t coded_tasks() const;      ///< (K/q) * m
    std::int64_t tasks_per_subset() const; ///< coded_tasks / C(K, mu*q)
    std::int64_t tasks_per_node() const;   ///< mu * m
};

/// Coded tasks assigned round-robin over the lexicographic (mu*q)-subsets:
/// task i (0-based) is hosted by subset i mod C(K, mu*q).
struct UnifiedPlan {
    UnifiedSpec spec;
    std::int64_t codedTaskCount = 0;
    std::int64_t tasksPerSubset = 0;
    std::vector<Subset> hostSubsets;        ///< lexicographic, size C(K, mu*q)
    std::optional<MdsCode> code;            ///< materialized for small task counts

    const Subset& hosts_of(std::int64_t task) const {
        return hostSubsets[static_cast<std::size_t>(task % static_cast<std::int64_t>(hostSubsets.size()))];
    }
};

/// `materializeLimit` bounds when the generator matrix is actually built;
/// larger plans keep the assignment structural.
UnifiedPlan build_unified_plan(const UnifiedSpec& spec, Field field, std::uint64_t seed,
                               std::int64_t materializeLimit = 4096);

/// Minimum over all q-subsets F of the number of coded tasks with a host in
/// F. Exhaustive; intended for K <= 10.
std::int64_t coverage_min(const UnifiedPlan& plan);

enum class DemandModel {
    PeerReduce,      ///< finishers exchange results and reduce among themselves
    ClientCollects,  ///< results go straight to the client; no peer shuffle
};

/// Loads counted in slice units: one unit is the share of one coded task
/// result that one reducer needs.
struct UnifiedLoadReport {
    Rational multicastUnits{0};
    Rational unicastUnits{0};
    Rational totalUnits{0};
    Rational normalizedLoad{0};   ///< totalUnits / (q * m)
    int minSelectedAvailability = 0;
};

/// Greedy coded-multicast shuffle among the finishers F: pick m decodable
/// results preferring high availability, multicast level by level, unicast
/// the rest.
UnifiedLoadReport shuffle_load(const UnifiedPlan& plan, const Subset& finishers,
                               DemandModel demand);

/// Map latency: q-th order statistic of K node completion times, each node
/// carrying work mu.
LatencyEstimate map_phase_latency(const UnifiedSpec& spec, const ShiftedExponential& model,
                                  std::int64_t trials, std::uint64_t seed);

double map_phase_latency_analytic(const UnifiedSpec& spec, const ShiftedExponential& model);

struct TradeoffPoint {
    int q = 0;
    double mapLatency = 0.0;
    Rational normalizedLoad{0};
    double shuffleTime = 0.0;
    double totalTime = 0.0;
};

struct SweepConfig {
    int K = 0;
    Rational mu{1, 2};
    std::int64_t m = 0;
    ShiftedExponential model;
    double networkRateBps = 10e6;
    std::int64_t rows = 1000000;      ///< output rows of the matrix job
    int entryBits = 16;
    DemandModel demand = DemandModel::PeerReduce;
    int finisherSamples = 64;         ///< used when C(K,q) > 1000
    std::uint64_t seed = 0;
};

struct SweepResult {
    std::vector<TradeoffPoint> points;
    int qStar = 0;
};

std::vector<int> feasible_q_values(int K, const Rational& mu, std::int64_t m);

SweepResult tradeoff_sweep(const SweepConfig& config);

struct ComputationLoadChoice {
    double continuous = 1.0;   ///< sqrt(tData/tTask) clamped to [1, K]
    int rStar = 1;
    double totalCoded = 0.0;
    double totalUncoded = 0.0;
};

/// Minimize r*tTask + tData/r over integer r in [1, K].
ComputationLoadChoice optimal_computation_load(double tTask, double tData, int K);

}  // namespace codedfog
