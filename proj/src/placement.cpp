#include "codedfog/placement.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace codedfog {

void JobSpec::validate() const {
    if (K < 2) throw std::invalid_argument("JobSpec: K must be >= 2");
    if (r < 1 || r > K) throw std::invalid_argument("JobSpec: r must satisfy 1 <= r <= K");
    if (N <= 0) throw std::invalid_argument("JobSpec: N must be positive");
    if (Q <= 0) throw std::invalid_argument("JobSpec: Q must be positive");
    if (T <= 0 || T % 8 != 0) throw std::invalid_argument("JobSpec: T must be a positive multiple of 8");
    const auto batches = static_cast<std::int64_t>(binomial(K, r));
    if (N % batches != 0) {
        throw std::invalid_argument("placement infeasible: N must be a multiple of C(K,r) = " +
                                    std::to_string(batches));
    }
    if (Q % K != 0) {
        throw std::invalid_argument("placement infeasible: Q must be a multiple of K = " +
                                    std::to_string(K));
    }
}

PlacementPlan build_placement(const JobSpec& spec) {
    spec.validate();
    PlacementPlan plan;
    plan.spec = spec;
    plan.filesPerBatch = spec.files_per_batch();
    plan.batchSubsets = enumerate_subsets(spec.K, spec.r);

    plan.batchFiles.resize(plan.batchSubsets.size());
    std::int64_t nextFile = 1;
    for (auto& files : plan.batchFiles) {
        files.resize(plan.filesPerBatch);
        for (auto& f : files) f = nextFile++;
    }

    plan.reduceAssignment.resize(spec.K);
    for (int node = 1; node <= spec.K; ++node) {
        for (std::int64_t fn = node; fn <= spec.Q; fn += spec.K) {
            plan.reduceAssignment[node - 1].push_back(fn);
        }
    }
    return plan;
}

std::vector<std::int64_t> PlacementPlan::files_of_node(int node) const {
    std::vector<std::int64_t> files;
    for (std::size_t b = 0; b < batchSubsets.size(); ++b) {
        if (subset_contains(batchSubsets[b], node)) {
            files.insert(files.end(), batchFiles[b].begin(), batchFiles[b].end());
        }
    }
    return files;
}

std::string PlacementPlan::to_json() const {
    nlohmann::json j;
    j["k"] = spec.K;
    j["n_files"] = spec.N;
    j["q_functions"] = spec.Q;
    j["r"] = spec.r;
    nlohmann::json batches = nlohmann::json::object();
    for (std::size_t b = 0; b < batchSubsets.size(); ++b) {
        std::string key;
        for (std::size_t i = 0; i < batchSubsets[b].size(); ++i) {
            if (i) key += ",";
            key += std::to_string(batchSubsets[b][i]);
        }
        batches[key] = batchFiles[b];
    }
    j["batches"] = batches;
    nlohmann::json reduce = nlohmann::json::object();
    for (int node = 1; node <= spec.K; ++node) {
        reduce[std::to_string(node)] = reduceAssignment[node - 1];
    }
    j["reduce"] = reduce;
    return j.dump(2);
}

}  // namespace codedfog
