#pragma once

#include "codedfog/combinatorics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace codedfog {

/// Parameters of one MapReduce-style job on K edge nodes.
struct JobSpec {
    int K = 0;             ///< node count
    std::int64_t N = 0;    ///< input file count
    std::int64_t Q = 0;    ///< output function count
    int r = 0;             ///< computation load (copies of each file)
    std::int64_t T = 0;    ///< intermediate value size in bits, multiple of 8

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;

    std::int64_t files_per_batch() const { return N / static_cast<std::int64_t>(binomial(K, r)); }
    std::int64_t functions_per_node() const { return Q / K; }
    std::int64_t files_per_node() const { return static_cast<std::int64_t>(r) * N / K; }
};

/// Repetitive Map placement plus the reduce-function assignment.
///
/// Batch i (lexicographic order of the r-subsets) holds the files
/// [i*eta+1 .. (i+1)*eta]; node k reduces functions {k, k+K, k+2K, ...}.
struct PlacementPlan {
    JobSpec spec;
    std::vector<Subset> batchSubsets;                    ///< lexicographic r-subsets
    std::vector<std::vector<std::int64_t>> batchFiles;   ///< aligned with batchSubsets
    std::vector<std::vector<std::int64_t>> reduceAssignment;  ///< [node-1] -> function ids
    std::int64_t filesPerBatch = 0;

    /// Files stored at `node`: union of batches whose subset contains it.
    std::vector<std::int64_t> files_of_node(int node) const;

    /// Batch index of the batch mapped exactly on `subset`.
    std::size_t batch_index(const Subset& subset) const {
        return static_cast<std::size_t>(lex_rank(subset, spec.K));
    }

    std::string to_json() const;
};

PlacementPlan build_placement(const JobSpec& spec);

}  // namespace codedfog
