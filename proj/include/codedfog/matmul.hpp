#pragma once

#include "codedfog/erasure.hpp"
#include "codedfog/straggler.hpp"

#include <cstdint>
#include <vector>

namespace codedfog {

struct Matrix {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<double> data;   ///< row-major

    Matrix() = default;
    Matrix(std::int64_t r, std::int64_t c) : rows(r), cols(c), data(static_cast<std::size_t>(r * c), 0.0) {}

    double& at(std::int64_t i, std::int64_t j) { return data[static_cast<std::size_t>(i * cols + j)]; }
    double at(std::int64_t i, std::int64_t j) const { return data[static_cast<std::size_t>(i * cols + j)]; }
};

Matrix multiply(const Matrix& a, const Matrix& b);

/// Deterministic pseudo-random matrix for demos and tests.
Matrix random_matrix(std::int64_t rows, std::int64_t cols, std::uint64_t seed);

/// Largest relative entrywise deviation, scaled by the largest magnitude in `ref`.
double relative_error(const Matrix& got, const Matrix& ref);

enum class ClockMode { Simulated, Wall };

struct MatMulJob {
    Matrix A;                      ///< p x d
    Matrix X;                      ///< d x b
    int n = 1;
    int k = 1;
    ShiftedExponential model;
    std::uint64_t seed = 0;
    ClockMode clock = ClockMode::Simulated;
    std::vector<int> forcedStragglers;   ///< 0-based coded indices

    void validate() const;
};

enum class TaskStatus { Completed, Cancelled, Failed };

struct TaskResult {
    int codedIndex = 0;
    double wallTime = 0.0;         ///< injected delay (simulated) or measured (wall)
    TaskStatus status = TaskStatus::Cancelled;
};

struct JobReport {
    Matrix result;                 ///< p x b decoded product
    std::vector<TaskResult> tasks;
    double makespan = 0.0;         ///< k-th completion time
    bool illConditioned = false;
    std::vector<int> decodedFrom;  ///< coded indices fed to the decoder
};

/// Row-wise split of A into k blocks, then coded block i = sum_j g_ij A_j.
std::vector<Matrix> split_encode(const Matrix& A, const MdsCode& code);

/// Dispatch n coded multiplications, collect the fastest k, cancel the
/// rest, decode A*X.
JobReport run_job(const MatMulJob& job);

}  // namespace codedfog
