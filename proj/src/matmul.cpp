#include "codedfog/matmul.hpp"

#include "codedfog/mapfn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace codedfog {

namespace {

constexpr double kForcedStragglerDelay = 1e6;   // seconds; far beyond any sampled tail

std::vector<double> injected_delays(const MatMulJob& job) {
    std::vector<double> delays(static_cast<std::size_t>(job.n));
    const double work = 1.0 / job.k;
    for (int i = 0; i < job.n; ++i) {
        std::uint64_t state = derive_seed(job.seed, static_cast<std::uint64_t>(i), 0x6d6d756cu);
        delays[static_cast<std::size_t>(i)] = job.model.sample(work, state);
    }
    for (int idx : job.forcedStragglers) {
        if (idx < 0 || idx >= job.n) throw std::invalid_argument("forced straggler index out of range");
        delays[static_cast<std::size_t>(idx)] += kForcedStragglerDelay;
    }
    return delays;
}

Matrix assemble(const MdsCode& code, const std::vector<Matrix>& products,
                const std::vector<int>& completed, std::int64_t blockRows, std::int64_t cols,
                bool& illConditioned) {
    std::map<int, std::vector<double>> available;
    for (int idx : completed) {
        available[idx] = products[static_cast<std::size_t>(idx)].data;
    }
    auto decoded = decode_real(code, available);
    illConditioned = decoded.illConditioned;
    Matrix result(blockRows * code.k, cols);
    for (int j = 0; j < code.k; ++j) {
        std::copy(decoded.blocks[static_cast<std::size_t>(j)].begin(),
                  decoded.blocks[static_cast<std::size_t>(j)].end(),
                  result.data.begin() + static_cast<std::int64_t>(j) * blockRows * cols);
    }
    return result;
}

}  // namespace

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("multiply: shape mismatch");
    Matrix c(a.rows, b.cols);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < a.rows; ++i) {
        for (std::int64_t t = 0; t < a.cols; ++t) {
            const double v = a.at(i, t);
            if (v == 0.0) continue;
            for (std::int64_t j = 0; j < b.cols; ++j) {
                c.at(i, j) += v * b.at(t, j);
            }
        }
    }
    return c;
}

Matrix random_matrix(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
    Matrix m(rows, cols);
    std::uint64_t state = derive_seed(seed, static_cast<std::uint64_t>(rows),
                                      static_cast<std::uint64_t>(cols));
    for (auto& v : m.data) {
        v = (splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;   // uniform in [-1, 1)
    }
    return m;
}

double relative_error(const Matrix& got, const Matrix& ref) {
    if (got.rows != ref.rows || got.cols != ref.cols) return std::numeric_limits<double>::infinity();
    double maxAbs = 0.0;
    for (double v : ref.data) maxAbs = std::max(maxAbs, std::abs(v));
    if (maxAbs == 0.0) maxAbs = 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
        worst = std::max(worst, std::abs(got.data[i] - ref.data[i]) / maxAbs);
    }
    return worst;
}

void MatMulJob::validate() const {
    if (n < 1 || k < 1 || k > n) throw std::invalid_argument("MatMulJob: need 1 <= k <= n");
    if (A.rows % k != 0) throw std::invalid_argument("MatMulJob: A rows must be divisible by k");
    if (A.cols != X.rows) throw std::invalid_argument("MatMulJob: A and X shapes incompatible");
    model.validate();
}

std::vector<Matrix> split_encode(const Matrix& A, const MdsCode& code) {
    if (code.field != Field::Real) throw std::invalid_argument("split_encode: code must be Real");
    if (A.rows % code.k != 0) throw std::invalid_argument("split_encode: A rows not divisible by k");
    const std::int64_t blockRows = A.rows / code.k;
    std::vector<std::vector<double>> blocks(static_cast<std::size_t>(code.k));
    for (int j = 0; j < code.k; ++j) {
        const auto begin = A.data.begin() + static_cast<std::int64_t>(j) * blockRows * A.cols;
        blocks[static_cast<std::size_t>(j)].assign(begin, begin + blockRows * A.cols);
    }
    auto codedFlat = encode_real(code, blocks);
    std::vector<Matrix> coded(static_cast<std::size_t>(code.n));
    for (int i = 0; i < code.n; ++i) {
        coded[static_cast<std::size_t>(i)].rows = blockRows;
        coded[static_cast<std::size_t>(i)].cols = A.cols;
        coded[static_cast<std::size_t>(i)].data = std::move(codedFlat[static_cast<std::size_t>(i)]);
    }
    return coded;
}

JobReport run_job(const MatMulJob& job) {
    job.validate();
    const MdsCode code = job.n == 3 && job.k == 2 ? xor_parity_code()
                                                  : make_mds(job.n, job.k, Field::Real, job.seed);
    const auto codedBlocks = split_encode(job.A, code);
    const auto delays = injected_delays(job);
    const std::int64_t blockRows = job.A.rows / job.k;

    JobReport report;
    report.tasks.resize(static_cast<std::size_t>(job.n));
    std::vector<Matrix> products(static_cast<std::size_t>(job.n));

    if (job.clock == ClockMode::Simulated) {
        // Virtual time: completion order is exactly the order of injected delays.
        std::vector<int> order(static_cast<std::size_t>(job.n));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return delays[static_cast<std::size_t>(a)] < delays[static_cast<std::size_t>(b)] ||
                   (delays[static_cast<std::size_t>(a)] == delays[static_cast<std::size_t>(b)] && a < b);
        });
        for (int i = 0; i < job.n; ++i) {
            auto& task = report.tasks[static_cast<std::size_t>(i)];
            task.codedIndex = i;
            task.wallTime = delays[static_cast<std::size_t>(i)];
        }
        for (int rank = 0; rank < job.k; ++rank) {
            const int idx = order[static_cast<std::size_t>(rank)];
            products[static_cast<std::size_t>(idx)] =
                multiply(codedBlocks[static_cast<std::size_t>(idx)], job.X);
            report.tasks[static_cast<std::size_t>(idx)].status = TaskStatus::Completed;
            report.decodedFrom.push_back(idx);
        }
        std::sort(report.decodedFrom.begin(), report.decodedFrom.end());
        report.makespan = delays[static_cast<std::size_t>(order[static_cast<std::size_t>(job.k - 1)])];
    } else {
        std::mutex mtx;
        std::condition_variable cancelCv;
        bool cancelled = false;
        int completedCount = 0;
        const auto start = std::chrono::steady_clock::now();

        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(job.n));
        for (int i = 0; i < job.n; ++i) {
            workers.emplace_back([&, i] {
                Matrix product = multiply(codedBlocks[static_cast<std::size_t>(i)], job.X);
                std::unique_lock<std::mutex> lock(mtx);
                const bool finished = !cancelCv.wait_for(
                    lock, std::chrono::duration<double>(delays[static_cast<std::size_t>(i)]),
                    [&] { return cancelled; });
                auto& task = report.tasks[static_cast<std::size_t>(i)];
                task.codedIndex = i;
                task.wallTime =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                if (finished && completedCount < job.k) {
                    task.status = TaskStatus::Completed;
                    products[static_cast<std::size_t>(i)] = std::move(product);
                    report.decodedFrom.push_back(i);
                    if (++completedCount == job.k) {
                        report.makespan = task.wallTime;
                        cancelled = true;
                        cancelCv.notify_all();
                    }
                } else {
                    task.status = TaskStatus::Cancelled;
                }
            });
        }
        for (auto& w : workers) w.join();
        if (completedCount < job.k) {
            throw std::runtime_error("run_job: only " + std::to_string(completedCount) + " of " +
                                     std::to_string(job.k) + " required tasks survived");
        }
        std::sort(report.decodedFrom.begin(), report.decodedFrom.end());
    }

    report.result = assemble(code, products, report.decodedFrom, blockRows, job.X.cols,
                             report.illConditioned);
    return report;
}

}  // namespace codedfog
