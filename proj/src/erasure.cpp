#include "codedfog/erasure.hpp"

#include "codedfog/gf256.hpp"
#include "codedfog/mapfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace codedfog {

namespace {

/// Enumerate size-k index subsets of {0..n-1} and call fn on each.
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

bool real_invertible(const std::vector<double>& m, int k) {
    std::vector<double> a(m);
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        double best = std::abs(a[static_cast<std::size_t>(col) * k + col]);
        for (int row = col + 1; row < k; ++row) {
            const double v = std::abs(a[static_cast<std::size_t>(row) * k + col]);
            if (v > best) { best = v; pivot = row; }
        }
        if (best < 1e-12) return false;
        if (pivot != col) {
            for (int j = 0; j < k; ++j) {
                std::swap(a[static_cast<std::size_t>(pivot) * k + j], a[static_cast<std::size_t>(col) * k + j]);
            }
        }
        for (int row = col + 1; row < k; ++row) {
            const double f = a[static_cast<std::size_t>(row) * k + col] / a[static_cast<std::size_t>(col) * k + col];
            for (int j = col; j < k; ++j) {
                a[static_cast<std::size_t>(row) * k + j] -= f * a[static_cast<std::size_t>(col) * k + j];
            }
        }
    }
    return true;
}

void verify_mds_gf(const MdsCode& code) {
    if (code.n > 12) return;   // exhaustive check bounded per contract
    for_each_combination(code.n, code.k, [&](const std::vector<int>& rows) {
        std::vector<std::uint8_t> sub(static_cast<std::size_t>(code.k) * code.k);
        for (int i = 0; i < code.k; ++i) {
            for (int j = 0; j < code.k; ++j) {
                sub[static_cast<std::size_t>(i) * code.k + j] =
                    code.coeffGf[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)]) * code.k + j];
            }
        }
        if (!gf256::invertible(std::move(sub), code.k)) {
            throw std::logic_error("make_mds: GF256 generator lost the MDS property");
        }
    });
}

bool verify_mds_real(const MdsCode& code) {
    if (code.n > 12) return true;
    bool ok = true;
    for_each_combination(code.n, code.k, [&](const std::vector<int>& rows) {
        if (!ok) return;
        std::vector<double> sub(static_cast<std::size_t>(code.k) * code.k);
        for (int i = 0; i < code.k; ++i) {
            for (int j = 0; j < code.k; ++j) {
                sub[static_cast<std::size_t>(i) * code.k + j] =
                    code.coeffReal[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)]) * code.k + j];
            }
        }
        if (!real_invertible(sub, code.k)) ok = false;
    });
    return ok;
}

double uniform01(std::uint64_t& state) {
    return (splitmix64(state) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

}  // namespace

MdsCode make_mds(int n, int k, Field field, std::uint64_t seed) {
    if (k < 1 || k > n) throw std::invalid_argument("make_mds: need 1 <= k <= n");
    MdsCode code;
    code.n = n;
    code.k = k;
    code.field = field;
    code.systematic = true;

    if (field == Field::GF256) {
        if (n > 255) throw std::invalid_argument("make_mds: GF256 supports n <= 255");
        // Vandermonde on distinct points 0..n-1, reduced to systematic form.
        std::vector<std::uint8_t> vand(static_cast<std::size_t>(n) * k);
        for (int i = 0; i < n; ++i) {
            std::uint8_t p = 1;
            for (int j = 0; j < k; ++j) {
                vand[static_cast<std::size_t>(i) * k + j] = p;
                p = gf256::mul(p, static_cast<std::uint8_t>(i));
            }
        }
        std::vector<std::uint8_t> top(vand.begin(), vand.begin() + static_cast<std::size_t>(k) * k);
        const auto topInv = gf256::invert(std::move(top), k);
        code.coeffGf.assign(static_cast<std::size_t>(n) * k, 0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < k; ++j) {
                std::uint8_t acc = 0;
                for (int t = 0; t < k; ++t) {
                    acc ^= gf256::mul(vand[static_cast<std::size_t>(i) * k + t],
                                      topInv[static_cast<std::size_t>(t) * k + j]);
                }
                code.coeffGf[static_cast<std::size_t>(i) * k + j] = acc;
            }
        }
        verify_mds_gf(code);
        return code;
    }

    // Real: identity prefix, Gaussian parity rows; resample on a singular draw.
    std::uint64_t state = derive_seed(seed, 0x6d647352u, static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(k));
    for (int attempt = 0; attempt < 16; ++attempt) {
        code.coeffReal.assign(static_cast<std::size_t>(n) * k, 0.0);
        for (int i = 0; i < k; ++i) code.coeffReal[static_cast<std::size_t>(i) * k + i] = 1.0;
        for (int i = k; i < n; ++i) {
            for (int j = 0; j < k; ++j) {
                // Box-Muller on the deterministic uniform stream.
                const double u1 = uniform01(state);
                const double u2 = uniform01(state);
                code.coeffReal[static_cast<std::size_t>(i) * k + j] =
                    std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
            }
        }
        if (verify_mds_real(code)) return code;
    }
    throw std::runtime_error("make_mds: failed to sample a nonsingular real generator");
}

MdsCode xor_parity_code() {
    MdsCode code;
    code.n = 3;
    code.k = 2;
    code.field = Field::Real;
    code.systematic = true;
    code.coeffReal = {1, 0, 0, 1, 1, 1};
    return code;
}

std::vector<std::vector<std::uint8_t>> encode_gf(const MdsCode& code,
                                                 const std::vector<std::vector<std::uint8_t>>& blocks) {
    if (code.field != Field::GF256) throw std::invalid_argument("encode_gf: wrong field");
    if (static_cast<int>(blocks.size()) != code.k) throw std::invalid_argument("encode_gf: need k blocks");
    const std::size_t len = blocks.front().size();
    for (const auto& b : blocks) {
        if (b.size() != len) throw std::invalid_argument("encode_gf: ragged blocks");
    }
    std::vector<std::vector<std::uint8_t>> coded(static_cast<std::size_t>(code.n));
    for (int i = 0; i < code.n; ++i) {
        auto& out = coded[static_cast<std::size_t>(i)];
        out.assign(len, 0);
        for (int j = 0; j < code.k; ++j) {
            const std::uint8_t g = code.coeffGf[static_cast<std::size_t>(i) * code.k + j];
            if (g == 0) continue;
            const auto& src = blocks[static_cast<std::size_t>(j)];
            for (std::size_t b = 0; b < len; ++b) out[b] ^= gf256::mul(g, src[b]);
        }
    }
    return coded;
}

std::vector<std::vector<std::uint8_t>> decode_gf(const MdsCode& code,
                                                 const std::map<int, std::vector<std::uint8_t>>& available) {
    if (code.field != Field::GF256) throw std::invalid_argument("decode_gf: wrong field");
    if (static_cast<int>(available.size()) < code.k) {
        throw std::runtime_error("decode_gf: not enough symbols, short by " +
                                 std::to_string(code.k - static_cast<int>(available.size())));
    }
    std::vector<int> rows;
    std::vector<const std::vector<std::uint8_t>*> payloads;
    for (const auto& [idx, payload] : available) {   // std::map: lowest indices first
        rows.push_back(idx);
        payloads.push_back(&payload);
        if (static_cast<int>(rows.size()) == code.k) break;
    }
    std::vector<std::uint8_t> sub(static_cast<std::size_t>(code.k) * code.k);
    for (int i = 0; i < code.k; ++i) {
        for (int j = 0; j < code.k; ++j) {
            sub[static_cast<std::size_t>(i) * code.k + j] =
                code.coeffGf[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)]) * code.k + j];
        }
    }
    const auto inv = gf256::invert(std::move(sub), code.k);
    const std::size_t len = payloads.front()->size();
    std::vector<std::vector<std::uint8_t>> sources(static_cast<std::size_t>(code.k));
    for (int j = 0; j < code.k; ++j) {
        auto& out = sources[static_cast<std::size_t>(j)];
        out.assign(len, 0);
        for (int i = 0; i < code.k; ++i) {
            const std::uint8_t g = inv[static_cast<std::size_t>(j) * code.k + i];
            if (g == 0) continue;
            const auto& src = *payloads[static_cast<std::size_t>(i)];
            for (std::size_t b = 0; b < len; ++b) out[b] ^= gf256::mul(g, src[b]);
        }
    }
    return sources;
}

std::vector<std::vector<double>> encode_real(const MdsCode& code,
                                             const std::vector<std::vector<double>>& blocks) {
    if (code.field != Field::Real) throw std::invalid_argument("encode_real: wrong field");
    if (static_cast<int>(blocks.size()) != code.k) throw std::invalid_argument("encode_real: need k blocks");
    const std::size_t len = blocks.front().size();
    for (const auto& b : blocks) {
        if (b.size() != len) throw std::invalid_argument("encode_real: ragged blocks");
    }
    std::vector<std::vector<double>> coded(static_cast<std::size_t>(code.n));
    for (int i = 0; i < code.n; ++i) {
        auto& out = coded[static_cast<std::size_t>(i)];
        out.assign(len, 0.0);
        for (int j = 0; j < code.k; ++j) {
            const double g = code.coeffReal[static_cast<std::size_t>(i) * code.k + j];
            if (g == 0.0) continue;
            const auto& src = blocks[static_cast<std::size_t>(j)];
            for (std::size_t b = 0; b < len; ++b) out[b] += g * src[b];
        }
    }
    return coded;
}

RealDecodeResult decode_real(const MdsCode& code,
                             const std::map<int, std::vector<double>>& available) {
    if (code.field != Field::Real) throw std::invalid_argument("decode_real: wrong field");
    if (static_cast<int>(available.size()) < code.k) {
        throw std::runtime_error("decode_real: not enough symbols, short by " +
                                 std::to_string(code.k - static_cast<int>(available.size())));
    }
    const int k = code.k;
    std::vector<int> rows;
    std::vector<const std::vector<double>*> payloads;
    for (const auto& [idx, payload] : available) {
        rows.push_back(idx);
        payloads.push_back(&payload);
        if (static_cast<int>(rows.size()) == k) break;
    }
    const std::size_t len = payloads.front()->size();

    // Augmented elimination with partial pivoting over all payload columns.
    std::vector<double> a(static_cast<std::size_t>(k) * k);
    std::vector<std::vector<double>> rhs(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            a[static_cast<std::size_t>(i) * k + j] =
                code.coeffReal[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)]) * k + j];
        }
        rhs[static_cast<std::size_t>(i)] = *payloads[static_cast<std::size_t>(i)];
    }
    double maxPivot = 0.0;
    double minPivot = std::numeric_limits<double>::infinity();
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        double best = std::abs(a[static_cast<std::size_t>(col) * k + col]);
        for (int row = col + 1; row < k; ++row) {
            const double v = std::abs(a[static_cast<std::size_t>(row) * k + col]);
            if (v > best) { best = v; pivot = row; }
        }
        if (best == 0.0) throw std::runtime_error("decode_real: singular submatrix");
        maxPivot = std::max(maxPivot, best);
        minPivot = std::min(minPivot, best);
        if (pivot != col) {
            for (int j = 0; j < k; ++j) {
                std::swap(a[static_cast<std::size_t>(pivot) * k + j], a[static_cast<std::size_t>(col) * k + j]);
            }
            std::swap(rhs[static_cast<std::size_t>(pivot)], rhs[static_cast<std::size_t>(col)]);
        }
        for (int row = 0; row < k; ++row) {
            if (row == col) continue;
            const double f = a[static_cast<std::size_t>(row) * k + col] / a[static_cast<std::size_t>(col) * k + col];
            if (f == 0.0) continue;
            for (int j = col; j < k; ++j) {
                a[static_cast<std::size_t>(row) * k + j] -= f * a[static_cast<std::size_t>(col) * k + j];
            }
            auto& rr = rhs[static_cast<std::size_t>(row)];
            const auto& rc = rhs[static_cast<std::size_t>(col)];
            for (std::size_t b = 0; b < len; ++b) rr[b] -= f * rc[b];
        }
    }
    RealDecodeResult result;
    result.illConditioned = (minPivot > 0.0) && (maxPivot / minPivot > 1e10);
    result.blocks.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double d = a[static_cast<std::size_t>(i) * k + i];
        auto& out = result.blocks[static_cast<std::size_t>(i)];
        out = rhs[static_cast<std::size_t>(i)];
        for (double& v : out) v /= d;
    }
    return result;
}

std::string MdsCode::generator_text() const {
    std::ostringstream oss;
    if (field == Field::GF256) {
        char buf[4];
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < k; ++j) {
                std::snprintf(buf, sizeof(buf), "%02x", coeffGf[static_cast<std::size_t>(i) * k + j]);
                oss << (j ? " " : "") << buf;
            }
            oss << "\n";
        }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < k; ++j) {
                oss << (j ? "," : "") << coeffReal[static_cast<std::size_t>(i) * k + j];
            }
            oss << "\n";
        }
    }
    return oss.str();
}

RepetitionCode::RepetitionCode(int n_, int k_) : n(n_), k(k_) {
    if (k < 1 || n < k || n % k != 0) {
        throw std::invalid_argument("RepetitionCode: k must divide n");
    }
}

bool RepetitionCode::recoverable(const std::vector<bool>& survived) const {
    if (static_cast<int>(survived.size()) != n) {
        throw std::invalid_argument("RepetitionCode: survival vector must have n entries");
    }
    std::vector<bool> covered(static_cast<std::size_t>(k), false);
    for (int i = 0; i < n; ++i) {
        if (survived[static_cast<std::size_t>(i)]) covered[static_cast<std::size_t>(source_of(i))] = true;
    }
    return std::all_of(covered.begin(), covered.end(), [](bool c) { return c; });
}

}  // namespace codedfog
