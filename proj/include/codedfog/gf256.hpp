#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace codedfog::gf256 {

// GF(2^8) with the conventional polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D),
// generator 0x02, via log/antilog tables.

struct Tables {
    std::array<std::uint8_t, 256> log{};
    std::array<std::uint8_t, 512> exp{};

    Tables() {
        std::uint16_t x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[i] = static_cast<std::uint8_t>(x);
            log[x] = static_cast<std::uint8_t>(i);
            x <<= 1;
            if (x & 0x100) x ^= 0x11D;
        }
        for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    }
};

inline const Tables& tables() {
    static const Tables t;
    return t;
}

inline std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

inline std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    const auto& t = tables();
    return t.exp[t.log[a] + t.log[b]];
}

inline std::uint8_t inv(std::uint8_t a) {
    if (a == 0) throw std::domain_error("gf256: inverse of zero");
    const auto& t = tables();
    return t.exp[255 - t.log[a]];
}

inline std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

/// In-place Gauss-Jordan inverse of a k x k matrix (row-major). Throws if singular.
inline std::vector<std::uint8_t> invert(std::vector<std::uint8_t> m, int k) {
    std::vector<std::uint8_t> id(static_cast<std::size_t>(k) * k, 0);
    for (int i = 0; i < k; ++i) id[static_cast<std::size_t>(i) * k + i] = 1;
    for (int col = 0; col < k; ++col) {
        int pivot = -1;
        for (int row = col; row < k; ++row) {
            if (m[static_cast<std::size_t>(row) * k + col] != 0) { pivot = row; break; }
        }
        if (pivot < 0) throw std::domain_error("gf256: singular matrix");
        if (pivot != col) {
            for (int j = 0; j < k; ++j) {
                std::swap(m[static_cast<std::size_t>(pivot) * k + j], m[static_cast<std::size_t>(col) * k + j]);
                std::swap(id[static_cast<std::size_t>(pivot) * k + j], id[static_cast<std::size_t>(col) * k + j]);
            }
        }
        const std::uint8_t pinv = inv(m[static_cast<std::size_t>(col) * k + col]);
        for (int j = 0; j < k; ++j) {
            m[static_cast<std::size_t>(col) * k + j] = mul(m[static_cast<std::size_t>(col) * k + j], pinv);
            id[static_cast<std::size_t>(col) * k + j] = mul(id[static_cast<std::size_t>(col) * k + j], pinv);
        }
        for (int row = 0; row < k; ++row) {
            if (row == col) continue;
            const std::uint8_t f = m[static_cast<std::size_t>(row) * k + col];
            if (f == 0) continue;
            for (int j = 0; j < k; ++j) {
                m[static_cast<std::size_t>(row) * k + j] ^= mul(f, m[static_cast<std::size_t>(col) * k + j]);
                id[static_cast<std::size_t>(row) * k + j] ^= mul(f, id[static_cast<std::size_t>(col) * k + j]);
            }
        }
    }
    return id;
}

/// Determinant nonzero test via elimination on a copy.
inline bool invertible(std::vector<std::uint8_t> m, int k) {
    for (int col = 0; col < k; ++col) {
        int pivot = -1;
        for (int row = col; row < k; ++row) {
            if (m[static_cast<std::size_t>(row) * k + col] != 0) { pivot = row; break; }
        }
        if (pivot < 0) return false;
        if (pivot != col) {
            for (int j = 0; j < k; ++j) {
                std::swap(m[static_cast<std::size_t>(pivot) * k + j], m[static_cast<std::size_t>(col) * k + j]);
            }
        }
        const std::uint8_t pinv = inv(m[static_cast<std::size_t>(col) * k + col]);
        for (int row = col + 1; row < k; ++row) {
            const std::uint8_t f = mul(m[static_cast<std::size_t>(row) * k + col], pinv);
            if (f == 0) continue;
            for (int j = col; j < k; ++j) {
                m[static_cast<std::size_t>(row) * k + j] ^= mul(f, m[static_cast<std::size_t>(col) * k + j]);
            }
        }
    }
    return true;
}

}  // namespace codedfog::gf256
