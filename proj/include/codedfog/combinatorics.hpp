#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace codedfog {

/// Node subsets are sorted vectors of 1-based node ids.
using Subset = std::vector<int>;

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

/// All size-`size` subsets of {1..K} in lexicographic order.
inline std::vector<Subset> enumerate_subsets(int K, int size) {
    if (size < 0 || size > K) {
        throw std::invalid_argument("enumerate_subsets: size must be in [0, K]");
    }
    std::vector<Subset> out;
    out.reserve(binomial(K, size));
    Subset cur(size);
    for (int i = 0; i < size; ++i) cur[i] = i + 1;
    while (true) {
        out.push_back(cur);
        if (size == 0) break;
        int i = size - 1;
        while (i >= 0 && cur[i] == K - (size - 1 - i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

/// Position of a sorted subset within the lexicographic enumeration.
inline std::uint64_t lex_rank(const Subset& s, int K) {
    const int size = static_cast<int>(s.size());
    std::uint64_t rank = 0;
    int prev = 0;
    for (int i = 0; i < size; ++i) {
        for (int v = prev + 1; v < s[i]; ++v) {
            rank += binomial(K - v, size - 1 - i);
        }
        prev = s[i];
    }
    return rank;
}

inline bool subset_contains(const Subset& s, int node) {
    for (int v : s) {
        if (v == node) return true;
        if (v > node) return false;
    }
    return false;
}

/// s with one element removed; the element must be present.
inline Subset subset_without(const Subset& s, int node) {
    Subset out;
    out.reserve(s.size() - 1);
    for (int v : s) {
        if (v != node) out.push_back(v);
    }
    return out;
}

}  // namespace codedfog
