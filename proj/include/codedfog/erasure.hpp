#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace codedfog {

enum class Field { GF256, Real };

/// (n,k) MDS generator: any k rows invertible. Systematic (identity prefix)
/// in both algebras.
struct MdsCode {
    int n = 0;
    int k = 0;
    Field field = Field::GF256;
    bool systematic = true;
    std::vector<std::uint8_t> coeffGf;   ///< n*k row-major, GF256 only
    std::vector<double> coeffReal;       ///< n*k row-major, Real only

    /// Hex grid (GF256) or CSV (Real) rendering of the generator.
    std::string generator_text() const;
};

MdsCode make_mds(int n, int k, Field field, std::uint64_t seed);

/// The (3,2) real code with rows [1,0], [0,1], [1,1].
MdsCode xor_parity_code();

std::vector<std::vector<std::uint8_t>> encode_gf(const MdsCode& code,
                                                 const std::vector<std::vector<std::uint8_t>>& blocks);

/// Decode from any >= k coded payloads (lowest indices used). Bit-exact.
std::vector<std::vector<std::uint8_t>> decode_gf(const MdsCode& code,
                                                 const std::map<int, std::vector<std::uint8_t>>& available);

std::vector<std::vector<double>> encode_real(const MdsCode& code,
                                             const std::vector<std::vector<double>>& blocks);

struct RealDecodeResult {
    std::vector<std::vector<double>> blocks;
    bool illConditioned = false;   ///< pivot-ratio estimate above 1e10
};

RealDecodeResult decode_real(const MdsCode& code,
                             const std::map<int, std::vector<double>>& available);

/// (n,k) repetition: coded symbol i is a copy of source i / (n/k).
struct RepetitionCode {
    int n = 0;
    int k = 0;

    RepetitionCode(int n_, int k_);
    int replication() const { return n / k; }
    int source_of(int codedIndex) const { return codedIndex / replication(); }

    /// True iff every source symbol has at least one surviving copy.
    bool recoverable(const std::vector<bool>& survived) const;
};

}  // namespace codedfog
