#pragma once

#include "codedfog/placement.hpp"
#include "codedfog/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace codedfog {

struct IntermediateValue {
    std::int64_t functionId = 0;
    std::int64_t fileId = 0;
    std::vector<std::uint8_t> payload;

    bool operator==(const IntermediateValue&) const = default;
};

/// One XOR-coded packet from `sender` to the other members of `subset`.
struct MulticastMessage {
    struct Descriptor {
        int targetNode = 0;        ///< node whose demand this term serves
        Subset batchSubset;        ///< batch the segment was cut from
        int segmentIndex = 0;      ///< 0-based segment within V(target, batchSubset)
    };

    int sender = 0;
    Subset recipients;
    Subset subset;                 ///< the (r+1)-subset, sender included
    std::int64_t payloadBits = 0;  ///< segment length; payload is zero-padded to bytes
    std::vector<std::uint8_t> payload;
    std::vector<Descriptor> descriptors;
};

struct LoadReport {
    BigInt totalBitsSent = 0;
    std::int64_t messageCount = 0;
    Rational normalizedLoad{0};    ///< totalBitsSent / (Q*N*T), exact
};

struct CodedShuffleResult {
    std::vector<MulticastMessage> messages;
    LoadReport report;
};

struct Unicast {
    int from = 0;
    int to = 0;
    std::int64_t functionId = 0;
    std::int64_t fileId = 0;
};

struct UncodedShuffleResult {
    std::vector<Unicast> unicasts;
    LoadReport report;
};

/// Coded multicast shuffle over all (r+1)-subsets. Messages come out
/// sorted by subset (lexicographic), then sender.
CodedShuffleResult coded_shuffle(const PlacementPlan& plan, std::uint64_t seed);

/// Recover every (q, n) value demanded by `node` from its local Map
/// outputs plus the received messages. Bit-exact.
std::vector<IntermediateValue> decode_shuffle(int node, const std::vector<MulticastMessage>& messages,
                                              const PlacementPlan& plan, std::uint64_t seed);

/// Baseline: every missing value unicast from its lowest-id holder.
UncodedShuffleResult uncoded_shuffle(const PlacementPlan& plan);

struct LoadPair {
    Rational uncoded;
    Rational coded;
};

/// Closed-form loads: uncoded 1 - r/K, coded (1/r)(1 - r/K).
LoadPair load_formula(int K, int r);

struct WirelessLoad {
    Rational coded;    ///< 1/mu - 1
    Rational uncoded;  ///< K (1 - mu)
    Rational gain;     ///< uncoded / coded = mu K
};

WirelessLoad wireless_load(const Rational& mu, int K);

/// One message per line: sender, recipients, subset, hex payload, descriptors.
void write_message_trace(std::ostream& out, const std::vector<MulticastMessage>& messages);

}  // namespace codedfog
