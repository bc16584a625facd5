#include "codedfog/shuffle.hpp"

#include "codedfog/mapfn.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace codedfog {

namespace {

/// V(node, batchSubset): concatenation, in function-then-file order, of the
/// intermediate values node needs from that batch.
std::vector<std::uint8_t> demand_block(const PlacementPlan& plan, int node, std::size_t batchIdx,
                                       std::uint64_t seed) {
    const auto& spec = plan.spec;
    std::vector<std::uint8_t> block;
    block.reserve(static_cast<std::size_t>(spec.functions_per_node() * plan.filesPerBatch * spec.T / 8));
    for (std::int64_t fn : plan.reduceAssignment[node - 1]) {
        for (std::int64_t file : plan.batchFiles[batchIdx]) {
            auto v = map_value(fn, file, seed, spec.T);
            block.insert(block.end(), v.begin(), v.end());
        }
    }
    return block;
}

int position_in(const Subset& s, int node) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == node) return static_cast<int>(i);
    }
    throw std::logic_error("position_in: node not in subset");
}

// Bit strings use MSB-first order within each byte. Segment boundaries are
// not byte-aligned in general ((Q/K)*eta*T/r bits).
void xor_bits_into(std::vector<std::uint8_t>& dst, std::int64_t dstOff,
                   const std::vector<std::uint8_t>& src, std::int64_t srcOff, std::int64_t len) {
    if ((dstOff & 7) == 0 && (srcOff & 7) == 0 && (len & 7) == 0) {
        const std::int64_t dstByte = dstOff >> 3;
        const std::int64_t srcByte = srcOff >> 3;
        for (std::int64_t b = 0; b < (len >> 3); ++b) {
            dst[static_cast<std::size_t>(dstByte + b)] ^= src[static_cast<std::size_t>(srcByte + b)];
        }
        return;
    }
    for (std::int64_t b = 0; b < len; ++b) {
        const std::int64_t s = srcOff + b;
        if ((src[static_cast<std::size_t>(s >> 3)] >> (7 - (s & 7))) & 1) {
            const std::int64_t d = dstOff + b;
            dst[static_cast<std::size_t>(d >> 3)] ^= static_cast<std::uint8_t>(1u << (7 - (d & 7)));
        }
    }
}

}  // namespace

CodedShuffleResult coded_shuffle(const PlacementPlan& plan, std::uint64_t seed) {
    const auto& spec = plan.spec;
    CodedShuffleResult result;

    const BigInt totalValueBits = BigInt(spec.Q) * spec.N * spec.T;
    if (spec.r == spec.K) {
        result.report.normalizedLoad = Rational(0);
        return result;
    }

    const std::int64_t blockBits = spec.functions_per_node() * plan.filesPerBatch * spec.T;
    if (blockBits % spec.r != 0) {
        throw std::invalid_argument(
            "shuffle infeasible: (Q/K)*eta*T = " + std::to_string(blockBits) +
            " bits not divisible by r = " + std::to_string(spec.r));
    }
    const std::int64_t segBits = blockBits / spec.r;
    const std::size_t segBytes = static_cast<std::size_t>((segBits + 7) / 8);

    const auto subsets = enumerate_subsets(spec.K, spec.r + 1);
    const std::size_t perSubset = static_cast<std::size_t>(spec.r + 1);
    result.messages.resize(subsets.size() * perSubset);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t si = 0; si < static_cast<std::int64_t>(subsets.size()); ++si) {
        const Subset& S = subsets[si];
        // Demand blocks of every member, each cut into r segments.
        std::vector<std::vector<std::uint8_t>> blocks(S.size());
        for (std::size_t ki = 0; ki < S.size(); ++ki) {
            const Subset batch = subset_without(S, S[ki]);
            blocks[ki] = demand_block(plan, S[ki], plan.batch_index(batch), seed);
        }
        for (std::size_t ji = 0; ji < S.size(); ++ji) {
            const int sender = S[ji];
            MulticastMessage& msg = result.messages[si * perSubset + ji];
            msg.sender = sender;
            msg.subset = S;
            msg.recipients = subset_without(S, sender);
            msg.payloadBits = segBits;
            msg.payload.assign(segBytes, 0);
            for (std::size_t ki = 0; ki < S.size(); ++ki) {
                if (ki == ji) continue;
                const int target = S[ki];
                const Subset batch = subset_without(S, target);
                const int segIdx = position_in(batch, sender);
                xor_bits_into(msg.payload, 0, blocks[ki], segIdx * segBits, segBits);
                msg.descriptors.push_back({target, batch, segIdx});
            }
        }
    }

    result.report.messageCount = static_cast<std::int64_t>(result.messages.size());
    result.report.totalBitsSent = BigInt(result.report.messageCount) * segBits;
    result.report.normalizedLoad = Rational(result.report.totalBitsSent, totalValueBits);
    return result;
}

std::vector<IntermediateValue> decode_shuffle(int node, const std::vector<MulticastMessage>& messages,
                                              const PlacementPlan& plan, std::uint64_t seed) {
    const auto& spec = plan.spec;
    const std::int64_t blockBits = spec.functions_per_node() * plan.filesPerBatch * spec.T;
    const std::int64_t segBits = blockBits / spec.r;

    // Assemble V(node, batch) for every batch the node does not hold.
    std::map<std::size_t, std::vector<std::uint8_t>> assembled;   // batch index -> block bytes
    std::map<std::size_t, std::vector<bool>> segSeen;

    for (const auto& msg : messages) {
        if (!subset_contains(msg.recipients, node)) continue;
        const Subset myBatch = subset_without(msg.subset, node);
        const std::size_t batchIdx = plan.batch_index(myBatch);
        auto [it, inserted] = assembled.try_emplace(batchIdx);
        if (inserted) {
            it->second.assign(static_cast<std::size_t>((blockBits + 7) / 8), 0);
            segSeen[batchIdx].assign(static_cast<std::size_t>(spec.r), false);
        }
        // Cancel every term addressed to other members, all locally computable.
        std::vector<std::uint8_t> seg(msg.payload);
        for (int other : msg.subset) {
            if (other == node || other == msg.sender) continue;
            const Subset otherBatch = subset_without(msg.subset, other);
            const auto block = demand_block(plan, other, plan.batch_index(otherBatch), seed);
            const int segIdx = position_in(otherBatch, msg.sender);
            xor_bits_into(seg, 0, block, segIdx * segBits, segBits);
        }
        const int mySegIdx = position_in(myBatch, msg.sender);
        if (segSeen[batchIdx][static_cast<std::size_t>(mySegIdx)]) continue;   // duplicate delivery
        xor_bits_into(it->second, mySegIdx * segBits, seg, 0, segBits);
        segSeen[batchIdx][static_cast<std::size_t>(mySegIdx)] = true;
    }

    std::vector<IntermediateValue> out;
    std::vector<std::string> unmet;
    const std::size_t valueBytes = static_cast<std::size_t>(spec.T / 8);
    for (std::size_t b = 0; b < plan.batchSubsets.size(); ++b) {
        const bool local = subset_contains(plan.batchSubsets[b], node);
        if (!local) {
            const auto seenIt = segSeen.find(b);
            const bool complete = seenIt != segSeen.end() &&
                std::all_of(seenIt->second.begin(), seenIt->second.end(), [](bool s) { return s; });
            if (!complete) {
                for (std::int64_t fn : plan.reduceAssignment[node - 1]) {
                    for (std::int64_t file : plan.batchFiles[b]) {
                        unmet.push_back("(" + std::to_string(fn) + "," + std::to_string(file) + ")");
                    }
                }
                continue;
            }
        }
        const std::vector<std::uint8_t>* block = local ? nullptr : &assembled.at(b);
        std::size_t offset = 0;
        for (std::int64_t fn : plan.reduceAssignment[node - 1]) {
            for (std::int64_t file : plan.batchFiles[b]) {
                IntermediateValue v;
                v.functionId = fn;
                v.fileId = file;
                if (local) {
                    v.payload = map_value(fn, file, seed, spec.T);
                } else {
                    v.payload.assign(block->begin() + offset, block->begin() + offset + valueBytes);
                }
                offset += valueBytes;
                out.push_back(std::move(v));
            }
        }
    }
    if (!unmet.empty()) {
        std::string what = "decode incomplete at node " + std::to_string(node) + "; unmet demands:";
        for (const auto& u : unmet) what += " " + u;
        throw std::runtime_error(what);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.functionId, a.fileId) < std::tie(b.functionId, b.fileId);
    });
    return out;
}

UncodedShuffleResult uncoded_shuffle(const PlacementPlan& plan) {
    const auto& spec = plan.spec;
    UncodedShuffleResult result;
    for (int node = 1; node <= spec.K; ++node) {
        for (std::size_t b = 0; b < plan.batchSubsets.size(); ++b) {
            if (subset_contains(plan.batchSubsets[b], node)) continue;
            const int holder = plan.batchSubsets[b].front();   // lowest-id holder
            for (std::int64_t fn : plan.reduceAssignment[node - 1]) {
                for (std::int64_t file : plan.batchFiles[b]) {
                    result.unicasts.push_back({holder, node, fn, file});
                }
            }
        }
    }
    result.report.messageCount = static_cast<std::int64_t>(result.unicasts.size());
    result.report.totalBitsSent = BigInt(result.report.messageCount) * spec.T;
    result.report.normalizedLoad =
        Rational(result.report.totalBitsSent, BigInt(spec.Q) * spec.N * spec.T);
    return result;
}

LoadPair load_formula(int K, int r) {
    if (r < 1 || r > K) throw std::invalid_argument("load_formula: r must satisfy 1 <= r <= K");
    LoadPair p;
    p.uncoded = Rational(K - r, K);
    p.coded = Rational(K - r, BigInt(K) * r);
    return p;
}

WirelessLoad wireless_load(const Rational& mu, int K) {
    if (mu < Rational(1, K) || mu > Rational(1)) {
        throw std::invalid_argument("wireless_load: mu must satisfy 1/K <= mu <= 1");
    }
    WirelessLoad w;
    w.coded = Rational(1) / mu - Rational(1);
    w.uncoded = Rational(K) * (Rational(1) - mu);
    w.gain = mu * Rational(K);
    return w;
}

void write_message_trace(std::ostream& out, const std::vector<MulticastMessage>& messages) {
    static const char* hex = "0123456789abcdef";
    for (const auto& msg : messages) {
        nlohmann::json j;
        j["sender"] = msg.sender;
        j["recipients"] = msg.recipients;
        j["subset"] = msg.subset;
        std::string payload;
        payload.reserve(msg.payload.size() * 2);
        for (std::uint8_t byte : msg.payload) {
            payload += hex[byte >> 4];
            payload += hex[byte & 0xF];
        }
        j["payload"] = payload;
        nlohmann::json descs = nlohmann::json::array();
        for (const auto& d : msg.descriptors) {
            descs.push_back({{"target", d.targetNode},
                             {"batch", d.batchSubset},
                             {"segment", d.segmentIndex}});
        }
        j["descriptors"] = descs;
        out << j.dump() << "\n";
    }
}

}  // namespace codedfog
