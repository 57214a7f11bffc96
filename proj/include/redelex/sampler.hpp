#pragma once

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "redelex/graph.hpp"

namespace redelex {

constexpr int64_t kUnlimitedFanout = std::numeric_limits<int64_t>::max();

struct NodeRef {
    int type = -1;
    int32_t row = -1;
    bool operator==(const NodeRef&) const = default;
};

struct SeedSpec {
    NodeRef node;
    int64_t time = kNoTimestamp;  // prediction timestamp (temporal mode)
};

struct LocalNodes {
    std::vector<int32_t> globals;                    // local -> global row id
    std::unordered_map<int32_t, int32_t> local_of;   // global row id -> local
    std::vector<int32_t> hop;                        // discovery hop (seeds: 0)
    std::vector<int64_t> anchor_time;                // inherited seed time

    int32_t count() const { return static_cast<int32_t>(globals.size()); }
    int find(int32_t global) const {
        auto it = local_of.find(global);
        return it == local_of.end() ? -1 : it->second;
    }
};

struct SampledSubgraph {
    const HeteroGraph* graph = nullptr;
    bool temporal = false;
    std::vector<SeedSpec> seeds;
    std::vector<int32_t> seed_local;  // local index of each seed in its type

    std::vector<LocalNodes> nodes;  // per node type
    // per edge type: (child_local, parent_local), deduplicated, sorted
    std::vector<std::vector<std::pair<int32_t, int32_t>>> edges;

    int64_t total_nodes() const;
    int64_t total_edges() const;
};

// L-hop frontier expansion; per expanded node, per incident relation and
// direction, at most fanout_per_hop[h] neighbors picked uniformly without
// replacement. A node reached twice is reused, never duplicated.
SampledSubgraph sample_static(const HeteroGraph& graph, const std::vector<NodeRef>& seeds,
                              const std::vector<int64_t>& fanout_per_hop, uint64_t rng_seed);

// As sample_static, but a candidate u is eligible only when tau(u) is
// undefined or tau(u) <= anchor time (strict: <) inherited from the seed
// that first discovered the expanding node.
SampledSubgraph sample_temporal(const HeteroGraph& graph, const std::vector<SeedSpec>& seeds,
                                const std::vector<int64_t>& fanout_per_hop, uint64_t rng_seed,
                                bool strict_older = false);

}  // namespace redelex
