#include "redelex/sampler.hpp"

#include <algorithm>
#include <unordered_set>

#include "redelex/error.hpp"
#include "redelex/rng.hpp"

namespace redelex {

int64_t SampledSubgraph::total_nodes() const {
    int64_t n = 0;
    for (const auto& ln : nodes) n += ln.count();
    return n;
}

int64_t SampledSubgraph::total_edges() const {
    int64_t n = 0;
    for (const auto& el : edges) n += static_cast<int64_t>(el.size());
    return n;
}

namespace {

struct Frontier {
    int type;
    int32_t global;
    int64_t anchor;
};

uint64_t pack_edge(int32_t child, int32_t parent) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(child)) << 32) |
           static_cast<uint32_t>(parent);
}

class Expansion {
  public:
    Expansion(const HeteroGraph& graph, const std::vector<SeedSpec>& seeds,
              const std::vector<int64_t>& fanout, uint64_t rng_seed, bool temporal,
              bool strict)
        : graph_(graph), fanout_(fanout), rng_(rng_seed), temporal_(temporal),
          strict_(strict) {
        for (int64_t cap : fanout_)
            if (cap < 1) raise(ErrorCode::BadSpec, "fanout caps must be >= 1");

        out_.graph = &graph;
        out_.temporal = temporal;
        out_.seeds = seeds;
        out_.nodes.resize(graph.node_types.size());
        edge_sets_.resize(graph.edge_types.size());

        for (const auto& seed : seeds) {
            if (seed.node.type < 0 ||
                seed.node.type >= static_cast<int>(graph.node_types.size()) ||
                seed.node.row < 0 ||
                seed.node.row >= graph.nodes[static_cast<size_t>(seed.node.type)].count())
                raise(ErrorCode::UnknownSeed,
                      "seed (" + std::to_string(seed.node.type) + ", " +
                          std::to_string(seed.node.row) + ") is out of range");
            auto [local, fresh] = add_node(seed.node.type, seed.node.row, 0, seed.time);
            if (fresh) frontier_.push_back({seed.node.type, seed.node.row, seed.time});
            out_.seed_local.push_back(local);
        }
    }

    SampledSubgraph run() {
        for (size_t h = 0; h < fanout_.size(); ++h) {
            std::vector<Frontier> next;
            for (const Frontier& f : frontier_) expand(f, fanout_[h], next, h);
            frontier_ = std::move(next);
            if (frontier_.empty()) break;
        }
        finalize();
        return std::move(out_);
    }

  private:
    std::pair<int32_t, bool> add_node(int type, int32_t global, int32_t hop, int64_t anchor) {
        LocalNodes& ln = out_.nodes[static_cast<size_t>(type)];
        int existing = ln.find(global);
        if (existing >= 0) return {static_cast<int32_t>(existing), false};
        int32_t local = ln.count();
        ln.globals.push_back(global);
        ln.local_of.emplace(global, local);
        ln.hop.push_back(hop);
        ln.anchor_time.push_back(anchor);
        return {local, true};
    }

    bool eligible(int type, int32_t row, int64_t anchor) const {
        if (!temporal_) return true;
        int64_t tau = graph_.nodes[static_cast<size_t>(type)].time_of(row);
        if (tau == kNoTimestamp) return true;  // timeless table
        return strict_ ? tau < anchor : tau <= anchor;
    }

    void expand(const Frontier& f, int64_t cap, std::vector<Frontier>& next, size_t hop) {
        for (size_t e = 0; e < graph_.edge_types.size(); ++e) {
            const EdgeTypeDef& et = graph_.edge_types[e];
            if (et.child_type == f.type)
                expand_side(f, cap, next, e, /*to_parent=*/true,
                            static_cast<int32_t>(hop) + 1);
            if (et.parent_type == f.type)
                expand_side(f, cap, next, e, /*to_parent=*/false,
                            static_cast<int32_t>(hop) + 1);
        }
    }

    void expand_side(const Frontier& f, int64_t cap, std::vector<Frontier>& next, size_t e,
                     bool to_parent, int32_t next_hop) {
        const EdgeTypeDef& et = graph_.edge_types[e];
        const Csr& csr = to_parent ? graph_.edges[e].child_to_parent
                                   : graph_.edges[e].parent_to_child;
        int other_type = to_parent ? et.parent_type : et.child_type;

        auto [begin, end] = csr.row(f.global);
        scratch_.clear();
        for (const int32_t* it = begin; it != end; ++it)
            if (eligible(other_type, *it, f.anchor)) scratch_.push_back(*it);

        size_t take = scratch_.size();
        if (cap != kUnlimitedFanout && static_cast<int64_t>(take) > cap) {
            take = static_cast<size_t>(cap);
            // partial Fisher-Yates: uniform choice without replacement
            for (size_t i = 0; i < take; ++i) {
                size_t j = i + static_cast<size_t>(rng_.next_below(scratch_.size() - i));
                std::swap(scratch_[i], scratch_[j]);
            }
        }
        for (size_t i = 0; i < take; ++i) {
            int32_t other = scratch_[i];
            auto [local, fresh] = add_node(other_type, other, next_hop, f.anchor);
            (void)local;
            if (fresh) next.push_back({other_type, other, f.anchor});
            int32_t child = to_parent ? f.global : other;
            int32_t parent = to_parent ? other : f.global;
            edge_sets_[e].insert(pack_edge(child, parent));
        }
    }

    void finalize() {
        out_.edges.resize(graph_.edge_types.size());
        for (size_t e = 0; e < edge_sets_.size(); ++e) {
            const EdgeTypeDef& et = graph_.edge_types[e];
            const LocalNodes& child_ln = out_.nodes[static_cast<size_t>(et.child_type)];
            const LocalNodes& parent_ln = out_.nodes[static_cast<size_t>(et.parent_type)];
            auto& list = out_.edges[e];
            list.reserve(edge_sets_[e].size());
            for (uint64_t packed : edge_sets_[e]) {
                int32_t child = static_cast<int32_t>(packed >> 32);
                int32_t parent = static_cast<int32_t>(packed & 0xffffffffULL);
                list.emplace_back(child_ln.find(child), parent_ln.find(parent));
            }
            // canonical order keeps downstream reductions permutation-free
            std::sort(list.begin(), list.end());
        }
    }

    const HeteroGraph& graph_;
    const std::vector<int64_t>& fanout_;
    Rng rng_;
    bool temporal_;
    bool strict_;
    SampledSubgraph out_;
    std::vector<Frontier> frontier_;
    std::vector<int32_t> scratch_;
    std::vector<std::unordered_set<uint64_t>> edge_sets_;
};

}  // namespace

SampledSubgraph sample_static(const HeteroGraph& graph, const std::vector<NodeRef>& seeds,
                              const std::vector<int64_t>& fanout_per_hop, uint64_t rng_seed) {
    std::vector<SeedSpec> specs;
    specs.reserve(seeds.size());
    for (const auto& s : seeds) specs.push_back({s, kNoTimestamp});
    Expansion ex(graph, specs, fanout_per_hop, rng_seed, /*temporal=*/false, false);
    return ex.run();
}

SampledSubgraph sample_temporal(const HeteroGraph& graph, const std::vector<SeedSpec>& seeds,
                                const std::vector<int64_t>& fanout_per_hop, uint64_t rng_seed,
                                bool strict_older) {
    Expansion ex(graph, seeds, fanout_per_hop, rng_seed, /*temporal=*/true, strict_older);
    return ex.run();
}

}  // namespace redelex
