#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "redelex/instance.hpp"

namespace redelex {

// Timeless nodes carry this sentinel; they are visible at any seed time.
constexpr int64_t kNoTimestamp = INT64_MIN;

struct EdgeTypeDef {
    std::string child_table;
    std::string fk_name;
    std::string parent_table;
    int child_type = -1;   // node type indices
    int parent_type = -1;
};

// CSR adjacency over one endpoint side of an edge type.
struct Csr {
    std::vector<int64_t> offsets;    // size = node count + 1
    std::vector<int32_t> neighbors;  // opposite endpoint row ids
    std::vector<int64_t> edge_ids;   // aligned with neighbors

    std::pair<const int32_t*, const int32_t*> row(int32_t node) const {
        return {neighbors.data() + offsets[node], neighbors.data() + offsets[node + 1]};
    }
    int64_t degree(int32_t node) const { return offsets[node + 1] - offsets[node]; }
};

struct NodeStore {
    std::string table;
    std::vector<ColumnDef> attr_columns;   // factual columns, key columns excluded
    std::vector<Row> attrs;                // one tuple per node, aligned with rows
    std::vector<int64_t> times;            // kNoTimestamp when undefined; empty if untimed
    bool has_time = false;

    int64_t count() const { return static_cast<int64_t>(attrs.size()); }
    int64_t time_of(int32_t node) const {
        return has_time ? times[static_cast<size_t>(node)] : kNoTimestamp;
    }
};

struct EdgeStore {
    // Stored once as (child_row, parent_row); traversable in both directions.
    std::vector<std::pair<int32_t, int32_t>> edges;
    Csr child_to_parent;  // indexed by child row, neighbors are parent rows
    Csr parent_to_child;  // indexed by parent row, neighbors are child rows

    int64_t count() const { return static_cast<int64_t>(edges.size()); }
};

struct HeteroGraph {
    std::vector<std::string> node_types;        // = table names
    std::vector<EdgeTypeDef> edge_types;        // one per foreign key
    std::vector<NodeStore> nodes;               // per node type
    std::vector<EdgeStore> edges;               // per edge type
    int64_t skipped_dangling = 0;               // FK cells dropped in skip mode
    int64_t skipped_null = 0;                   // FK cells that were null

    int node_type_index(const std::string& table) const;
    int64_t total_nodes() const;
    int64_t total_edges() const;
};

enum class DanglingPolicy { Skip, Error };

struct GraphOptions {
    DanglingPolicy dangling = DanglingPolicy::Skip;
    // Overrides/additions to the per-table time columns from the schema.
    std::unordered_map<std::string, std::string> time_columns;
};

// Compiles an instance into its heterogeneous graph: one node per row, one
// edge type per FK constraint, one edge per non-null matched FK tuple.
HeteroGraph build_graph(const RelationalInstance& instance, const GraphOptions& options = {});

struct DegreeStats {
    std::string edge_type;
    int64_t edge_count = 0;
    // out = child side (edges leaving a child row), in = parent side.
    int64_t out_min = 0, out_max = 0;
    double out_mean = 0.0;
    int64_t in_min = 0, in_max = 0;
    double in_mean = 0.0;
};

std::vector<DegreeStats> degree_profile(const HeteroGraph& graph);

// Little-endian binary snapshot (magic, version, type tables, per-type CSR
// adjacency, timestamp arrays). Byte layout is fixed; see README.
void save_graph_snapshot(const HeteroGraph& graph, const std::string& path);
HeteroGraph load_graph_snapshot(const std::string& path);

}  // namespace redelex
