#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "redelex/graph.hpp"
#include "redelex/instance.hpp"
#include "redelex/task.hpp"

namespace redelex {

enum class Multiplicity : uint8_t { OneToOne, OneToMany, ManyToMany };
const char* multiplicity_name(Multiplicity m);

struct DatabaseFeatures {
    int64_t n_tables = 0;
    int64_t n_fks = 0;
    int64_t n_factual_columns = 0;  // non-key columns
    std::map<std::string, int64_t> n_by_semantic_type;
    int64_t total_rows = 0;
    int64_t total_pk_fk_links = 0;  // realized child-parent matches
};

struct SchemaFeatures {
    std::vector<std::pair<std::string, Multiplicity>> fk_multiplicities;
    int64_t schema_diameter = 0;
    bool diameter_on_largest_component = false;  // set when the table graph is disconnected
    bool has_cycle = false;

    int64_t count(Multiplicity m) const;
};

struct TaskFeatures {
    bool temporal = false;
    int64_t n_train_samples = 0;
    int64_t target_one_to_one = 0;   // multiplicities of FKs touching the target table
    int64_t target_one_to_many = 0;
    int64_t target_many_to_many = 0;
    int64_t target_factual_columns = 0;
    std::map<std::string, int64_t> target_by_semantic_type;
};

struct GraphFeatureConfig {
    int64_t exact_threshold = 50000;  // all-pairs BFS cap
    int64_t n_probe = 256;
    uint64_t probe_seed = 12345;
};

struct GraphFeatures {
    double avg_eccentricity = 0.0;
    bool approximate = false;
    double density = 0.0;
    int64_t n_nodes = 0;
    int64_t n_simple_edges = 0;
};

struct DbClassification {
    bool tabular_like = false;
    bool graph_like = false;
};

struct ClassifyConfig {
    double graph_like_max_factual_per_table = 2.0;
};

struct FeatureReport {
    DatabaseFeatures database;
    SchemaFeatures schema;
    std::optional<TaskFeatures> task;
    std::optional<GraphFeatures> graph;
    DbClassification classification;
};

DatabaseFeatures database_features(const RelationalInstance& instance);

// Multiplicity from data (unique FK values -> 1:1), junction-table heuristic
// for m:n, diameter and cycle detection on the undirected table-level graph.
SchemaFeatures schema_features(const RelationalInstance& instance);

TaskFeatures task_features(const RelationalInstance& instance, const TaskSpec& spec,
                           const TrainingTable& table, const SchemaFeatures& schema);

// Average eccentricity and density of the homogenized undirected simple graph;
// exact below config.exact_threshold nodes, probe-sampled above.
GraphFeatures graph_features(const HeteroGraph& graph, const GraphFeatureConfig& config = {});

// Pure function of already-computed feature blocks; reads no row data.
DbClassification classify_database(const SchemaFeatures& schema, const DatabaseFeatures& database,
                                   const ClassifyConfig& config = {});

// Convenience: the full report in one call (task/graph blocks optional).
FeatureReport analyze_database(const RelationalInstance& instance,
                               const HeteroGraph* graph = nullptr,
                               const TaskSpec* task = nullptr,
                               const TrainingTable* table = nullptr,
                               const GraphFeatureConfig& graph_config = {},
                               const ClassifyConfig& classify_config = {});

}  // namespace redelex
