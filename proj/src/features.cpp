#include "redelex/features.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "redelex/rng.hpp"

namespace redelex {

const char* multiplicity_name(Multiplicity m) {
    switch (m) {
        case Multiplicity::OneToOne: return "one_to_one";
        case Multiplicity::OneToMany: return "one_to_many";
        case Multiplicity::ManyToMany: return "many_to_many";
    }
    return "?";
}

int64_t SchemaFeatures::count(Multiplicity m) const {
    int64_t n = 0;
    for (const auto& [name, mult] : fk_multiplicities)
        if (mult == m) ++n;
    return n;
}

namespace {

bool is_factual(const RelationalSchema& schema, const TableDef& def, const ColumnDef& col) {
    if (col.semantic_type == SemanticType::PrimaryKey ||
        col.semantic_type == SemanticType::ForeignKey)
        return false;
    return !schema.is_key_column(def.name, col.name);
}

int64_t factual_count(const RelationalSchema& schema, const TableDef& def) {
    int64_t n = 0;
    for (const auto& col : def.columns)
        if (is_factual(schema, def, col)) ++n;
    return n;
}

}  // namespace

DatabaseFeatures database_features(const RelationalInstance& instance) {
    DatabaseFeatures out;
    out.n_tables = static_cast<int64_t>(instance.schema.tables.size());
    out.n_fks = static_cast<int64_t>(instance.schema.foreign_keys.size());
    out.total_rows = static_cast<int64_t>(instance.total_rows());
    for (const auto& def : instance.schema.tables) {
        out.n_factual_columns += factual_count(instance.schema, def);
        for (const auto& col : def.columns) ++out.n_by_semantic_type[semantic_type_name(col.semantic_type)];
    }
    for (const auto& fk : instance.schema.foreign_keys) {
        auto parent_index = instance.pk_index(fk.parent_table);
        const TableDef& cdef = *instance.schema.find_table(fk.child_table);
        std::vector<int> cols;
        for (const auto& c : fk.child_columns) cols.push_back(cdef.column_index(c));
        for (const auto& row : instance.table(fk.child_table).rows) {
            CellKey key;
            bool null = false;
            for (int c : cols) {
                if (row[static_cast<size_t>(c)].is_null()) null = true;
                key.push_back(row[static_cast<size_t>(c)]);
            }
            if (!null && parent_index.count(key)) ++out.total_pk_fk_links;
        }
    }
    return out;
}

SchemaFeatures schema_features(const RelationalInstance& instance) {
    SchemaFeatures out;
    const RelationalSchema& schema = instance.schema;
    size_t n_tables_count = schema.tables.size();

    // Junction tables: >=2 FKs and at most one factual column.
    std::unordered_set<std::string> junction_tables;
    for (const auto& def : schema.tables) {
        int64_t fks_here = 0;
        for (const auto& fk : schema.foreign_keys)
            if (fk.child_table == def.name) ++fks_here;
        if (fks_here >= 2 && factual_count(schema, def) <= 1) junction_tables.insert(def.name);
    }

    for (const auto& fk : schema.foreign_keys) {
        Multiplicity mult;
        if (junction_tables.count(fk.child_table)) {
            mult = Multiplicity::ManyToMany;
        } else {
            // unique non-null FK tuples => one_to_one
            const TableDef& cdef = *schema.find_table(fk.child_table);
            std::vector<int> cols;
            for (const auto& c : fk.child_columns) cols.push_back(cdef.column_index(c));
            std::unordered_set<CellKey, CellKeyHash> seen;
            bool duplicated = false;
            for (const auto& row : instance.table(fk.child_table).rows) {
                CellKey key;
                bool null = false;
                for (int c : cols) {
                    if (row[static_cast<size_t>(c)].is_null()) null = true;
                    key.push_back(row[static_cast<size_t>(c)]);
                }
                if (null) continue;
                if (!seen.insert(std::move(key)).second) {
                    duplicated = true;
                    break;
                }
            }
            mult = duplicated ? Multiplicity::OneToMany : Multiplicity::OneToOne;
        }
        out.fk_multiplicities.emplace_back(fk.name, mult);
    }

    // Undirected table-level graph; parallel FK edges collapse for distances
    // but count as cycles.
    std::vector<std::vector<int>> adj(n_tables_count);
    std::vector<int> uf(n_tables_count);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int x) {
        while (uf[static_cast<size_t>(x)] != x) {
            uf[static_cast<size_t>(x)] = uf[static_cast<size_t>(uf[static_cast<size_t>(x)])];
            x = uf[static_cast<size_t>(x)];
        }
        return x;
    };
    std::unordered_set<int64_t> seen_pairs;
    for (const auto& fk : schema.foreign_keys) {
        int a = schema.table_index(fk.child_table);
        int b = schema.table_index(fk.parent_table);
        if (a < 0 || b < 0) continue;
        if (a == b) {
            out.has_cycle = true;  // self-referencing FK
            continue;
        }
        int ra = find(a), rb = find(b);
        if (ra == rb) out.has_cycle = true;  // parallel edge or closed loop
        else uf[static_cast<size_t>(ra)] = rb;
        int64_t key = static_cast<int64_t>(std::min(a, b)) * 100000 + std::max(a, b);
        if (seen_pairs.insert(key).second) {
            adj[static_cast<size_t>(a)].push_back(b);
            adj[static_cast<size_t>(b)].push_back(a);
        }
    }

    // diameter over the largest component
    size_t n = schema.tables.size();
    if (n > 0) {
        std::vector<int> component(n, -1);
        int n_comp = 0;
        std::vector<int64_t> comp_size;
        for (size_t s = 0; s < n; ++s) {
            if (component[s] >= 0) continue;
            int id = n_comp++;
            comp_size.push_back(0);
            std::queue<int> q;
            q.push(static_cast<int>(s));
            component[s] = id;
            while (!q.empty()) {
                int u = q.front();
                q.pop();
                ++comp_size[static_cast<size_t>(id)];
                for (int v : adj[static_cast<size_t>(u)])
                    if (component[static_cast<size_t>(v)] < 0) {
                        component[static_cast<size_t>(v)] = id;
                        q.push(v);
                    }
            }
        }
        int largest = static_cast<int>(std::max_element(comp_size.begin(), comp_size.end()) -
                                       comp_size.begin());
        out.diameter_on_largest_component = n_comp > 1;

        int64_t diameter = 0;
        std::vector<int64_t> dist(n);
        for (size_t s = 0; s < n; ++s) {
            if (component[s] != largest) continue;
            std::fill(dist.begin(), dist.end(), -1);
            std::queue<int> q;
            q.push(static_cast<int>(s));
            dist[s] = 0;
            while (!q.empty()) {
                int u = q.front();
                q.pop();
                diameter = std::max(diameter, dist[static_cast<size_t>(u)]);
                for (int v : adj[static_cast<size_t>(u)])
                    if (dist[static_cast<size_t>(v)] < 0) {
                        dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
                        q.push(v);
                    }
            }
        }
        out.schema_diameter = diameter;
    }
    return out;
}

TaskFeatures task_features(const RelationalInstance& instance, const TaskSpec& spec,
                           const TrainingTable& table, const SchemaFeatures& schema) {
    TaskFeatures out;
    out.temporal = spec.temporal;
    int64_t train = table.count(Split::Train);
    out.n_train_samples = train > 0 ? train : static_cast<int64_t>(table.size());

    std::unordered_map<std::string, Multiplicity> mult;
    for (const auto& [name, m] : schema.fk_multiplicities) mult.emplace(name, m);
    for (const auto& fk : instance.schema.foreign_keys) {
        if (fk.child_table != spec.target_table && fk.parent_table != spec.target_table)
            continue;
        auto it = mult.find(fk.name);
        if (it == mult.end()) continue;
        switch (it->second) {
            case Multiplicity::OneToOne: ++out.target_one_to_one; break;
            case Multiplicity::OneToMany: ++out.target_one_to_many; break;
            case Multiplicity::ManyToMany: ++out.target_many_to_many; break;
        }
    }
    if (const TableDef* def = instance.schema.find_table(spec.target_table)) {
        out.target_factual_columns = factual_count(instance.schema, *def);
        for (const auto& col : def->columns)
            ++out.target_by_semantic_type[semantic_type_name(col.semantic_type)];
    }
    return out;
}

GraphFeatures graph_features(const HeteroGraph& graph, const GraphFeatureConfig& config) {
    GraphFeatures out;

    // homogenize: global ids with per-type offsets; simple undirected edges
    size_t n_types = graph.node_types.size();
    std::vector<int64_t> offset(n_types + 1, 0);
    for (size_t t = 0; t < n_types; ++t) offset[t + 1] = offset[t] + graph.nodes[t].count();
    int64_t n = offset[n_types];
    out.n_nodes = n;
    if (n == 0) return out;

    std::unordered_set<int64_t> edge_set;
    for (size_t e = 0; e < graph.edge_types.size(); ++e) {
        const EdgeTypeDef& et = graph.edge_types[e];
        for (const auto& [c, p] : graph.edges[e].edges) {
            int64_t u = offset[static_cast<size_t>(et.child_type)] + c;
            int64_t v = offset[static_cast<size_t>(et.parent_type)] + p;
            if (u == v) continue;  // simple graph: no self loops
            int64_t a = std::min(u, v), b = std::max(u, v);
            edge_set.insert(a * (n + 1) + b);
        }
    }
    out.n_simple_edges = static_cast<int64_t>(edge_set.size());
    out.density = n > 1 ? 2.0 * static_cast<double>(out.n_simple_edges) /
                              (static_cast<double>(n) * static_cast<double>(n - 1))
                        : 0.0;

    std::vector<std::vector<int64_t>> adj(static_cast<size_t>(n));
    for (int64_t packed : edge_set) {
        int64_t a = packed / (n + 1), b = packed % (n + 1);
        adj[static_cast<size_t>(a)].push_back(b);
        adj[static_cast<size_t>(b)].push_back(a);
    }

    std::vector<int64_t> sources;
    if (n <= config.exact_threshold) {
        sources.resize(static_cast<size_t>(n));
        std::iota(sources.begin(), sources.end(), 0);
    } else {
        out.approximate = true;
        // sample distinct probe nodes deterministically
        std::vector<int64_t> ids(static_cast<size_t>(n));
        std::iota(ids.begin(), ids.end(), 0);
        Rng rng(config.probe_seed);
        size_t take = static_cast<size_t>(std::min<int64_t>(config.n_probe, n));
        for (size_t i = 0; i < take; ++i) {
            size_t j = i + static_cast<size_t>(rng.next_below(ids.size() - i));
            std::swap(ids[i], ids[j]);
        }
        sources.assign(ids.begin(), ids.begin() + static_cast<long>(take));
    }

    double ecc_sum = 0.0;
    std::vector<int64_t> dist(static_cast<size_t>(n));
    for (int64_t s : sources) {
        std::fill(dist.begin(), dist.end(), -1);
        std::queue<int64_t> q;
        q.push(s);
        dist[static_cast<size_t>(s)] = 0;
        int64_t ecc = 0;
        while (!q.empty()) {
            int64_t u = q.front();
            q.pop();
            ecc = std::max(ecc, dist[static_cast<size_t>(u)]);
            for (int64_t v : adj[static_cast<size_t>(u)])
                if (dist[static_cast<size_t>(v)] < 0) {
                    dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
                    q.push(v);
                }
        }
        ecc_sum += static_cast<double>(ecc);
    }
    out.avg_eccentricity = ecc_sum / static_cast<double>(sources.size());
    return out;
}

DbClassification classify_database(const SchemaFeatures& schema,
                                   const DatabaseFeatures& database,
                                   const ClassifyConfig& config) {
    DbClassification out;
    int64_t n_fks = static_cast<int64_t>(schema.fk_multiplicities.size());
    out.tabular_like =
        n_fks == 0 || schema.count(Multiplicity::OneToOne) == n_fks;

    double mean_factual =
        database.n_tables > 0
            ? static_cast<double>(database.n_factual_columns) /
                  static_cast<double>(database.n_tables)
            : 0.0;
    bool has_many_to_one = schema.count(Multiplicity::OneToMany) > 0 ||
                           schema.count(Multiplicity::ManyToMany) > 0;
    out.graph_like =
        mean_factual <= config.graph_like_max_factual_per_table && has_many_to_one;
    return out;
}

FeatureReport analyze_database(const RelationalInstance& instance, const HeteroGraph* graph,
                               const TaskSpec* task, const TrainingTable* table,
                               const GraphFeatureConfig& graph_config,
                               const ClassifyConfig& classify_config) {
    FeatureReport report;
    report.database = database_features(instance);
    report.schema = schema_features(instance);
    if (task && table)
        report.task = task_features(instance, *task, *table, report.schema);
    if (graph) report.graph = graph_features(*graph, graph_config);
    report.classification = classify_database(report.schema, report.database, classify_config);
    return report;
}

}  // namespace redelex
