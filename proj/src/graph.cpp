#include "redelex/graph.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>

#include "redelex/error.hpp"

namespace redelex {

int HeteroGraph::node_type_index(const std::string& table) const {
    for (size_t i = 0; i < node_types.size(); ++i)
        if (node_types[i] == table) return static_cast<int>(i);
    return -1;
}

int64_t HeteroGraph::total_nodes() const {
    int64_t n = 0;
    for (const auto& s : nodes) n += s.count();
    return n;
}

int64_t HeteroGraph::total_edges() const {
    int64_t n = 0;
    for (const auto& s : edges) n += s.count();
    return n;
}

namespace {

Csr build_csr(const std::vector<std::pair<int32_t, int32_t>>& edges, bool by_child,
              int64_t node_count) {
    Csr csr;
    csr.offsets.assign(static_cast<size_t>(node_count) + 1, 0);
    for (const auto& [c, p] : edges) ++csr.offsets[static_cast<size_t>(by_child ? c : p) + 1];
    for (size_t i = 1; i < csr.offsets.size(); ++i) csr.offsets[i] += csr.offsets[i - 1];
    csr.neighbors.resize(edges.size());
    csr.edge_ids.resize(edges.size());
    std::vector<int64_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
    for (size_t e = 0; e < edges.size(); ++e) {
        int32_t key = by_child ? edges[e].first : edges[e].second;
        int32_t val = by_child ? edges[e].second : edges[e].first;
        int64_t slot = cursor[static_cast<size_t>(key)]++;
        csr.neighbors[static_cast<size_t>(slot)] = val;
        csr.edge_ids[static_cast<size_t>(slot)] = static_cast<int64_t>(e);
    }
    return csr;
}

}  // namespace

HeteroGraph build_graph(const RelationalInstance& instance, const GraphOptions& options) {
    HeteroGraph g;
    const RelationalSchema& schema = instance.schema;

    // Node stores: one per table, attribute tuples drop key columns.
    for (size_t ti = 0; ti < schema.tables.size(); ++ti) {
        const TableDef& def = schema.tables[ti];
        g.node_types.push_back(def.name);

        NodeStore store;
        store.table = def.name;
        std::vector<size_t> attr_idx;
        for (size_t c = 0; c < def.columns.size(); ++c) {
            const ColumnDef& col = def.columns[c];
            bool is_key = col.semantic_type == SemanticType::PrimaryKey ||
                          col.semantic_type == SemanticType::ForeignKey ||
                          schema.is_key_column(def.name, col.name);
            if (is_key) continue;
            store.attr_columns.push_back(col);
            attr_idx.push_back(c);
        }

        std::optional<std::string> time_col = def.time_column;
        auto it = options.time_columns.find(def.name);
        if (it != options.time_columns.end()) time_col = it->second;
        int time_idx = -1;
        if (time_col) {
            time_idx = def.column_index(*time_col);
            if (time_idx < 0)
                raise(ErrorCode::MissingTimeColumn,
                      "time column '" + *time_col + "' not found in table '" + def.name + "'");
            store.has_time = true;
        }

        const Table& data = instance.tables[ti];
        store.attrs.reserve(data.rows.size());
        if (store.has_time) store.times.reserve(data.rows.size());
        for (const auto& row : data.rows) {
            Row tuple;
            tuple.reserve(attr_idx.size());
            for (size_t c : attr_idx) tuple.push_back(row[c]);
            store.attrs.push_back(std::move(tuple));
            if (store.has_time) {
                const Cell& tc = row[static_cast<size_t>(time_idx)];
                if (tc.is_null()) store.times.push_back(kNoTimestamp);
                else if (tc.type() == CellType::Time) store.times.push_back(tc.as_time().seconds);
                else if (tc.type() == CellType::Int) store.times.push_back(tc.as_int());
                else
                    raise(ErrorCode::MissingTimeColumn,
                          "time column '" + *time_col + "' of table '" + def.name +
                              "' holds non-temporal values");
            }
        }
        g.nodes.push_back(std::move(store));
    }

    // Edge stores: one per FK; one edge per non-null, matched FK tuple.
    for (const auto& fk : schema.foreign_keys) {
        EdgeTypeDef et;
        et.child_table = fk.child_table;
        et.fk_name = fk.name;
        et.parent_table = fk.parent_table;
        et.child_type = g.node_type_index(fk.child_table);
        et.parent_type = g.node_type_index(fk.parent_table);

        const TableDef& child_def = *schema.find_table(fk.child_table);
        std::vector<int> child_cols;
        for (const auto& c : fk.child_columns) child_cols.push_back(child_def.column_index(c));

        auto parent_index = instance.pk_index(fk.parent_table);

        EdgeStore store;
        const Table& child_data = instance.table(fk.child_table);
        for (size_t r = 0; r < child_data.rows.size(); ++r) {
            CellKey key;
            bool has_null = false;
            for (int c : child_cols) {
                const Cell& cell = child_data.rows[r][static_cast<size_t>(c)];
                if (cell.is_null()) has_null = true;
                key.push_back(cell);
            }
            if (has_null) {
                ++g.skipped_null;
                continue;
            }
            auto hit = parent_index.find(key);
            if (hit == parent_index.end()) {
                if (options.dangling == DanglingPolicy::Error)
                    raise(ErrorCode::DanglingReference,
                          "row " + std::to_string(r) + " of '" + fk.child_table +
                              "' dangles under FK '" + fk.name + "'");
                ++g.skipped_dangling;
                continue;
            }
            store.edges.emplace_back(static_cast<int32_t>(r),
                                     static_cast<int32_t>(hit->second));
        }

        store.child_to_parent =
            build_csr(store.edges, true, g.nodes[static_cast<size_t>(et.child_type)].count());
        store.parent_to_child =
            build_csr(store.edges, false, g.nodes[static_cast<size_t>(et.parent_type)].count());
        g.edge_types.push_back(std::move(et));
        g.edges.push_back(std::move(store));
    }
    return g;
}

std::vector<DegreeStats> degree_profile(const HeteroGraph& graph) {
    std::vector<DegreeStats> out;
    for (size_t e = 0; e < graph.edge_types.size(); ++e) {
        const EdgeTypeDef& et = graph.edge_types[e];
        const EdgeStore& es = graph.edges[e];
        DegreeStats st;
        st.edge_type = et.fk_name;
        st.edge_count = es.count();

        auto side = [](const Csr& csr, int64_t n, int64_t& mn, int64_t& mx, double& mean) {
            mn = n ? std::numeric_limits<int64_t>::max() : 0;
            mx = 0;
            int64_t total = 0;
            for (int64_t i = 0; i < n; ++i) {
                int64_t d = csr.degree(static_cast<int32_t>(i));
                mn = std::min(mn, d);
                mx = std::max(mx, d);
                total += d;
            }
            if (!n) mn = 0;
            mean = n ? static_cast<double>(total) / static_cast<double>(n) : 0.0;
        };
        side(es.child_to_parent, graph.nodes[static_cast<size_t>(et.child_type)].count(),
             st.out_min, st.out_max, st.out_mean);
        side(es.parent_to_child, graph.nodes[static_cast<size_t>(et.parent_type)].count(),
             st.in_min, st.in_max, st.in_mean);
        out.push_back(std::move(st));
    }
    return out;
}

// ---- binary snapshot ---------------------------------------------------------
//
// Layout (all integers little-endian):
//   magic "RDLXGRF1" (8 bytes)
//   u32 version (=1)
//   u32 node type count N, u32 edge type count E
//   per node type: str table, u64 node count, u8 has_time, [i64 times...]
//   per edge type: str child, str fk_name, str parent, u64 edge count,
//                  [u32 child_row, u32 parent_row ...]
//   str = u32 length + bytes

namespace {

constexpr char kMagic[8] = {'R', 'D', 'L', 'X', 'G', 'R', 'F', '1'};

template <typename T>
void put(std::string& buf, T v) {
    static_assert(std::is_integral_v<T>);
    for (size_t i = 0; i < sizeof(T); ++i)
        buf.push_back(static_cast<char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xff));
}

void put_str(std::string& buf, const std::string& s) {
    put<uint32_t>(buf, static_cast<uint32_t>(s.size()));
    buf += s;
}

struct Cursor {
    const std::string& buf;
    size_t pos = 0;

    template <typename T>
    T get() {
        if (pos + sizeof(T) > buf.size())
            raise(ErrorCode::IoError, "graph snapshot truncated");
        uint64_t v = 0;
        for (size_t i = 0; i < sizeof(T); ++i)
            v |= static_cast<uint64_t>(static_cast<uint8_t>(buf[pos + i])) << (8 * i);
        pos += sizeof(T);
        return static_cast<T>(v);
    }

    std::string get_str() {
        uint32_t n = get<uint32_t>();
        if (pos + n > buf.size()) raise(ErrorCode::IoError, "graph snapshot truncated");
        std::string s = buf.substr(pos, n);
        pos += n;
        return s;
    }
};

}  // namespace

void save_graph_snapshot(const HeteroGraph& graph, const std::string& path) {
    std::string buf;
    buf.append(kMagic, sizeof(kMagic));
    put<uint32_t>(buf, 1);
    put<uint32_t>(buf, static_cast<uint32_t>(graph.node_types.size()));
    put<uint32_t>(buf, static_cast<uint32_t>(graph.edge_types.size()));
    for (size_t i = 0; i < graph.node_types.size(); ++i) {
        const NodeStore& ns = graph.nodes[i];
        put_str(buf, graph.node_types[i]);
        put<uint64_t>(buf, static_cast<uint64_t>(ns.count()));
        put<uint8_t>(buf, ns.has_time ? 1 : 0);
        if (ns.has_time)
            for (int64_t t : ns.times) put<int64_t>(buf, t);
    }
    for (size_t e = 0; e < graph.edge_types.size(); ++e) {
        const EdgeTypeDef& et = graph.edge_types[e];
        put_str(buf, et.child_table);
        put_str(buf, et.fk_name);
        put_str(buf, et.parent_table);
        const EdgeStore& es = graph.edges[e];
        put<uint64_t>(buf, static_cast<uint64_t>(es.count()));
        for (const auto& [c, p] : es.edges) {
            put<uint32_t>(buf, static_cast<uint32_t>(c));
            put<uint32_t>(buf, static_cast<uint32_t>(p));
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoError, "cannot write '" + path + "'");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

HeteroGraph load_graph_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot open '" + path + "'");
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < sizeof(kMagic) || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
        raise(ErrorCode::IoError, "'" + path + "' is not a graph snapshot");

    Cursor cur{buf, sizeof(kMagic)};
    uint32_t version = cur.get<uint32_t>();
    if (version != 1) raise(ErrorCode::IoError, "unsupported snapshot version");

    HeteroGraph g;
    uint32_t n_types = cur.get<uint32_t>();
    uint32_t e_types = cur.get<uint32_t>();
    for (uint32_t i = 0; i < n_types; ++i) {
        NodeStore ns;
        ns.table = cur.get_str();
        uint64_t count = cur.get<uint64_t>();
        ns.has_time = cur.get<uint8_t>() != 0;
        ns.attrs.resize(count);  // attribute payloads are not part of the snapshot
        if (ns.has_time) {
            ns.times.resize(count);
            for (uint64_t r = 0; r < count; ++r) ns.times[r] = cur.get<int64_t>();
        }
        g.node_types.push_back(ns.table);
        g.nodes.push_back(std::move(ns));
    }
    for (uint32_t e = 0; e < e_types; ++e) {
        EdgeTypeDef et;
        et.child_table = cur.get_str();
        et.fk_name = cur.get_str();
        et.parent_table = cur.get_str();
        et.child_type = g.node_type_index(et.child_table);
        et.parent_type = g.node_type_index(et.parent_table);
        EdgeStore es;
        uint64_t count = cur.get<uint64_t>();
        es.edges.reserve(count);
        for (uint64_t i = 0; i < count; ++i) {
            int32_t c = static_cast<int32_t>(cur.get<uint32_t>());
            int32_t p = static_cast<int32_t>(cur.get<uint32_t>());
            es.edges.emplace_back(c, p);
        }
        es.child_to_parent =
            build_csr(es.edges, true, g.nodes[static_cast<size_t>(et.child_type)].count());
        es.parent_to_child =
            build_csr(es.edges, false, g.nodes[static_cast<size_t>(et.parent_type)].count());
        g.edge_types.push_back(std::move(et));
        g.edges.push_back(std::move(es));
    }
    return g;
}

}  // namespace redelex
