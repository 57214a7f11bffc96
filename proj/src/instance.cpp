#include "redelex/instance.hpp"

#include "redelex/error.hpp"

namespace redelex {

const Table& RelationalInstance::table(const std::string& name) const {
    int i = schema.table_index(name);
    if (i < 0) raise(ErrorCode::TargetMissing, "unknown table '" + name + "'");
    return tables[static_cast<size_t>(i)];
}

Table& RelationalInstance::table(const std::string& name) {
    int i = schema.table_index(name);
    if (i < 0) raise(ErrorCode::TargetMissing, "unknown table '" + name + "'");
    return tables[static_cast<size_t>(i)];
}

size_t RelationalInstance::total_rows() const {
    size_t n = 0;
    for (const auto& t : tables) n += t.row_count();
    return n;
}

std::unordered_map<CellKey, int64_t, CellKeyHash> RelationalInstance::pk_index(
    const std::string& table_name) const {
    int ti = schema.table_index(table_name);
    if (ti < 0) raise(ErrorCode::TargetMissing, "unknown table '" + table_name + "'");
    const TableDef& def = schema.tables[static_cast<size_t>(ti)];
    const Table& data = tables[static_cast<size_t>(ti)];

    std::vector<int> pk_cols;
    for (const auto& c : def.primary_key) pk_cols.push_back(def.column_index(c));

    std::unordered_map<CellKey, int64_t, CellKeyHash> index;
    index.reserve(data.rows.size());
    for (size_t r = 0; r < data.rows.size(); ++r) {
        CellKey key;
        key.reserve(pk_cols.size());
        bool has_null = false;
        for (int ci : pk_cols) {
            const Cell& c = data.rows[r][static_cast<size_t>(ci)];
            if (c.is_null()) has_null = true;
            key.push_back(c);
        }
        if (has_null || key.empty()) continue;
        index.emplace(std::move(key), static_cast<int64_t>(r));  // first row wins
    }
    return index;
}

}  // namespace redelex
