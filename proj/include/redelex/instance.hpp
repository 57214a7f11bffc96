#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "redelex/cell.hpp"
#include "redelex/schema.hpp"

namespace redelex {

struct Warning {
    std::string table;
    std::string column;
    std::string message;
};

struct Table {
    std::vector<Row> rows;

    size_t row_count() const { return rows.size(); }
};

// A loaded database: schema plus typed row data, immutable after assembly.
struct RelationalInstance {
    RelationalSchema schema;
    std::vector<Table> tables;  // aligned with schema.tables
    std::vector<Warning> warnings;

    const Table& table(const std::string& name) const;
    Table& table(const std::string& name);

    size_t total_rows() const;

    // Index of PK value tuples to row ordinal for one table.
    std::unordered_map<CellKey, int64_t, CellKeyHash> pk_index(
        const std::string& table_name) const;
};

}  // namespace redelex
