#pragma once

#include <optional>
#include <string>
#include <vector>

#include "redelex/cell.hpp"

namespace redelex {

enum class DeclaredType : uint8_t { Integer, Real, Text, Boolean, Datetime, Unknown };

enum class SemanticType : uint8_t {
    Numerical,
    Categorical,
    MultiCategorical,
    Text,
    Temporal,
    PrimaryKey,
    ForeignKey,
    Ignored,
    Unassigned,  // pre-inference placeholder
};

const char* declared_type_name(DeclaredType t);
const char* semantic_type_name(SemanticType t);
std::optional<DeclaredType> declared_type_from_name(const std::string& name);
std::optional<SemanticType> semantic_type_from_name(const std::string& name);

struct ColumnDef {
    std::string name;
    DeclaredType declared_type = DeclaredType::Unknown;
    SemanticType semantic_type = SemanticType::Unassigned;
    bool nullable = true;
};

struct TableDef {
    std::string name;
    std::vector<ColumnDef> columns;
    std::vector<std::string> primary_key;  // subset of column names, possibly composite
    std::optional<std::string> time_column;

    int column_index(const std::string& column_name) const;
    const ColumnDef* find_column(const std::string& column_name) const;
    bool is_pk_column(const std::string& column_name) const;
};

struct ForeignKeyDef {
    std::string name;  // unique per schema; auto-derived when the source omits it
    std::string child_table;
    std::vector<std::string> child_columns;
    std::string parent_table;
    std::vector<std::string> parent_columns;
};

struct RelationalSchema {
    std::vector<TableDef> tables;
    std::vector<ForeignKeyDef> foreign_keys;

    int table_index(const std::string& table_name) const;
    const TableDef* find_table(const std::string& table_name) const;
    TableDef* find_table(const std::string& table_name);

    // True when the column participates in the named table's PK or any FK.
    bool is_key_column(const std::string& table_name, const std::string& column_name) const;
    bool is_fk_column(const std::string& table_name, const std::string& column_name) const;
};

struct SchemaViolation {
    std::string table;
    std::string column;  // may be empty
    std::string rule;
    std::string detail;
};

// Empty result iff the schema satisfies all structural invariants:
// unique table/column names, at most one PK per table, FK endpoints exist,
// FK arity matches, and FK parent columns equal the parent's primary key.
std::vector<SchemaViolation> validate_schema(const RelationalSchema& schema);

// ---- semantic type inference ----------------------------------------------

struct InferenceConfig {
    size_t max_sample_rows = 10000;
    double parse_threshold = 0.9;          // name/value pattern confirmation rate
    double unique_ratio_max = 0.1;         // distinct/total cutoff for categorical
    size_t distinct_max = 1000;            // absolute distinct cutoff for categorical
    std::string multi_cat_separator = ","; // token delimiter
    double multi_cat_min_fraction = 0.2;   // rows with >1 token
    double null_ignore_threshold = 0.5;    // null fraction above which signal-less columns drop
    std::vector<std::string> temporal_name_patterns = {"date", "time", "timestamp", "_at"};
};

using Row = std::vector<Cell>;

// Assigns a semantic type to every column of `table` from a data sample.
// Key columns resolve from schema membership alone; the rest run a
// deterministic heuristic cascade over the sample. `fk_columns` lists the
// table's columns that participate in any foreign key.
TableDef infer_semantic_types(const TableDef& table,
                              const std::vector<Row>& sample_rows,
                              const std::vector<std::string>& fk_columns,
                              const InferenceConfig& config = {});

}  // namespace redelex
