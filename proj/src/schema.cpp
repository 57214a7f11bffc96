#include "redelex/schema.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "redelex/error.hpp"

namespace redelex {

const char* declared_type_name(DeclaredType t) {
    switch (t) {
        case DeclaredType::Integer: return "integer";
        case DeclaredType::Real: return "real";
        case DeclaredType::Text: return "text";
        case DeclaredType::Boolean: return "boolean";
        case DeclaredType::Datetime: return "datetime";
        case DeclaredType::Unknown: return "unknown";
    }
    return "unknown";
}

const char* semantic_type_name(SemanticType t) {
    switch (t) {
        case SemanticType::Numerical: return "numerical";
        case SemanticType::Categorical: return "categorical";
        case SemanticType::MultiCategorical: return "multi_categorical";
        case SemanticType::Text: return "text";
        case SemanticType::Temporal: return "temporal";
        case SemanticType::PrimaryKey: return "primary_key";
        case SemanticType::ForeignKey: return "foreign_key";
        case SemanticType::Ignored: return "ignored";
        case SemanticType::Unassigned: return "unassigned";
    }
    return "unassigned";
}

std::optional<DeclaredType> declared_type_from_name(const std::string& name) {
    if (name == "integer") return DeclaredType::Integer;
    if (name == "real") return DeclaredType::Real;
    if (name == "text") return DeclaredType::Text;
    if (name == "boolean") return DeclaredType::Boolean;
    if (name == "datetime") return DeclaredType::Datetime;
    if (name == "unknown") return DeclaredType::Unknown;
    return std::nullopt;
}

std::optional<SemanticType> semantic_type_from_name(const std::string& name) {
    if (name == "numerical") return SemanticType::Numerical;
    if (name == "categorical") return SemanticType::Categorical;
    if (name == "multi_categorical") return SemanticType::MultiCategorical;
    if (name == "text") return SemanticType::Text;
    if (name == "temporal") return SemanticType::Temporal;
    if (name == "primary_key") return SemanticType::PrimaryKey;
    if (name == "foreign_key") return SemanticType::ForeignKey;
    if (name == "ignored") return SemanticType::Ignored;
    return std::nullopt;
}

int TableDef::column_index(const std::string& column_name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == column_name) return static_cast<int>(i);
    return -1;
}

const ColumnDef* TableDef::find_column(const std::string& column_name) const {
    int i = column_index(column_name);
    return i < 0 ? nullptr : &columns[i];
}

bool TableDef::is_pk_column(const std::string& column_name) const {
    return std::find(primary_key.begin(), primary_key.end(), column_name) !=
           primary_key.end();
}

int RelationalSchema::table_index(const std::string& table_name) const {
    for (size_t i = 0; i < tables.size(); ++i)
        if (tables[i].name == table_name) return static_cast<int>(i);
    return -1;
}

const TableDef* RelationalSchema::find_table(const std::string& table_name) const {
    int i = table_index(table_name);
    return i < 0 ? nullptr : &tables[i];
}

TableDef* RelationalSchema::find_table(const std::string& table_name) {
    int i = table_index(table_name);
    return i < 0 ? nullptr : &tables[i];
}

bool RelationalSchema::is_fk_column(const std::string& table_name,
                                    const std::string& column_name) const {
    for (const auto& fk : foreign_keys) {
        if (fk.child_table != table_name) continue;
        if (std::find(fk.child_columns.begin(), fk.child_columns.end(), column_name) !=
            fk.child_columns.end())
            return true;
    }
    return false;
}

bool RelationalSchema::is_key_column(const std::string& table_name,
                                     const std::string& column_name) const {
    const TableDef* t = find_table(table_name);
    if (t && t->is_pk_column(column_name)) return true;
    return is_fk_column(table_name, column_name);
}

std::vector<SchemaViolation> validate_schema(const RelationalSchema& schema) {
    std::vector<SchemaViolation> out;

    std::unordered_set<std::string> seen_tables;
    for (const auto& t : schema.tables) {
        if (!seen_tables.insert(t.name).second)
            out.push_back({t.name, "", "duplicate_table_name", "table name appears more than once"});

        std::unordered_set<std::string> seen_cols;
        for (const auto& c : t.columns) {
            if (!seen_cols.insert(c.name).second)
                out.push_back({t.name, c.name, "duplicate_column_name",
                               "column name appears more than once in table"});
        }
        for (const auto& pk_col : t.primary_key) {
            if (t.column_index(pk_col) < 0)
                out.push_back({t.name, pk_col, "pk_column_missing",
                               "primary key names a column absent from the table"});
        }
    }

    std::unordered_set<std::string> fk_names;
    for (const auto& fk : schema.foreign_keys) {
        if (!fk.name.empty() && !fk_names.insert(fk.name).second)
            out.push_back({fk.child_table, "", "duplicate_fk_name",
                           "foreign key name '" + fk.name + "' appears more than once"});

        const TableDef* child = schema.find_table(fk.child_table);
        const TableDef* parent = schema.find_table(fk.parent_table);
        if (!child) {
            out.push_back({fk.child_table, "", "fk_child_table_missing",
                           "foreign key '" + fk.name + "' names an unknown child table"});
            continue;
        }
        if (!parent) {
            out.push_back({fk.parent_table, "", "fk_parent_table_missing",
                           "foreign key '" + fk.name + "' names an unknown parent table"});
            continue;
        }
        if (fk.child_columns.size() != fk.parent_columns.size())
            out.push_back({fk.child_table, "", "fk_arity_mismatch",
                           "foreign key '" + fk.name + "' child/parent column lists differ in length"});
        for (const auto& c : fk.child_columns)
            if (child->column_index(c) < 0)
                out.push_back({fk.child_table, c, "fk_child_column_missing",
                               "foreign key '" + fk.name + "' names an unknown child column"});
        for (const auto& c : fk.parent_columns)
            if (parent->column_index(c) < 0)
                out.push_back({fk.parent_table, c, "fk_parent_column_missing",
                               "foreign key '" + fk.name + "' names an unknown parent column"});
        if (fk.parent_columns != parent->primary_key)
            out.push_back({fk.parent_table, "", "fk_parent_not_pk",
                           "foreign key '" + fk.name +
                               "' must reference the parent's primary key"});
    }
    return out;
}

// ---- semantic type inference ----------------------------------------------

namespace {

std::string lower(const std::string& s) {
    std::string r;
    r.reserve(s.size());
    for (char ch : s) r.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    return r;
}

bool name_suggests_temporal(const std::string& col_name, const InferenceConfig& cfg) {
    std::string n = lower(col_name);
    for (const auto& pat : cfg.temporal_name_patterns)
        if (n.find(pat) != std::string::npos) return true;
    return false;
}

bool cell_parses_as_time(const Cell& c) {
    if (c.type() == CellType::Time) return true;
    if (c.type() == CellType::Text) return parse_timestamp(c.as_text()).has_value();
    return false;
}

bool cell_parses_as_number(const Cell& c) {
    switch (c.type()) {
        case CellType::Int:
        case CellType::Real:
            return true;
        case CellType::Text:
            return parse_real(c.as_text()).has_value();
        default:
            return false;
    }
}

struct ColumnSample {
    size_t total = 0;
    size_t nulls = 0;
    size_t time_parseable = 0;
    size_t numeric_parseable = 0;
    size_t distinct = 0;
    size_t multi_token = 0;  // text cells with >1 separator-delimited token
};

ColumnSample scan_column(const std::vector<Row>& rows, size_t col,
                         const InferenceConfig& cfg) {
    ColumnSample s;
    s.total = rows.size();
    std::unordered_set<Cell, CellHash> distinct;
    for (const auto& row : rows) {
        const Cell& c = row[col];
        if (c.is_null()) {
            ++s.nulls;
            continue;
        }
        distinct.insert(c);
        if (cell_parses_as_time(c)) ++s.time_parseable;
        if (cell_parses_as_number(c)) ++s.numeric_parseable;
        if (c.type() == CellType::Text && !cfg.multi_cat_separator.empty()) {
            size_t tokens = 1, pos = 0;
            const std::string& txt = c.as_text();
            while ((pos = txt.find(cfg.multi_cat_separator, pos)) != std::string::npos) {
                ++tokens;
                pos += cfg.multi_cat_separator.size();
            }
            if (tokens > 1) ++s.multi_token;
        }
    }
    s.distinct = distinct.size();
    return s;
}

}  // namespace

TableDef infer_semantic_types(const TableDef& table,
                              const std::vector<Row>& sample_rows,
                              const std::vector<std::string>& fk_columns,
                              const InferenceConfig& config) {
    if (sample_rows.empty())
        raise(ErrorCode::EmptySample, "type inference needs a non-empty sample for table '" +
                                          table.name + "'");
    for (const auto& row : sample_rows)
        if (row.size() != table.columns.size())
            raise(ErrorCode::ArityMismatch, "sample row arity does not match table '" +
                                                table.name + "'");

    TableDef out = table;
    for (size_t i = 0; i < out.columns.size(); ++i) {
        ColumnDef& col = out.columns[i];

        // (1) key membership wins over any content signal.
        if (std::find(fk_columns.begin(), fk_columns.end(), col.name) != fk_columns.end()) {
            col.semantic_type = SemanticType::ForeignKey;
            continue;
        }
        if (table.is_pk_column(col.name)) {
            col.semantic_type = SemanticType::PrimaryKey;
            continue;
        }

        ColumnSample s = scan_column(sample_rows, i, config);
        size_t non_null = s.total - s.nulls;
        double null_ratio = s.total ? static_cast<double>(s.nulls) / s.total : 0.0;
        auto rate = [&](size_t k) {
            return non_null ? static_cast<double>(k) / non_null : 0.0;
        };

        // Declared storage classes that need no disambiguation.
        if (col.declared_type == DeclaredType::Datetime) {
            col.semantic_type = SemanticType::Temporal;
            continue;
        }
        if (col.declared_type == DeclaredType::Boolean) {
            col.semantic_type = SemanticType::Categorical;
            continue;
        }

        // (2) temporal by name pattern, confirmed by parseable values.
        if (name_suggests_temporal(col.name, config) && non_null > 0 &&
            rate(s.time_parseable) >= config.parse_threshold) {
            col.semantic_type = SemanticType::Temporal;
            continue;
        }

        // (3) value patterns in text-like columns.
        bool text_like = col.declared_type == DeclaredType::Text ||
                         col.declared_type == DeclaredType::Unknown;
        if (text_like && non_null > 0) {
            if (rate(s.time_parseable) >= config.parse_threshold) {
                col.semantic_type = SemanticType::Temporal;
                continue;
            }
            if (rate(s.numeric_parseable) >= config.parse_threshold) {
                col.semantic_type = SemanticType::Numerical;
                continue;
            }
        }

        // (4)+(5) low-cardinality columns are categorical; a delimiter signal
        // inside a categorical candidate upgrades it to multi-categorical.
        double unique_ratio = s.total ? static_cast<double>(s.distinct) / s.total : 1.0;
        if (non_null > 0 && unique_ratio <= config.unique_ratio_max &&
            s.distinct <= config.distinct_max) {
            if (rate(s.multi_token) >= config.multi_cat_min_fraction)
                col.semantic_type = SemanticType::MultiCategorical;
            else
                col.semantic_type = SemanticType::Categorical;
            continue;
        }

        // (6) fallback by storage class; mostly-null columns without any
        // signal above carry no usable content.
        if (null_ratio > config.null_ignore_threshold) {
            col.semantic_type = SemanticType::Ignored;
            continue;
        }
        col.semantic_type = (col.declared_type == DeclaredType::Integer ||
                             col.declared_type == DeclaredType::Real)
                                ? SemanticType::Numerical
                                : SemanticType::Text;
    }
    return out;
}

}  // namespace redelex
