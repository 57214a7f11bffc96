#include "redelex/ingest.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "redelex/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace redelex {

namespace {

// ---- CSV -------------------------------------------------------------------

struct CsvField {
    std::string text;
    bool quoted = false;
};

// RFC 4180 flavor: comma separator, '"' quoting, '""' escape. Keeps the
// quoted flag so an unquoted empty field (null) differs from `""`.
class CsvReader {
  public:
    explicit CsvReader(std::string data) : data_(std::move(data)) {}

    bool next_record(std::vector<CsvField>& out) {
        out.clear();
        if (pos_ >= data_.size()) return false;
        CsvField field;
        bool in_quotes = false;
        bool any = false;
        while (pos_ < data_.size()) {
            char c = data_[pos_];
            if (in_quotes) {
                if (c == '"') {
                    if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '"') {
                        field.text.push_back('"');
                        pos_ += 2;
                    } else {
                        in_quotes = false;
                        ++pos_;
                    }
                } else {
                    field.text.push_back(c);
                    ++pos_;
                }
                continue;
            }
            if (c == '"' && field.text.empty() && !field.quoted) {
                in_quotes = true;
                field.quoted = true;
                ++pos_;
                any = true;
            } else if (c == ',') {
                out.push_back(std::move(field));
                field = {};
                ++pos_;
                any = true;
            } else if (c == '\r') {
                ++pos_;
            } else if (c == '\n') {
                ++pos_;
                out.push_back(std::move(field));
                return true;
            } else {
                field.text.push_back(c);
                ++pos_;
                any = true;
            }
        }
        if (any || !out.empty()) {
            out.push_back(std::move(field));
            return true;
        }
        return false;
    }

  private:
    std::string data_;
    size_t pos_ = 0;
};

std::string csv_escape(const std::string& s, bool force_quote) {
    bool need = force_quote || s.empty();
    for (char c : s)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') need = true;
    if (!need) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Cell cell_from_text(const std::string& text, DeclaredType type, bool& ok) {
    ok = true;
    switch (type) {
        case DeclaredType::Integer: {
            auto v = parse_int(text);
            if (v) return Cell(*v);
            break;
        }
        case DeclaredType::Real: {
            auto v = parse_real(text);
            if (v) return Cell(*v);
            break;
        }
        case DeclaredType::Boolean: {
            auto v = parse_bool(text);
            if (v) return Cell(*v);
            break;
        }
        case DeclaredType::Datetime: {
            auto v = parse_timestamp(text);
            if (v) return Cell(*v);
            break;
        }
        case DeclaredType::Text:
        case DeclaredType::Unknown:
            return Cell(text);
    }
    ok = false;
    return Cell::null();
}

std::string derive_fk_name(const ForeignKeyDef& fk) {
    std::string n = fk.child_table;
    for (const auto& c : fk.child_columns) n += "_" + c;
    n += "__" + fk.parent_table;
    return n;
}

void assign_fk_names(RelationalSchema& schema) {
    std::unordered_set<std::string> used;
    for (auto& fk : schema.foreign_keys)
        if (!fk.name.empty()) used.insert(fk.name);
    for (auto& fk : schema.foreign_keys) {
        if (!fk.name.empty()) continue;
        std::string base = derive_fk_name(fk);
        std::string name = base;
        int suffix = 2;
        while (!used.insert(name).second) name = base + "_" + std::to_string(suffix++);
        fk.name = name;
    }
}

}  // namespace

// ---- schema descriptor -------------------------------------------------------

RelationalSchema parse_schema_descriptor(const std::string& descriptor_path) {
    json doc;
    try {
        doc = json::parse(read_file(descriptor_path));
    } catch (const json::exception& e) {
        raise(ErrorCode::DescriptorParseError,
              std::string("schema descriptor is not valid JSON: ") + e.what());
    }
    RelationalSchema schema;
    try {
        for (const auto& jt : doc.at("tables")) {
            TableDef t;
            t.name = jt.at("name").get<std::string>();
            for (const auto& jc : jt.at("columns")) {
                ColumnDef c;
                c.name = jc.at("name").get<std::string>();
                std::string type_name = jc.value("type", "unknown");
                auto dt = declared_type_from_name(type_name);
                if (!dt)
                    raise(ErrorCode::DescriptorParseError,
                          "unknown declared type '" + type_name + "' for column '" +
                              c.name + "'");
                c.declared_type = *dt;
                if (jc.contains("semantic")) {
                    auto st = semantic_type_from_name(jc["semantic"].get<std::string>());
                    if (!st)
                        raise(ErrorCode::DescriptorParseError,
                              "unknown semantic type for column '" + c.name + "'");
                    c.semantic_type = *st;
                }
                c.nullable = jc.value("nullable", true);
                t.columns.push_back(std::move(c));
            }
            if (jt.contains("primary_key"))
                t.primary_key = jt["primary_key"].get<std::vector<std::string>>();
            if (jt.contains("time_column"))
                t.time_column = jt["time_column"].get<std::string>();
            schema.tables.push_back(std::move(t));
        }
        if (doc.contains("foreign_keys")) {
            for (const auto& jf : doc["foreign_keys"]) {
                ForeignKeyDef fk;
                fk.name = jf.value("name", "");
                fk.child_table = jf.at("table").get<std::string>();
                fk.child_columns = jf.at("columns").get<std::vector<std::string>>();
                fk.parent_table = jf.at("references").get<std::string>();
                if (jf.contains("referenced_columns"))
                    fk.parent_columns = jf["referenced_columns"].get<std::vector<std::string>>();
                else if (const TableDef* parent = schema.find_table(fk.parent_table))
                    fk.parent_columns = parent->primary_key;
                schema.foreign_keys.push_back(std::move(fk));
            }
        }
    } catch (const json::exception& e) {
        raise(ErrorCode::DescriptorParseError,
              std::string("schema descriptor missing required field: ") + e.what());
    }
    assign_fk_names(schema);
    return schema;
}

// ---- CSV dataset ---------------------------------------------------------------

RelationalInstance load_csv_dataset(const std::string& dir_path,
                                    const std::string& schema_descriptor_path) {
    RelationalInstance instance;
    instance.schema = parse_schema_descriptor(schema_descriptor_path);
    instance.tables.resize(instance.schema.tables.size());

    for (size_t ti = 0; ti < instance.schema.tables.size(); ++ti) {
        const TableDef& def = instance.schema.tables[ti];
        fs::path file = fs::path(dir_path) / (def.name + ".csv");
        if (!fs::exists(file))
            raise(ErrorCode::MissingTableFile,
                  "table file '" + file.string() + "' not found");

        CsvReader reader(read_file(file.string()));
        std::vector<CsvField> record;
        if (!reader.next_record(record))
            raise(ErrorCode::DescriptorParseError,
                  "table file '" + file.string() + "' has no header row");

        // Header must cover the declared columns, in order.
        if (record.size() != def.columns.size())
            raise(ErrorCode::ArityMismatch,
                  "header of '" + def.name + ".csv' has " + std::to_string(record.size()) +
                      " columns, schema declares " + std::to_string(def.columns.size()));
        for (size_t c = 0; c < record.size(); ++c)
            if (record[c].text != def.columns[c].name)
                raise(ErrorCode::DescriptorParseError,
                      "header mismatch in '" + def.name + ".csv' at column " +
                          std::to_string(c) + ": got '" + record[c].text + "', expected '" +
                          def.columns[c].name + "'");

        Table& table = instance.tables[ti];
        size_t line = 1;
        while (reader.next_record(record)) {
            ++line;
            if (record.size() != def.columns.size())
                raise(ErrorCode::ArityMismatch,
                      "row " + std::to_string(line) + " of '" + def.name + ".csv' has " +
                          std::to_string(record.size()) + " fields, expected " +
                          std::to_string(def.columns.size()));
            Row row(def.columns.size());
            for (size_t c = 0; c < record.size(); ++c) {
                const CsvField& f = record[c];
                if (f.text.empty() && !f.quoted) {
                    row[c] = Cell::null();
                    continue;
                }
                bool ok = false;
                row[c] = cell_from_text(f.text, def.columns[c].declared_type, ok);
                if (!ok)
                    instance.warnings.push_back(
                        {def.name, def.columns[c].name,
                         "row " + std::to_string(line) + ": cannot parse '" + f.text +
                             "' as " + declared_type_name(def.columns[c].declared_type) +
                             ", stored null"});
            }
            table.rows.push_back(std::move(row));
        }
    }
    return instance;
}

void write_csv_dataset(const RelationalInstance& instance, const std::string& dir_path) {
    fs::create_directories(dir_path);

    json doc;
    doc["tables"] = json::array();
    for (const auto& t : instance.schema.tables) {
        json jt;
        jt["name"] = t.name;
        jt["columns"] = json::array();
        for (const auto& c : t.columns) {
            json jc;
            jc["name"] = c.name;
            jc["type"] = declared_type_name(c.declared_type);
            if (c.semantic_type != SemanticType::Unassigned)
                jc["semantic"] = semantic_type_name(c.semantic_type);
            if (!c.nullable) jc["nullable"] = false;
            jt["columns"].push_back(jc);
        }
        if (!t.primary_key.empty()) jt["primary_key"] = t.primary_key;
        if (t.time_column) jt["time_column"] = *t.time_column;
        doc["tables"].push_back(jt);
    }
    doc["foreign_keys"] = json::array();
    for (const auto& fk : instance.schema.foreign_keys) {
        json jf;
        jf["name"] = fk.name;
        jf["table"] = fk.child_table;
        jf["columns"] = fk.child_columns;
        jf["references"] = fk.parent_table;
        jf["referenced_columns"] = fk.parent_columns;
        doc["foreign_keys"].push_back(jf);
    }
    {
        std::ofstream out(fs::path(dir_path) / "schema.json", std::ios::binary);
        out << doc.dump(2) << "\n";
    }

    for (size_t ti = 0; ti < instance.schema.tables.size(); ++ti) {
        const TableDef& def = instance.schema.tables[ti];
        std::ofstream out(fs::path(dir_path) / (def.name + ".csv"), std::ios::binary);
        for (size_t c = 0; c < def.columns.size(); ++c) {
            if (c) out << ',';
            out << csv_escape(def.columns[c].name, false);
        }
        out << '\n';
        for (const auto& row : instance.tables[ti].rows) {
            for (size_t c = 0; c < row.size(); ++c) {
                if (c) out << ',';
                if (row[c].is_null()) continue;  // null = unquoted empty field
                bool is_text = row[c].type() == CellType::Text;
                out << csv_escape(cell_to_string(row[c]), is_text && row[c].as_text().empty());
            }
            out << '\n';
        }
    }
}

// ---- SQLite -----------------------------------------------------------------

namespace {

struct SqliteDb {
    sqlite3* db = nullptr;
    ~SqliteDb() {
        if (db) sqlite3_close(db);
    }
};

struct SqliteStmt {
    sqlite3_stmt* stmt = nullptr;
    ~SqliteStmt() {
        if (stmt) sqlite3_finalize(stmt);
    }
};

void prepare(sqlite3* db, const std::string& sql, SqliteStmt& out) {
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &out.stmt, nullptr) != SQLITE_OK)
        raise(ErrorCode::FileNotDatabase,
              std::string("sqlite error: ") + sqlite3_errmsg(db));
}

DeclaredType map_sqlite_type(const std::string& declared, bool& known) {
    known = true;
    std::string up;
    for (char c : declared) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up.find("INT") != std::string::npos) return DeclaredType::Integer;
    if (up.find("BOOL") != std::string::npos) return DeclaredType::Boolean;
    if (up.find("DATE") != std::string::npos || up.find("TIME") != std::string::npos)
        return DeclaredType::Datetime;
    if (up.find("CHAR") != std::string::npos || up.find("CLOB") != std::string::npos ||
        up.find("TEXT") != std::string::npos)
        return DeclaredType::Text;
    if (up.find("REAL") != std::string::npos || up.find("FLOA") != std::string::npos ||
        up.find("DOUB") != std::string::npos || up.find("NUMERIC") != std::string::npos ||
        up.find("DECIMAL") != std::string::npos)
        return DeclaredType::Real;
    known = false;
    return DeclaredType::Unknown;
}

std::string quote_ident(const std::string& name) {
    std::string out = "\"";
    for (char c : name) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

}  // namespace

RelationalInstance load_sqlite(const std::string& db_path,
                               const std::optional<RelationalSchema>& override_schema) {
    if (!fs::exists(db_path))
        raise(ErrorCode::FileNotDatabase, "file '" + db_path + "' does not exist");

    SqliteDb handle;
    if (sqlite3_open_v2(db_path.c_str(), &handle.db, SQLITE_OPEN_READONLY, nullptr) !=
        SQLITE_OK)
        raise(ErrorCode::FileNotDatabase, "cannot open '" + db_path + "' as SQLite");
    sqlite3* db = handle.db;

    RelationalInstance instance;

    // Introspect the catalog (also verifies the file really is a database).
    {
        SqliteStmt st;
        prepare(db, "SELECT name FROM sqlite_master WHERE type='table' AND "
                    "name NOT LIKE 'sqlite_%' ORDER BY name", st);
        std::vector<std::string> names;
        int rc;
        while ((rc = sqlite3_step(st.stmt)) == SQLITE_ROW)
            names.emplace_back(reinterpret_cast<const char*>(sqlite3_column_text(st.stmt, 0)));
        if (rc != SQLITE_DONE)
            raise(ErrorCode::FileNotDatabase,
                  "file '" + db_path + "' is not a SQLite database");

        if (override_schema) {
            instance.schema = *override_schema;
        } else {
            for (const auto& name : names) {
                TableDef t;
                t.name = name;
                std::vector<std::pair<int, std::string>> pk_cols;  // (pk ordinal, name)
                SqliteStmt info;
                prepare(db, "PRAGMA table_info(" + quote_ident(name) + ")", info);
                while (sqlite3_step(info.stmt) == SQLITE_ROW) {
                    ColumnDef c;
                    c.name = reinterpret_cast<const char*>(sqlite3_column_text(info.stmt, 1));
                    const unsigned char* ty = sqlite3_column_text(info.stmt, 2);
                    bool known = true;
                    c.declared_type =
                        map_sqlite_type(ty ? reinterpret_cast<const char*>(ty) : "", known);
                    if (!known)
                        instance.warnings.push_back(
                            {name, c.name,
                             "unsupported declared type '" +
                                 std::string(ty ? reinterpret_cast<const char*>(ty) : "") +
                                 "', mapped to unknown"});
                    c.nullable = sqlite3_column_int(info.stmt, 3) == 0;
                    int pk_pos = sqlite3_column_int(info.stmt, 5);
                    if (pk_pos > 0) pk_cols.emplace_back(pk_pos, c.name);
                    t.columns.push_back(std::move(c));
                }
                std::sort(pk_cols.begin(), pk_cols.end());
                for (auto& [pos, col] : pk_cols) t.primary_key.push_back(col);
                instance.schema.tables.push_back(std::move(t));
            }
            for (const auto& name : names) {
                SqliteStmt fks;
                prepare(db, "PRAGMA foreign_key_list(" + quote_ident(name) + ")", fks);
                // Rows arrive grouped by constraint id, ordered by seq.
                std::vector<std::tuple<int, int, std::string, std::string, std::string>> raw;
                while (sqlite3_step(fks.stmt) == SQLITE_ROW) {
                    int id = sqlite3_column_int(fks.stmt, 0);
                    int seq = sqlite3_column_int(fks.stmt, 1);
                    std::string parent =
                        reinterpret_cast<const char*>(sqlite3_column_text(fks.stmt, 2));
                    std::string from =
                        reinterpret_cast<const char*>(sqlite3_column_text(fks.stmt, 3));
                    const unsigned char* to_raw = sqlite3_column_text(fks.stmt, 4);
                    std::string to = to_raw ? reinterpret_cast<const char*>(to_raw) : "";
                    raw.emplace_back(id, seq, parent, from, to);
                }
                std::sort(raw.begin(), raw.end());
                ForeignKeyDef fk;
                int current_id = -1;
                auto flush = [&]() {
                    if (current_id < 0) return;
                    if (fk.parent_columns.empty() || fk.parent_columns[0].empty()) {
                        fk.parent_columns.clear();
                        if (const TableDef* p = instance.schema.find_table(fk.parent_table))
                            fk.parent_columns = p->primary_key;
                    }
                    instance.schema.foreign_keys.push_back(fk);
                    fk = {};
                };
                for (auto& [id, seq, parent, from, to] : raw) {
                    if (id != current_id) {
                        flush();
                        current_id = id;
                        fk.child_table = name;
                        fk.parent_table = parent;
                    }
                    fk.child_columns.push_back(from);
                    fk.parent_columns.push_back(to);
                }
                flush();
            }
            assign_fk_names(instance.schema);
        }
    }

    // Row data, typed by the declared column types.
    instance.tables.resize(instance.schema.tables.size());
    for (size_t ti = 0; ti < instance.schema.tables.size(); ++ti) {
        const TableDef& def = instance.schema.tables[ti];
        std::string cols;
        for (size_t c = 0; c < def.columns.size(); ++c) {
            if (c) cols += ", ";
            cols += quote_ident(def.columns[c].name);
        }
        SqliteStmt rows;
        prepare(db, "SELECT " + cols + " FROM " + quote_ident(def.name), rows);
        while (sqlite3_step(rows.stmt) == SQLITE_ROW) {
            Row row(def.columns.size());
            for (size_t c = 0; c < def.columns.size(); ++c) {
                int ic = static_cast<int>(c);
                DeclaredType want = def.columns[c].declared_type;
                switch (sqlite3_column_type(rows.stmt, ic)) {
                    case SQLITE_NULL:
                        row[c] = Cell::null();
                        break;
                    case SQLITE_INTEGER: {
                        int64_t v = sqlite3_column_int64(rows.stmt, ic);
                        if (want == DeclaredType::Boolean) row[c] = Cell(v != 0);
                        else if (want == DeclaredType::Datetime) row[c] = Cell(Timestamp{v});
                        else if (want == DeclaredType::Real) row[c] = Cell(static_cast<double>(v));
                        else if (want == DeclaredType::Text)
                            row[c] = Cell(std::to_string(v));
                        else row[c] = Cell(v);
                        break;
                    }
                    case SQLITE_FLOAT: {
                        double v = sqlite3_column_double(rows.stmt, ic);
                        if (want == DeclaredType::Integer) {
                            if (v == static_cast<double>(static_cast<int64_t>(v)))
                                row[c] = Cell(static_cast<int64_t>(v));
                            else {
                                row[c] = Cell::null();
                                instance.warnings.push_back(
                                    {def.name, def.columns[c].name,
                                     "non-integral value in integer column, stored null"});
                            }
                        } else if (want == DeclaredType::Datetime)
                            row[c] = Cell(Timestamp{static_cast<int64_t>(v)});
                        else if (want == DeclaredType::Text)
                            row[c] = Cell(format_real(v));
                        else row[c] = Cell(v);
                        break;
                    }
                    case SQLITE_TEXT: {
                        std::string text =
                            reinterpret_cast<const char*>(sqlite3_column_text(rows.stmt, ic));
                        bool ok = false;
                        row[c] = cell_from_text(text, want, ok);
                        if (!ok)
                            instance.warnings.push_back(
                                {def.name, def.columns[c].name,
                                 "cannot parse '" + text + "' as " +
                                     declared_type_name(want) + ", stored null"});
                        break;
                    }
                    default:  // BLOB
                        row[c] = Cell::null();
                        instance.warnings.push_back({def.name, def.columns[c].name,
                                                     "blob value stored null"});
                }
            }
            instance.tables[ti].rows.push_back(std::move(row));
        }
    }
    return instance;
}

// ---- inference over a whole instance ----------------------------------------

void infer_instance_types(RelationalInstance& instance, const InferenceConfig& config) {
    for (size_t ti = 0; ti < instance.schema.tables.size(); ++ti) {
        TableDef& def = instance.schema.tables[ti];
        const Table& data = instance.tables[ti];

        std::vector<std::string> fk_cols;
        for (const auto& fk : instance.schema.foreign_keys)
            if (fk.child_table == def.name)
                for (const auto& c : fk.child_columns) fk_cols.push_back(c);

        std::vector<SemanticType> overrides(def.columns.size(), SemanticType::Unassigned);
        for (size_t c = 0; c < def.columns.size(); ++c)
            overrides[c] = def.columns[c].semantic_type;

        if (data.rows.empty()) {
            // No data to sample: fall back to declared storage classes.
            for (auto& col : def.columns) {
                if (std::find(fk_cols.begin(), fk_cols.end(), col.name) != fk_cols.end())
                    col.semantic_type = SemanticType::ForeignKey;
                else if (def.is_pk_column(col.name))
                    col.semantic_type = SemanticType::PrimaryKey;
                else if (col.semantic_type != SemanticType::Unassigned)
                    continue;
                else if (col.declared_type == DeclaredType::Datetime)
                    col.semantic_type = SemanticType::Temporal;
                else if (col.declared_type == DeclaredType::Boolean)
                    col.semantic_type = SemanticType::Categorical;
                else if (col.declared_type == DeclaredType::Integer ||
                         col.declared_type == DeclaredType::Real)
                    col.semantic_type = SemanticType::Numerical;
                else
                    col.semantic_type = SemanticType::Text;
            }
            continue;
        }

        size_t n = std::min(config.max_sample_rows, data.rows.size());
        std::vector<Row> sample(data.rows.begin(),
                                data.rows.begin() + static_cast<long>(n));
        TableDef inferred = infer_semantic_types(def, sample, fk_cols, config);

        for (size_t c = 0; c < def.columns.size(); ++c) {
            SemanticType t = inferred.columns[c].semantic_type;
            // Explicit overrides stand, except on key columns.
            if (overrides[c] != SemanticType::Unassigned &&
                t != SemanticType::PrimaryKey && t != SemanticType::ForeignKey)
                t = overrides[c];
            def.columns[c].semantic_type = t;
        }
    }
}

// ---- referential integrity -----------------------------------------------------

int64_t IntegrityReport::total_dangling() const {
    int64_t n = 0;
    for (const auto& fk : foreign_keys) n += fk.dangling_rows;
    return n;
}

int64_t IntegrityReport::total_duplicates() const {
    int64_t n = 0;
    for (const auto& pk : primary_keys) n += pk.duplicate_rows;
    return n;
}

IntegrityReport check_referential_integrity(const RelationalInstance& instance) {
    IntegrityReport report;

    for (size_t ti = 0; ti < instance.schema.tables.size(); ++ti) {
        const TableDef& def = instance.schema.tables[ti];
        if (def.primary_key.empty()) continue;
        std::vector<int> pk_cols;
        for (const auto& c : def.primary_key) pk_cols.push_back(def.column_index(c));

        PkIntegrity pk{def.name, 0, 0};
        std::unordered_set<CellKey, CellKeyHash> seen;
        for (const auto& row : instance.tables[ti].rows) {
            CellKey key;
            bool has_null = false;
            for (int c : pk_cols) {
                const Cell& cell = row[static_cast<size_t>(c)];
                if (cell.is_null()) has_null = true;
                key.push_back(cell);
            }
            if (has_null) {
                ++pk.null_key_rows;
                continue;
            }
            if (!seen.insert(std::move(key)).second) ++pk.duplicate_rows;
        }
        report.primary_keys.push_back(pk);
    }

    for (const auto& fk : instance.schema.foreign_keys) {
        int child_ti = instance.schema.table_index(fk.child_table);
        int parent_ti = instance.schema.table_index(fk.parent_table);
        if (child_ti < 0 || parent_ti < 0) continue;
        const TableDef& child_def = instance.schema.tables[static_cast<size_t>(child_ti)];
        const TableDef& parent_def = instance.schema.tables[static_cast<size_t>(parent_ti)];

        std::vector<int> child_cols, parent_cols;
        for (const auto& c : fk.child_columns) child_cols.push_back(child_def.column_index(c));
        for (const auto& c : fk.parent_columns) parent_cols.push_back(parent_def.column_index(c));

        std::unordered_set<CellKey, CellKeyHash> parent_keys;
        for (const auto& row : instance.tables[static_cast<size_t>(parent_ti)].rows) {
            CellKey key;
            bool has_null = false;
            for (int c : parent_cols) {
                if (row[static_cast<size_t>(c)].is_null()) has_null = true;
                key.push_back(row[static_cast<size_t>(c)]);
            }
            if (!has_null) parent_keys.insert(std::move(key));
        }

        FkIntegrity fi{fk.name, 0, 0, 0};
        for (const auto& row : instance.tables[static_cast<size_t>(child_ti)].rows) {
            CellKey key;
            bool has_null = false;
            for (int c : child_cols) {
                if (row[static_cast<size_t>(c)].is_null()) has_null = true;
                key.push_back(row[static_cast<size_t>(c)]);
            }
            if (has_null) ++fi.null_rows;
            else if (parent_keys.count(key)) ++fi.matched_rows;
            else ++fi.dangling_rows;
        }
        report.foreign_keys.push_back(fi);
    }
    return report;
}

}  // namespace redelex
