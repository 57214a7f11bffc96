#pragma once

#include <optional>
#include <string>
#include <vector>

#include "redelex/instance.hpp"

namespace redelex {

// Loads `<dir>/<table>.csv` for every table in the descriptor. CSV dialect:
// comma separator, double-quote quoting with "" escapes, first row is the
// header, an unquoted empty field is null. Cells that fail to parse under
// the declared type load as null and append a warning.
RelationalInstance load_csv_dataset(const std::string& dir_path,
                                    const std::string& schema_descriptor_path);

// Parses the schema descriptor (schema.json layout) on its own.
RelationalSchema parse_schema_descriptor(const std::string& descriptor_path);

// Reads schema and rows from a SQLite file's catalog; `override_schema`
// replaces the introspected schema when provided.
RelationalInstance load_sqlite(const std::string& db_path,
                               const std::optional<RelationalSchema>& override_schema = {});

// Writes `<dir>/schema.json` plus one CSV per table; the output reloads
// cell-identically through load_csv_dataset.
void write_csv_dataset(const RelationalInstance& instance, const std::string& dir_path);

// Runs semantic type inference over every table of the instance, keeping
// explicit overrides already present in the schema.
void infer_instance_types(RelationalInstance& instance, const InferenceConfig& config = {});

struct FkIntegrity {
    std::string fk_name;
    int64_t null_rows = 0;      // at least one FK cell null
    int64_t matched_rows = 0;   // FK tuple found in parent PK index
    int64_t dangling_rows = 0;  // FK tuple absent from parent
};

struct PkIntegrity {
    std::string table;
    int64_t duplicate_rows = 0;  // rows sharing PK values with an earlier row
    int64_t null_key_rows = 0;   // rows with a null PK cell
};

struct IntegrityReport {
    std::vector<FkIntegrity> foreign_keys;
    std::vector<PkIntegrity> primary_keys;

    int64_t total_dangling() const;
    int64_t total_duplicates() const;
};

IntegrityReport check_referential_integrity(const RelationalInstance& instance);

}  // namespace redelex
