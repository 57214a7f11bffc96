#include "redelex/synth.hpp"

#include <algorithm>

#include "redelex/error.hpp"
#include "redelex/ingest.hpp"
#include "redelex/rng.hpp"

namespace redelex {

const FkLedger* SynthLedger::find_fk(const std::string& name) const {
    for (const auto& fk : fks)
        if (fk.fk_name == name) return &fk;
    return nullptr;
}

namespace {

ColumnDef column(std::string name, DeclaredType dt, SemanticType st) {
    ColumnDef c;
    c.name = std::move(name);
    c.declared_type = dt;
    c.semantic_type = st;
    return c;
}

std::string random_word(Rng& rng) {
    std::string w;
    size_t len = 4 + rng.next_below(8);
    for (size_t i = 0; i < len; ++i)
        w.push_back(static_cast<char>('a' + rng.next_below(26)));
    return w;
}

int64_t random_time(Rng& rng) {
    // uniform over calendar year 2020
    int64_t base = days_from_civil(2020, 1, 1) * 86400;
    return base + static_cast<int64_t>(rng.next_below(366ULL * 86400));
}

}  // namespace

std::pair<RelationalInstance, SynthLedger> generate(const SynthSpec& spec) {
    if (spec.n_tables < 1 || spec.rows_per_table < 1)
        raise(ErrorCode::BadSpec, "n_tables and rows_per_table must be positive");
    if (spec.topology == Topology::Junction && spec.n_tables < 3)
        raise(ErrorCode::BadSpec, "junction topology needs at least 3 tables");
    if ((spec.signal == PlantedSignal::TargetOneHop) && spec.n_tables < 2)
        raise(ErrorCode::BadSpec, "one-hop signal needs at least 2 tables");
    if (spec.noise_rate < 0.0 || spec.noise_rate >= 0.5)
        raise(ErrorCode::BadSpec, "noise_rate must lie in [0, 0.5)");

    Rng rng(spec.seed);
    RelationalInstance inst;
    SynthLedger ledger;

    int n = spec.n_tables;
    auto table_name = [](int i) { return "t" + std::to_string(i); };

    // FK topology: (child, parent) pairs.
    std::vector<std::pair<int, int>> links;
    std::vector<bool> is_junction(static_cast<size_t>(n), false);
    switch (spec.topology) {
        case Topology::Chain:
            for (int i = 1; i < n; ++i) links.emplace_back(i, i - 1);
            break;
        case Topology::Star:
            for (int i = 1; i < n; ++i) links.emplace_back(i, 0);
            break;
        case Topology::Junction:
            // t2 joins t0 and t1; any further tables hang off t0.
            links.emplace_back(2, 0);
            links.emplace_back(2, 1);
            is_junction[2] = true;
            for (int i = 3; i < n; ++i) links.emplace_back(i, 0);
            break;
        case Topology::RandomDag:
            for (int i = 1; i < n; ++i)
                links.emplace_back(i, static_cast<int>(rng.next_below(static_cast<uint64_t>(i))));
            break;
    }
    if (spec.cycle_edge && n >= 2) links.emplace_back(n - 1, 0);

    int target = n - 1;
    if (spec.topology == Topology::Junction && target == 2 && n > 3) target = n - 1;
    ledger.target_table = table_name(target);

    // Signal source resolution.
    int source = -1;
    int dim_table = -1;
    if (spec.signal == PlantedSignal::TargetLocal) {
        source = target;
        ledger.source_table = table_name(source);
    } else if (spec.signal == PlantedSignal::TargetOneHop) {
        for (auto& [c, p] : links)
            if (c == target) {
                source = p;
                break;
            }
        if (source < 0) raise(ErrorCode::BadSpec, "target table has no parent for one-hop signal");
        ledger.source_table = table_name(source);
    } else if (spec.signal == PlantedSignal::TargetDimension) {
        dim_table = n;  // extra table appended below
        source = dim_table;
        ledger.source_table = "dim";
    }

    // Table definitions.
    int total_tables = n + (dim_table >= 0 ? 1 : 0);
    for (int t = 0; t < total_tables; ++t) {
        TableDef def;
        def.name = (t == dim_table) ? "dim" : table_name(t);
        def.columns.push_back(column("id", DeclaredType::Integer, SemanticType::PrimaryKey));
        def.primary_key = {"id"};

        std::unordered_map<std::string, int> fk_uses;
        for (auto& [c, p] : links) {
            if (c != t) continue;
            std::string parent = table_name(p);
            std::string col_name = parent + "_id";
            int uses = ++fk_uses[col_name];
            if (uses > 1) col_name += std::to_string(uses);
            def.columns.push_back(column(col_name, DeclaredType::Integer, SemanticType::ForeignKey));
            ForeignKeyDef fk;
            fk.name = def.name + "_" + col_name;
            fk.child_table = def.name;
            fk.child_columns = {col_name};
            fk.parent_table = parent;
            fk.parent_columns = {"id"};
            inst.schema.foreign_keys.push_back(fk);
        }
        if (t == target && dim_table >= 0) {
            def.columns.push_back(column("dim_id", DeclaredType::Integer, SemanticType::ForeignKey));
            ForeignKeyDef fk;
            fk.name = def.name + "_dim_id";
            fk.child_table = def.name;
            fk.child_columns = {"dim_id"};
            fk.parent_table = "dim";
            fk.parent_columns = {"id"};
            inst.schema.foreign_keys.push_back(fk);
            ledger.signal_fk = fk.name;
        }

        bool junction = t < n && is_junction[static_cast<size_t>(t)];
        if (!junction) {
            for (int j = 0; j < spec.numeric_cols; ++j)
                def.columns.push_back(
                    column("num" + std::to_string(j), DeclaredType::Real, SemanticType::Numerical));
            for (int j = 0; j < spec.categorical_cols; ++j)
                def.columns.push_back(column("cat" + std::to_string(j), DeclaredType::Text,
                                             SemanticType::Categorical));
            for (int j = 0; j < spec.text_cols; ++j)
                def.columns.push_back(
                    column("txt" + std::to_string(j), DeclaredType::Text, SemanticType::Text));
            for (int j = 0; j < spec.temporal_cols; ++j)
                def.columns.push_back(column("aux_time" + std::to_string(j),
                                             DeclaredType::Datetime, SemanticType::Temporal));
        }
        if (t == source && spec.signal != PlantedSignal::None)
            def.columns.push_back(
                column("code", DeclaredType::Text, SemanticType::Categorical));
        if (t == target && spec.signal != PlantedSignal::None)
            def.columns.push_back(
                column("label", DeclaredType::Text, SemanticType::Categorical));
        if (spec.time_all_tables || (spec.with_time && t == target)) {
            def.columns.push_back(
                column("event_time", DeclaredType::Datetime, SemanticType::Temporal));
            def.time_column = "event_time";
        }
        inst.schema.tables.push_back(std::move(def));
    }
    if (spec.signal == PlantedSignal::TargetOneHop) {
        // locate the FK column linking target to its signal parent
        for (const auto& fk : inst.schema.foreign_keys)
            if (fk.child_table == ledger.target_table && fk.parent_table == ledger.source_table) {
                ledger.signal_fk = fk.name;
                break;
            }
    }
    if (spec.signal != PlantedSignal::None) {
        ledger.label_column = "label";
        ledger.source_column = "code";
        ledger.bayes_auc = 1.0 - spec.noise_rate;
    }

    // Row data. Tables fill in schema order; parents in `links` always have a
    // lower index, so parent codes exist before children derive labels.
    inst.tables.resize(inst.schema.tables.size());
    std::vector<std::vector<int>> code_by_table(inst.schema.tables.size());

    for (size_t ti = 0; ti < inst.schema.tables.size(); ++ti) {
        const TableDef& def = inst.schema.tables[ti];
        bool is_dim = static_cast<int>(ti) == dim_table;
        int rows = is_dim ? spec.dimension_rows : spec.rows_per_table;
        Table& data = inst.tables[ti];
        data.rows.reserve(static_cast<size_t>(rows));
        code_by_table[ti].assign(static_cast<size_t>(rows), 0);

        // FK targets resolve against generated parent row counts.
        std::vector<std::pair<int, int64_t>> fk_cols;  // (column idx, parent rows)
        for (size_t c = 0; c < def.columns.size(); ++c) {
            if (def.columns[c].semantic_type != SemanticType::ForeignKey) continue;
            for (const auto& fk : inst.schema.foreign_keys) {
                if (fk.child_table == def.name && fk.child_columns[0] == def.columns[c].name) {
                    int pi = inst.schema.table_index(fk.parent_table);
                    int prows = (pi == dim_table) ? spec.dimension_rows : spec.rows_per_table;
                    fk_cols.emplace_back(static_cast<int>(c), prows);
                    break;
                }
            }
        }

        for (int r = 0; r < rows; ++r) {
            Row row(def.columns.size());
            for (size_t c = 0; c < def.columns.size(); ++c) {
                const ColumnDef& col = def.columns[c];
                const std::string& cn = col.name;
                if (cn == "id") {
                    row[c] = Cell(static_cast<int64_t>(r));
                } else if (col.semantic_type == SemanticType::ForeignKey) {
                    int64_t prows = 0;
                    for (auto& [ci, pr] : fk_cols)
                        if (ci == static_cast<int>(c)) prows = pr;
                    if (spec.null_fk_rate > 0 && rng.next_unit() < spec.null_fk_rate) {
                        row[c] = Cell::null();
                    } else {
                        int64_t pid = static_cast<int64_t>(
                            rng.next_below(static_cast<uint64_t>(prows)));
                        row[c] = Cell(pid);
                    }
                } else if (cn.rfind("num", 0) == 0) {
                    row[c] = Cell(rng.next_range(0.0, 10.0));
                } else if (cn.rfind("cat", 0) == 0) {
                    row[c] = Cell("v" + std::to_string(rng.next_below(
                                           static_cast<uint64_t>(spec.categorical_cardinality))));
                } else if (cn.rfind("txt", 0) == 0) {
                    row[c] = Cell(random_word(rng));
                } else if (cn.rfind("aux_time", 0) == 0 || cn == "event_time") {
                    row[c] = Cell(Timestamp{random_time(rng)});
                } else if (cn == "code") {
                    int code = static_cast<int>(
                        rng.next_below(static_cast<uint64_t>(spec.signal_cardinality)));
                    code_by_table[ti][static_cast<size_t>(r)] = code;
                    row[c] = Cell("c" + std::to_string(code));
                } else if (cn == "label") {
                    row[c] = Cell::null();  // filled by the label pass below
                }
            }
            data.rows.push_back(std::move(row));
        }

        ledger.rows[def.name] = rows;
    }

    // Label pass: runs after every table (including an appended dim) exists,
    // so parent codes are always available.
    if (spec.signal != PlantedSignal::None) {
        size_t tgt_ti = static_cast<size_t>(inst.schema.table_index(ledger.target_table));
        const TableDef& def = inst.schema.tables[tgt_ti];
        Table& data = inst.tables[tgt_ti];
        int label_col = def.column_index("label");
        int src_ti = inst.schema.table_index(ledger.source_table);
        int fk_col = -1;
        if (spec.signal != PlantedSignal::TargetLocal) {
            for (const auto& fk : inst.schema.foreign_keys)
                if (fk.name == ledger.signal_fk) fk_col = def.column_index(fk.child_columns[0]);
        }
        for (size_t r = 0; r < data.rows.size(); ++r) {
            Row& row = data.rows[r];
            int code;
            if (spec.signal == PlantedSignal::TargetLocal) {
                code = code_by_table[tgt_ti][r];
            } else {
                const Cell& fk_cell = row[static_cast<size_t>(fk_col)];
                if (fk_cell.is_null()) {
                    // no parent: label is a pure coin flip
                    code = static_cast<int>(rng.next_below(2));
                } else {
                    code = code_by_table[static_cast<size_t>(src_ti)]
                                        [static_cast<size_t>(fk_cell.as_int())];
                }
            }
            bool positive = (code % 2) == 1;
            if (spec.noise_rate > 0 && rng.next_unit() < spec.noise_rate) {
                positive = !positive;
                ++ledger.label_flips;
            }
            row[static_cast<size_t>(label_col)] = Cell(positive ? "pos" : "neg");
        }
    }

    // Dangling injection: overwrite random non-null FK cells with ids that no
    // parent row carries.
    std::vector<FkLedger> fk_ledgers;
    for (const auto& fk : inst.schema.foreign_keys) fk_ledgers.push_back({fk.name, 0, 0, 0});
    for (int k = 0; k < spec.dangling_fk_cells; ++k) {
        if (inst.schema.foreign_keys.empty()) break;
        size_t fi = rng.next_below(inst.schema.foreign_keys.size());
        const ForeignKeyDef& fk = inst.schema.foreign_keys[fi];
        Table& child = inst.table(fk.child_table);
        if (child.rows.empty()) continue;
        const TableDef& child_def = *inst.schema.find_table(fk.child_table);
        int col = child_def.column_index(fk.child_columns[0]);
        // probe for a non-null, not-yet-dangling cell
        for (int attempt = 0; attempt < 64; ++attempt) {
            size_t r = rng.next_below(child.rows.size());
            Cell& cell = child.rows[r][static_cast<size_t>(col)];
            if (cell.is_null()) continue;
            if (cell.as_int() >= 1000000) continue;  // already dangling
            cell = Cell(static_cast<int64_t>(1000000 + k));
            ++fk_ledgers[fi].dangling;
            break;
        }
    }

    // Final per-FK counts.
    for (size_t fi = 0; fi < inst.schema.foreign_keys.size(); ++fi) {
        const ForeignKeyDef& fk = inst.schema.foreign_keys[fi];
        const Table& child = inst.table(fk.child_table);
        const TableDef& child_def = *inst.schema.find_table(fk.child_table);
        int col = child_def.column_index(fk.child_columns[0]);
        int64_t non_null = 0, nulls = 0;
        for (const auto& row : child.rows) {
            if (row[static_cast<size_t>(col)].is_null()) ++nulls;
            else ++non_null;
        }
        fk_ledgers[fi].non_null = non_null;
        fk_ledgers[fi].null_cells = nulls;
    }
    ledger.fks = std::move(fk_ledgers);

    return {std::move(inst), std::move(ledger)};
}

SynthLedger generate_dataset(const SynthSpec& spec, const std::string& out_dir) {
    auto [inst, ledger] = generate(spec);
    write_csv_dataset(inst, out_dir);
    return ledger;
}

}  // namespace redelex
