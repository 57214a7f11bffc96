#include "redelex/task.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "redelex/error.hpp"
#include "redelex/rng.hpp"

namespace redelex {

const char* task_kind_name(TaskKind k) {
    switch (k) {
        case TaskKind::BinaryClassification: return "binary_classification";
        case TaskKind::MulticlassClassification: return "multiclass_classification";
        case TaskKind::Regression: return "regression";
        case TaskKind::MaskPretrain: return "mask_pretrain";
    }
    return "?";
}

const char* split_name(Split s) {
    switch (s) {
        case Split::Unassigned: return "unassigned";
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "?";
}

int64_t TrainingTable::count(Split s) const {
    int64_t n = 0;
    for (Split v : split)
        if (v == s) ++n;
    return n;
}

namespace {

std::vector<int> pk_column_indices(const TableDef& def) {
    if (def.primary_key.empty())
        raise(ErrorCode::BadSpec,
              "table '" + def.name + "' has no primary key to identify entities");
    std::vector<int> cols;
    for (const auto& c : def.primary_key) cols.push_back(def.column_index(c));
    return cols;
}

int target_time_column(const TableDef& def) {
    if (!def.time_column) return -1;
    return def.column_index(*def.time_column);
}

// Largest-remainder apportionment; remainder ties go to the later split so
// boundary rows never drift toward train.
std::array<int64_t, 3> split_counts(int64_t n, const std::array<double, 3>& ratios) {
    double sum = ratios[0] + ratios[1] + ratios[2];
    if (ratios[0] < 0 || ratios[1] < 0 || ratios[2] < 0 || std::abs(sum - 1.0) > 1e-9)
        raise(ErrorCode::BadRatios, "split ratios must be non-negative and sum to 1");

    std::array<int64_t, 3> counts{};
    std::array<double, 3> remainder{};
    int64_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        double exact = ratios[i] * static_cast<double>(n);
        counts[i] = static_cast<int64_t>(std::floor(exact + 1e-12));
        remainder[i] = exact - static_cast<double>(counts[i]);
        assigned += counts[i];
    }
    int64_t left = n - assigned;
    std::array<int, 3> order = {2, 1, 0};  // later split wins ties
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
        return a > b;
    });
    for (int k = 0; left > 0; k = (k + 1) % 3, --left) ++counts[order[static_cast<size_t>(k)]];
    return counts;
}

}  // namespace

std::pair<RelationalInstance, TrainingTable> extract_target_task(
    const RelationalInstance& instance, const TaskSpec& spec) {
    if (spec.kind == TaskKind::MaskPretrain)
        raise(ErrorCode::BadSpec, "extract_target_task does not handle mask_pretrain");

    int ti = instance.schema.table_index(spec.target_table);
    if (ti < 0) raise(ErrorCode::TargetMissing, "target table '" + spec.target_table + "' not found");
    const TableDef& def = instance.schema.tables[static_cast<size_t>(ti)];
    int col = def.column_index(spec.target_column);
    if (col < 0)
        raise(ErrorCode::TargetMissing,
              "target column '" + spec.target_column + "' not found in '" + spec.target_table + "'");
    if (instance.schema.is_key_column(spec.target_table, spec.target_column))
        raise(ErrorCode::TargetIsKey,
              "target column '" + spec.target_column + "' is a key column");
    if (def.columns[static_cast<size_t>(col)].semantic_type == SemanticType::Ignored)
        raise(ErrorCode::BadSpec, "target column '" + spec.target_column + "' is typed ignored");
    if (spec.temporal && (!def.time_column || *def.time_column == spec.target_column))
        raise(ErrorCode::MissingTimestamps,
              "temporal task needs a time column on the target table");

    int time_col = spec.temporal ? target_time_column(def) : -1;
    std::vector<int> pk_cols = pk_column_indices(def);

    TrainingTable table;
    table.target_table = spec.target_table;
    table.has_timestamps = spec.temporal;

    std::unordered_map<Cell, int64_t, CellHash> class_index;
    const Table& data = instance.tables[static_cast<size_t>(ti)];
    int64_t skipped_no_time = 0;
    for (size_t r = 0; r < data.rows.size(); ++r) {
        const Cell& target = data.rows[r][static_cast<size_t>(col)];
        if (target.is_null()) continue;
        if (spec.temporal) {
            const Cell& tc = data.rows[r][static_cast<size_t>(time_col)];
            if (tc.is_null()) {
                ++skipped_no_time;
                continue;
            }
            table.timestamps.push_back(tc.type() == CellType::Time ? tc.as_time().seconds
                                                                   : tc.as_int());
        }
        CellKey key;
        for (int c : pk_cols) key.push_back(data.rows[r][static_cast<size_t>(c)]);
        table.entity_keys.push_back(std::move(key));
        table.entity_rows.push_back(static_cast<int64_t>(r));

        if (spec.kind == TaskKind::Regression) {
            if (target.type() != CellType::Int && target.type() != CellType::Real)
                raise(ErrorCode::BadSpec, "regression target must be numeric");
            table.labels.push_back(target);
        } else {
            // dense class indices in first-occurrence order
            auto [it, inserted] =
                class_index.emplace(target, static_cast<int64_t>(class_index.size()));
            if (inserted) table.class_values.push_back(target);
            table.labels.push_back(Cell(it->second));
        }
    }
    if (table.entity_keys.empty())
        raise(ErrorCode::AllTargetsNull,
              "no usable rows: all targets null" +
                  std::string(skipped_no_time ? " or missing timestamps" : ""));
    if (spec.kind == TaskKind::BinaryClassification && table.class_values.size() != 2)
        raise(ErrorCode::BadSpec, "binary task found " +
                                      std::to_string(table.class_values.size()) +
                                      " distinct classes");
    if (skipped_no_time)
        table.notes.push_back("skipped " + std::to_string(skipped_no_time) +
                              " rows with null timestamps");
    table.split.assign(table.size(), Split::Unassigned);

    // Modified instance: same rows, target column dropped.
    RelationalInstance modified = instance;
    TableDef& mdef = modified.schema.tables[static_cast<size_t>(ti)];
    mdef.columns.erase(mdef.columns.begin() + col);
    if (mdef.time_column && *mdef.time_column == spec.target_column) mdef.time_column.reset();
    for (auto& row : modified.tables[static_cast<size_t>(ti)].rows)
        row.erase(row.begin() + col);
    return {std::move(modified), std::move(table)};
}

std::pair<RelationalInstance, TrainingTable> make_mask_pretrain_task(
    const RelationalInstance& instance, const TaskSpec& spec) {
    if (spec.kind != TaskKind::MaskPretrain)
        raise(ErrorCode::BadSpec, "spec.kind must be mask_pretrain");
    if (!(spec.mask_rate > 0.0 && spec.mask_rate <= 1.0))
        raise(ErrorCode::BadSpec, "mask_rate must lie in (0, 1]");

    int ti = instance.schema.table_index(spec.target_table);
    if (ti < 0) raise(ErrorCode::TargetMissing, "target table '" + spec.target_table + "' not found");
    const TableDef& def = instance.schema.tables[static_cast<size_t>(ti)];

    // Maskable columns: non-key, with a reconstruction head (numerical or
    // categorical).
    std::vector<int> maskable;
    for (size_t c = 0; c < def.columns.size(); ++c) {
        SemanticType st = def.columns[c].semantic_type;
        if (st == SemanticType::Numerical || st == SemanticType::Categorical)
            maskable.push_back(static_cast<int>(c));
    }
    if (maskable.empty())
        raise(ErrorCode::NothingMaskable,
              "table '" + spec.target_table + "' has no maskable columns");

    int time_col = spec.temporal ? target_time_column(def) : -1;
    if (spec.temporal && time_col < 0)
        raise(ErrorCode::MissingTimestamps,
              "temporal mask task needs a time column on the target table");
    std::vector<int> pk_cols = pk_column_indices(def);

    RelationalInstance masked = instance;
    Table& data = masked.tables[static_cast<size_t>(ti)];

    TrainingTable table;
    table.target_table = spec.target_table;
    table.has_timestamps = spec.temporal;

    Rng rng(spec.seed);
    int64_t maskable_cells = 0;
    for (size_t r = 0; r < data.rows.size(); ++r) {
        if (spec.temporal && data.rows[r][static_cast<size_t>(time_col)].is_null()) continue;
        for (int c : maskable) {
            Cell& cell = data.rows[r][static_cast<size_t>(c)];
            if (cell.is_null()) continue;
            ++maskable_cells;
            if (rng.next_unit() >= spec.mask_rate) continue;
            CellKey key;
            for (int pc : pk_cols) key.push_back(data.rows[r][static_cast<size_t>(pc)]);
            table.entity_keys.push_back(std::move(key));
            table.entity_rows.push_back(static_cast<int64_t>(r));
            table.labels.push_back(cell);
            table.mask_columns.push_back(def.columns[static_cast<size_t>(c)].name);
            if (spec.temporal) {
                const Cell& tc = data.rows[r][static_cast<size_t>(time_col)];
                table.timestamps.push_back(tc.type() == CellType::Time ? tc.as_time().seconds
                                                                       : tc.as_int());
            }
            cell = Cell::null();
        }
    }
    if (maskable_cells == 0)
        raise(ErrorCode::NothingMaskable,
              "table '" + spec.target_table + "' has no non-null maskable cells");
    table.split.assign(table.size(), Split::Unassigned);
    return {std::move(masked), std::move(table)};
}

void apply_mask_targets(RelationalInstance& masked_instance, const TrainingTable& table) {
    int ti = masked_instance.schema.table_index(table.target_table);
    if (ti < 0) raise(ErrorCode::TargetMissing, "target table not found");
    const TableDef& def = masked_instance.schema.tables[static_cast<size_t>(ti)];
    Table& data = masked_instance.tables[static_cast<size_t>(ti)];
    for (size_t i = 0; i < table.size(); ++i) {
        int col = def.column_index(table.mask_columns[i]);
        data.rows[static_cast<size_t>(table.entity_rows[i])][static_cast<size_t>(col)] =
            table.labels[i];
    }
}

void assign_random_split(TrainingTable& table, const std::array<double, 3>& ratios,
                         uint64_t seed) {
    int64_t n = static_cast<int64_t>(table.size());
    auto counts = split_counts(n, ratios);
    std::vector<Split> labels;
    labels.reserve(static_cast<size_t>(n));
    for (int64_t i = 0; i < counts[0]; ++i) labels.push_back(Split::Train);
    for (int64_t i = 0; i < counts[1]; ++i) labels.push_back(Split::Val);
    for (int64_t i = 0; i < counts[2]; ++i) labels.push_back(Split::Test);
    Rng rng(seed);
    rng.shuffle(labels);
    table.split = std::move(labels);
}

void assign_temporal_split(TrainingTable& table, const std::array<double, 3>& ratios) {
    if (!table.has_timestamps || table.timestamps.size() != table.size())
        raise(ErrorCode::MissingTimestamps, "temporal split needs timestamps on every row");
    int64_t n = static_cast<int64_t>(table.size());
    auto counts = split_counts(n, ratios);

    std::vector<int64_t> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
        return table.timestamps[static_cast<size_t>(a)] < table.timestamps[static_cast<size_t>(b)];
    });

    bool all_equal =
        n > 0 && table.timestamps[static_cast<size_t>(order.front())] ==
                     table.timestamps[static_cast<size_t>(order.back())];
    if (all_equal) {
        table.split.assign(static_cast<size_t>(n), Split::Train);
        table.notes.push_back("TieDegenerate: all timestamps equal, all rows in train");
        return;
    }

    auto ts_at = [&](int64_t pos) {
        return table.timestamps[static_cast<size_t>(order[static_cast<size_t>(pos)])];
    };
    // Rows sharing a boundary timestamp move into the later split.
    auto adjust = [&](int64_t b) {
        while (b > 0 && b < n && ts_at(b - 1) == ts_at(b)) --b;
        return b;
    };
    int64_t b1 = adjust(counts[0]);
    int64_t b2 = adjust(counts[0] + counts[1]);
    if (b2 < b1) b2 = b1;

    table.split.assign(static_cast<size_t>(n), Split::Unassigned);
    for (int64_t i = 0; i < n; ++i) {
        Split s = i < b1 ? Split::Train : (i < b2 ? Split::Val : Split::Test);
        table.split[static_cast<size_t>(order[static_cast<size_t>(i)])] = s;
    }
}

void export_training_table_csv(const TrainingTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoError, "cannot write '" + path + "'");
    out << "entity_key,label";
    if (table.has_timestamps) out << ",timestamp";
    out << ",split\n";
    for (size_t i = 0; i < table.size(); ++i) {
        std::string key;
        for (size_t k = 0; k < table.entity_keys[i].size(); ++k) {
            if (k) key += "|";
            key += cell_to_string(table.entity_keys[i][k]);
        }
        out << key << ',' << cell_to_string(table.labels[i]);
        if (table.has_timestamps)
            out << ',' << format_timestamp(Timestamp{table.timestamps[i]});
        out << ',' << split_name(table.split[i]) << '\n';
    }
}

}  // namespace redelex
