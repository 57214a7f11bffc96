#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "redelex/instance.hpp"

namespace redelex {

enum class TaskKind : uint8_t {
    BinaryClassification,
    MulticlassClassification,
    Regression,
    MaskPretrain,
};

enum class SplitMode : uint8_t { Random, Temporal };
enum class Split : uint8_t { Unassigned, Train, Val, Test };

const char* task_kind_name(TaskKind k);
const char* split_name(Split s);

struct SplitSpec {
    SplitMode mode = SplitMode::Random;
    std::array<double, 3> ratios = {0.7, 0.15, 0.15};  // train, val, test
};

struct TaskSpec {
    TaskKind kind = TaskKind::BinaryClassification;
    std::string target_table;
    std::string target_column;  // unused for mask_pretrain
    bool temporal = false;
    SplitSpec split;
    double mask_rate = 0.15;  // mask_pretrain only, in (0,1]
    uint64_t seed = 0;
};

// Entity keys, labels, optional prediction timestamps and split assignment.
// For mask tasks each row is one masked cell and mask_columns names it.
struct TrainingTable {
    std::string target_table;
    std::vector<CellKey> entity_keys;
    std::vector<int64_t> entity_rows;  // row ordinal in the modified target table
    std::vector<Cell> labels;
    std::vector<Cell> class_values;    // classification: dense index -> original value
    bool has_timestamps = false;
    std::vector<int64_t> timestamps;
    std::vector<Split> split;
    std::vector<std::string> mask_columns;
    std::vector<std::string> notes;

    size_t size() const { return entity_keys.size(); }
    int64_t count(Split s) const;
    size_t n_classes() const { return class_values.size(); }
};

// Splits the target table per the database-modification scheme: the target
// column leaves the instance; its non-null values become the training table.
std::pair<RelationalInstance, TrainingTable> extract_target_task(
    const RelationalInstance& instance, const TaskSpec& spec);

// Masks each maskable (non-key numerical/categorical, non-null) cell of the
// target table independently with probability spec.mask_rate under spec.seed;
// the training table records original values as reconstruction targets.
std::pair<RelationalInstance, TrainingTable> make_mask_pretrain_task(
    const RelationalInstance& instance, const TaskSpec& spec);

// Writes recorded reconstruction targets back into a masked instance;
// inverse of make_mask_pretrain_task's masking.
void apply_mask_targets(RelationalInstance& masked_instance, const TrainingTable& table);

// Exact-count random split: per-split counts come from largest-remainder
// rounding (ties to the later split), assignment by seeded shuffle.
void assign_random_split(TrainingTable& table, const std::array<double, 3>& ratios,
                         uint64_t seed);

// Sorts by timestamp and cuts at ratio quantiles; rows at a boundary
// timestamp move to the later split. All-equal timestamps degenerate to
// train-only with a TieDegenerate note.
void assign_temporal_split(TrainingTable& table, const std::array<double, 3>& ratios);

// CSV with fixed column order: entity_key,label[,timestamp],split.
void export_training_table_csv(const TrainingTable& table, const std::string& path);

}  // namespace redelex
