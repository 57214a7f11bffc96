#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "redelex/autodiff.hpp"
#include "redelex/instance.hpp"
#include "redelex/task.hpp"

namespace redelex {

enum class EncoderKind : uint8_t { Numerical, Categorical, MultiCategorical, Text, Temporal };
const char* encoder_kind_name(EncoderKind k);

struct EncoderConfig {
    int64_t text_hash_buckets = 2048;
    int text_ngram = 3;
    std::string multi_cat_separator = ",";
};

// Per-column statistics fitted on train rows only; vocabularies keep first
// occurrence order.
struct ColumnEncoderSpec {
    std::string column;
    EncoderKind kind = EncoderKind::Numerical;
    double mean = 0.0;
    double stdev = 1.0;          // 0 replaced by 1 at fit time
    std::vector<std::string> vocab;  // categorical values / multicat tokens
    int64_t hash_buckets = 2048;
    int ngram = 3;

    int64_t oov_index() const { return static_cast<int64_t>(vocab.size()); }
    int64_t null_index() const;
    int64_t table_rows() const;  // embedding rows incl. OOV/null slots
};

struct TableEncoderSpec {
    std::string table;
    std::vector<ColumnEncoderSpec> columns;  // encoded (non-key, non-ignored) columns
};

struct EncoderSpec {
    int64_t d0 = 64;
    EncoderConfig config;
    std::vector<TableEncoderSpec> tables;

    const TableEncoderSpec* find(const std::string& table) const;
};

// Fits statistics/vocabularies. Rows of the training table's target table
// are restricted to the train split (mask tasks fit on the masked instance,
// all rows); every other table contributes all rows.
EncoderSpec fit_encoders(const RelationalInstance& instance, const TrainingTable& training_table,
                         int64_t d0, bool restrict_target_to_train = true,
                         const EncoderConfig& config = {});

// ---- per-cell codes ---------------------------------------------------------
// Precomputed lookup data for a batch of cells of one column; shared by the
// differentiable model path and the forward-only encoder below.
struct ColumnBatchCode {
    EncoderKind kind;
    // numerical/temporal: per-cell standardized value / cyclic features, and a
    // selector row (0 = bias, 1 = null vector)
    std::vector<double> x;             // numerical: n values
    std::vector<double> feats;         // temporal: n * 8 features
    std::vector<int64_t> selector;     // n entries in {0, 1}
    // categorical: one embedding row per cell
    std::vector<int64_t> index;
    // multicat/text: flattened member rows with cell ownership
    std::vector<int64_t> members;
    std::vector<int64_t> member_cell;
    std::vector<double> inv_count;     // n entries, 1/members_of_cell
};

// 8 cyclic features: sin/cos of year fraction, month, weekday, hour.
std::array<double, 8> temporal_cyclic_features(int64_t epoch_seconds);

// FNV-1a over character n-grams -> bucket id.
int64_t text_ngram_bucket(const std::string& gram, int64_t buckets);

ColumnBatchCode encode_cells(const ColumnEncoderSpec& spec, const std::vector<Cell>& cells);

// Registers this spec's learnable tensors (embedding tables, affine weights,
// null vectors) in creation order under "enc/<table>/<column>/...".
void register_encoder_params(const EncoderSpec& spec, ParamStore& params, Rng& rng);

// Forward-only reference encoding of one attribute tuple: n x d0, one row per
// encoded column. Pure in (spec, params, tuple).
Tensor encode_node(const EncoderSpec& spec, const std::string& table, const ParamStore& params,
                   const Row& tuple);

}  // namespace redelex
