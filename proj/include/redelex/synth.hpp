#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "redelex/instance.hpp"

namespace redelex {

enum class Topology { Chain, Star, Junction, RandomDag };
enum class PlantedSignal { None, TargetLocal, TargetOneHop, TargetDimension };

// Deterministic synthetic database generator; a test instrument, not a
// realistic data simulator.
struct SynthSpec {
    int n_tables = 3;
    int rows_per_table = 100;
    Topology topology = Topology::Chain;
    bool cycle_edge = false;

    // factual column mix per non-junction table
    int numeric_cols = 1;
    int categorical_cols = 1;
    int text_cols = 0;
    int temporal_cols = 0;
    int categorical_cardinality = 8;

    bool with_time = false;       // target table gets an event_time column -> tau
    bool time_all_tables = false; // every table gets event_time

    PlantedSignal signal = PlantedSignal::None;
    double noise_rate = 0.0;      // label flip probability
    int signal_cardinality = 8;   // code values on the signal source column
    int dimension_rows = 16;      // rows of the added dim table (TargetDimension)

    double null_fk_rate = 0.0;
    int dangling_fk_cells = 0;

    uint64_t seed = 0;
};

struct FkLedger {
    std::string fk_name;
    int64_t non_null = 0;   // after null/dangling injection; dangling cells stay non-null
    int64_t null_cells = 0;
    int64_t dangling = 0;
};

// Ground truth the generator can vouch for; tests use it as the oracle.
struct SynthLedger {
    std::unordered_map<std::string, int64_t> rows;
    std::vector<FkLedger> fks;

    std::string target_table;
    std::string label_column;   // empty when signal == None
    std::string source_table;
    std::string source_column;
    std::string signal_fk;      // FK linking target to the signal source ("" for local)
    int64_t label_flips = 0;
    double bayes_auc = 1.0;     // 1 - noise_rate for parity signals

    const FkLedger* find_fk(const std::string& name) const;
};

std::pair<RelationalInstance, SynthLedger> generate(const SynthSpec& spec);

// Convenience wrapper around write_csv_dataset for the standard layout.
SynthLedger generate_dataset(const SynthSpec& spec, const std::string& out_dir);

}  // namespace redelex
