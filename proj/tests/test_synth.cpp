#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "redelex/ingest.hpp"
#include "redelex/synth.hpp"

using namespace redelex;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("clean chain instance passes integrity and matches ledger") {
    SynthSpec spec;
    spec.n_tables = 3;
    spec.rows_per_table = 10;
    spec.topology = Topology::Chain;
    spec.seed = 1;
    auto [inst, ledger] = generate(spec);

    CHECK(validate_schema(inst.schema).empty());
    auto report = check_referential_integrity(inst);
    CHECK(report.total_dangling() == 0);
    CHECK(report.total_duplicates() == 0);
    for (auto& fk : ledger.fks) CHECK(fk.dangling == 0);
    for (auto& [name, rows] : ledger.rows)
        CHECK(inst.table(name).row_count() == static_cast<size_t>(rows));
}

TEST_CASE("ledger counts match a brute-force recount of the instance") {
    SynthSpec spec;
    spec.n_tables = 5;
    spec.rows_per_table = 120;
    spec.topology = Topology::RandomDag;
    spec.null_fk_rate = 0.1;
    spec.dangling_fk_cells = 12;
    spec.seed = 99;
    auto [inst, ledger] = generate(spec);

    int64_t total_dangling = 0;
    for (const auto& fk : inst.schema.foreign_keys) {
        const auto* lfk = ledger.find_fk(fk.name);
        REQUIRE(lfk);
        const TableDef& cdef = *inst.schema.find_table(fk.child_table);
        int col = cdef.column_index(fk.child_columns[0]);
        auto parent_index = inst.pk_index(fk.parent_table);
        int64_t non_null = 0, nulls = 0, dangling = 0;
        for (const auto& row : inst.table(fk.child_table).rows) {
            const Cell& c = row[static_cast<size_t>(col)];
            if (c.is_null()) {
                ++nulls;
                continue;
            }
            ++non_null;
            if (!parent_index.count({c})) ++dangling;
        }
        CHECK(lfk->non_null == non_null);
        CHECK(lfk->null_cells == nulls);
        CHECK(lfk->dangling == dangling);
        total_dangling += dangling;
    }
    CHECK(total_dangling == 12);
}

TEST_CASE("same spec emits byte-identical datasets") {
    SynthSpec spec;
    spec.n_tables = 4;
    spec.rows_per_table = 50;
    spec.topology = Topology::Star;
    spec.text_cols = 1;
    spec.temporal_cols = 1;
    spec.signal = PlantedSignal::TargetOneHop;
    spec.noise_rate = 0.05;
    spec.seed = 2024;

    auto d1 = fs::temp_directory_path() / "redelex_synth_a";
    auto d2 = fs::temp_directory_path() / "redelex_synth_b";
    generate_dataset(spec, d1.string());
    generate_dataset(spec, d2.string());

    for (const auto& entry : fs::directory_iterator(d1)) {
        auto other = d2 / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
    }
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("one-hop signal: labels derive from parent code parity") {
    SynthSpec spec;
    spec.n_tables = 2;
    spec.rows_per_table = 400;
    spec.topology = Topology::Chain;
    spec.signal = PlantedSignal::TargetOneHop;
    spec.noise_rate = 0.0;
    spec.seed = 77;
    auto [inst, ledger] = generate(spec);
    CHECK(ledger.bayes_auc == doctest::Approx(1.0));
    CHECK(ledger.label_flips == 0);

    const TableDef& tdef = *inst.schema.find_table(ledger.target_table);
    const TableDef& sdef = *inst.schema.find_table(ledger.source_table);
    int label_col = tdef.column_index("label");
    int code_col = sdef.column_index("code");
    const ForeignKeyDef* fk = nullptr;
    for (const auto& f : inst.schema.foreign_keys)
        if (f.name == ledger.signal_fk) fk = &f;
    REQUIRE(fk);
    int fk_col = tdef.column_index(fk->child_columns[0]);

    for (const auto& row : inst.table(ledger.target_table).rows) {
        const Cell& fk_cell = row[static_cast<size_t>(fk_col)];
        REQUIRE_FALSE(fk_cell.is_null());
        const auto& parent_row =
            inst.table(ledger.source_table).rows[static_cast<size_t>(fk_cell.as_int())];
        std::string code = parent_row[static_cast<size_t>(code_col)].as_text();
        int code_idx = std::stoi(code.substr(1));
        bool expect_pos = code_idx % 2 == 1;
        CHECK(row[static_cast<size_t>(label_col)].as_text() == (expect_pos ? "pos" : "neg"));
    }
}

TEST_CASE("noise rate flips roughly the expected share of labels") {
    SynthSpec spec;
    spec.n_tables = 2;
    spec.rows_per_table = 2000;
    spec.signal = PlantedSignal::TargetOneHop;
    spec.noise_rate = 0.05;
    spec.seed = 5;
    auto [inst, ledger] = generate(spec);
    // 4 sigma window around 100 expected flips
    CHECK(ledger.label_flips > 60);
    CHECK(ledger.label_flips < 140);
    CHECK(ledger.bayes_auc == doctest::Approx(0.95));
}

TEST_CASE("junction topology produces a factual-free join table") {
    SynthSpec spec;
    spec.n_tables = 3;
    spec.rows_per_table = 30;
    spec.topology = Topology::Junction;
    spec.seed = 8;
    auto [inst, ledger] = generate(spec);
    const TableDef& j = *inst.schema.find_table("t2");
    int factual = 0;
    for (const auto& c : j.columns)
        if (c.semantic_type != SemanticType::PrimaryKey &&
            c.semantic_type != SemanticType::ForeignKey)
            ++factual;
    CHECK(factual == 0);
    int fks = 0;
    for (const auto& fk : inst.schema.foreign_keys)
        if (fk.child_table == "t2") ++fks;
    CHECK(fks == 2);
}

TEST_CASE("dimension signal adds a dim table reachable from the target") {
    SynthSpec spec;
    spec.n_tables = 2;
    spec.rows_per_table = 100;
    spec.signal = PlantedSignal::TargetDimension;
    spec.dimension_rows = 12;
    spec.seed = 31;
    auto [inst, ledger] = generate(spec);
    CHECK(ledger.source_table == "dim");
    CHECK(inst.table("dim").row_count() == 12);
    const auto* fk = ledger.find_fk(ledger.signal_fk);
    REQUIRE(fk);
    CHECK(fk->non_null == 100);
}
