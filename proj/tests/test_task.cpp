#include <doctest.h>

#include <algorithm>

#include "redelex/error.hpp"
#include "redelex/rng.hpp"
#include "redelex/synth.hpp"
#include "redelex/task.hpp"

using namespace redelex;

namespace {

// 10-row table with 2 null targets and a categorical target column.
RelationalInstance small_target_instance() {
    RelationalInstance inst;
    TableDef t;
    t.name = "items";
    auto col = [](const char* n, DeclaredType d, SemanticType s) {
        ColumnDef c;
        c.name = n;
        c.declared_type = d;
        c.semantic_type = s;
        return c;
    };
    t.columns = {col("id", DeclaredType::Integer, SemanticType::PrimaryKey),
                 col("feat", DeclaredType::Real, SemanticType::Numerical),
                 col("target", DeclaredType::Text, SemanticType::Categorical)};
    t.primary_key = {"id"};
    inst.schema.tables = {t};
    inst.tables.resize(1);
    const char* targets[10] = {"a", "b", nullptr, "a", "c", nullptr, "b", "a", "c", "a"};
    for (int i = 0; i < 10; ++i) {
        Cell tc = targets[i] ? Cell(std::string(targets[i])) : Cell::null();
        inst.tables[0].rows.push_back({Cell(int64_t(i)), Cell(i * 0.5), tc});
    }
    return inst;
}

TaskSpec multiclass_spec() {
    TaskSpec spec;
    spec.kind = TaskKind::MulticlassClassification;
    spec.target_table = "items";
    spec.target_column = "target";
    return spec;
}

}  // namespace

TEST_CASE("extract: null targets drop from the table, not from the instance") {
    auto inst = small_target_instance();
    auto [modified, table] = extract_target_task(inst, multiclass_spec());
    CHECK(table.size() == 8);
    CHECK(modified.table("items").row_count() == 10);
    CHECK(modified.schema.find_table("items")->columns.size() == 2);  // target gone
    CHECK(modified.schema.find_table("items")->column_index("target") == -1);
}

TEST_CASE("extract: classes index by first occurrence") {
    auto inst = small_target_instance();
    auto [modified, table] = extract_target_task(inst, multiclass_spec());
    REQUIRE(table.class_values.size() == 3);
    CHECK(table.class_values[0] == Cell("a"));
    CHECK(table.class_values[1] == Cell("b"));
    CHECK(table.class_values[2] == Cell("c"));
    // labels: a b a c b a c a -> 0 1 0 2 1 0 2 0
    std::vector<int64_t> want = {0, 1, 0, 2, 1, 0, 2, 0};
    REQUIRE(table.labels.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) CHECK(table.labels[i].as_int() == want[i]);
}

TEST_CASE("extract: no column of the modified instance equals the target vector") {
    SynthSpec spec;
    spec.n_tables = 3;
    spec.rows_per_table = 150;
    spec.signal = PlantedSignal::TargetOneHop;
    spec.seed = 6;
    auto [inst, ledger] = generate(spec);

    TaskSpec task;
    task.kind = TaskKind::BinaryClassification;
    task.target_table = ledger.target_table;
    task.target_column = ledger.label_column;
    auto [modified, table] = extract_target_task(inst, task);

    // oracle: scan every column of every table of the modified instance for a
    // vector identical to the original target values
    const TableDef& orig_def = *inst.schema.find_table(ledger.target_table);
    int target_col = orig_def.column_index(ledger.label_column);
    std::vector<Cell> target_vec;
    for (const auto& row : inst.table(ledger.target_table).rows)
        target_vec.push_back(row[static_cast<size_t>(target_col)]);

    for (size_t ti = 0; ti < modified.schema.tables.size(); ++ti) {
        const TableDef& def = modified.schema.tables[ti];
        const Table& data = modified.tables[ti];
        if (data.rows.size() != target_vec.size()) continue;
        for (size_t c = 0; c < def.columns.size(); ++c) {
            bool identical = true;
            for (size_t r = 0; r < data.rows.size() && identical; ++r)
                identical = data.rows[r][c] == target_vec[r];
            CHECK_FALSE(identical);
        }
    }
}

TEST_CASE("extract: key target and all-null target raise") {
    auto inst = small_target_instance();
    TaskSpec spec = multiclass_spec();
    spec.target_column = "id";
    CHECK_THROWS_AS(extract_target_task(inst, spec), Error);

    auto inst2 = small_target_instance();
    for (auto& row : inst2.tables[0].rows) row[2] = Cell::null();
    try {
        extract_target_task(inst2, multiclass_spec());
        FAIL("expected AllTargetsNull");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AllTargetsNull);
    }
}

TEST_CASE("mask task: binomial count bound, replay determinism, restore identity") {
    SynthSpec gen;
    gen.n_tables = 2;
    gen.rows_per_table = 500;
    gen.numeric_cols = 1;
    gen.categorical_cols = 1;
    gen.seed = 10;
    auto [inst, ledger] = generate(gen);
    // target table t1 has numeric + categorical factual -> 1000 maskable cells

    TaskSpec spec;
    spec.kind = TaskKind::MaskPretrain;
    spec.target_table = "t1";
    spec.mask_rate = 0.2;
    spec.seed = 555;
    auto [masked, table] = make_mask_pretrain_task(inst, spec);

    // 1000 maskable cells at rate .2: +-4 sigma window per the binomial bound
    CHECK(table.size() >= 160);
    CHECK(table.size() <= 240);

    auto [masked2, table2] = make_mask_pretrain_task(inst, spec);
    CHECK(table2.size() == table.size());
    CHECK(table2.entity_rows == table.entity_rows);
    CHECK(table2.mask_columns == table.mask_columns);

    // masked cells are null in the masked instance, originals recorded
    const TableDef& def = *masked.schema.find_table("t1");
    for (size_t i = 0; i < table.size(); ++i) {
        int col = def.column_index(table.mask_columns[i]);
        const Cell& cell =
            masked.table("t1").rows[static_cast<size_t>(table.entity_rows[i])]
                                   [static_cast<size_t>(col)];
        CHECK(cell.is_null());
        CHECK_FALSE(table.labels[i].is_null());
    }

    // reversibility: applying targets restores the original table exactly
    apply_mask_targets(masked, table);
    for (size_t r = 0; r < inst.table("t1").rows.size(); ++r)
        CHECK(masked.table("t1").rows[r] == inst.table("t1").rows[r]);
}

TEST_CASE("mask task rejects rate 0 and key-only tables") {
    SynthSpec gen;
    gen.n_tables = 3;
    gen.rows_per_table = 20;
    gen.topology = Topology::Junction;
    gen.seed = 2;
    auto [inst, ledger] = generate(gen);

    TaskSpec spec;
    spec.kind = TaskKind::MaskPretrain;
    spec.target_table = "t2";  // junction: nothing maskable
    spec.mask_rate = 0.3;
    CHECK_THROWS_AS(make_mask_pretrain_task(inst, spec), Error);

    spec.target_table = "t1";
    spec.mask_rate = 0.0;  // violates (0,1]
    CHECK_THROWS_AS(make_mask_pretrain_task(inst, spec), Error);
}

namespace {

TrainingTable table_of(size_t n) {
    TrainingTable t;
    for (size_t i = 0; i < n; ++i) {
        t.entity_keys.push_back({Cell(int64_t(i))});
        t.entity_rows.push_back(static_cast<int64_t>(i));
        t.labels.push_back(Cell(int64_t(i % 2)));
    }
    t.split.assign(n, Split::Unassigned);
    return t;
}

}  // namespace

TEST_CASE("random split: exact largest-remainder counts and determinism") {
    auto t = table_of(100);
    assign_random_split(t, {0.7, 0.15, 0.15}, 9);
    CHECK(t.count(Split::Train) == 70);
    CHECK(t.count(Split::Val) == 15);
    CHECK(t.count(Split::Test) == 15);

    auto t2 = table_of(100);
    assign_random_split(t2, {0.7, 0.15, 0.15}, 9);
    CHECK(t2.split == t.split);

    auto t3 = table_of(100);
    assign_random_split(t3, {1.0, 0.0, 0.0}, 1);
    CHECK(t3.count(Split::Train) == 100);

    CHECK_THROWS_AS(assign_random_split(t3, {0.5, 0.2, 0.2}, 1), Error);
}

TEST_CASE("temporal split: quantile boundaries with later-split ties") {
    auto t = table_of(10);
    t.has_timestamps = true;
    for (int i = 0; i < 10; ++i) t.timestamps.push_back(i + 1);  // 1..10
    assign_temporal_split(t, {0.7, 0.15, 0.15});
    // expected: train={1..7}, val={8}, test={9,10}
    for (int i = 0; i < 7; ++i) CHECK(t.split[static_cast<size_t>(i)] == Split::Train);
    CHECK(t.split[7] == Split::Val);
    CHECK(t.split[8] == Split::Test);
    CHECK(t.split[9] == Split::Test);

    // monotonicity
    int64_t max_train = -1, min_val = 1 << 20, min_test = 1 << 20;
    for (size_t i = 0; i < 10; ++i) {
        if (t.split[i] == Split::Train) max_train = std::max(max_train, t.timestamps[i]);
        if (t.split[i] == Split::Val) min_val = std::min(min_val, t.timestamps[i]);
        if (t.split[i] == Split::Test) min_test = std::min(min_test, t.timestamps[i]);
    }
    CHECK(max_train <= min_val);
    CHECK(min_val <= min_test);
}

TEST_CASE("temporal split: all-equal timestamps degenerate to train") {
    auto t = table_of(6);
    t.has_timestamps = true;
    t.timestamps.assign(6, 42);
    assign_temporal_split(t, {0.7, 0.15, 0.15});
    CHECK(t.count(Split::Train) == 6);
    REQUIRE(t.notes.size() == 1);
    CHECK(t.notes[0].find("TieDegenerate") != std::string::npos);
}

TEST_CASE("temporal split: shuffled input yields the same per-row assignment") {
    auto t = table_of(30);
    t.has_timestamps = true;
    Rng rng(3);
    for (int i = 0; i < 30; ++i)
        t.timestamps.push_back(static_cast<int64_t>(rng.next_below(10)));  // many ties
    assign_temporal_split(t, {0.6, 0.2, 0.2});

    // permute rows and re-split; each entity must land in the same split
    std::vector<size_t> perm(30);
    for (size_t i = 0; i < 30; ++i) perm[i] = i;
    rng.shuffle(perm);
    auto shuffled = table_of(30);
    shuffled.has_timestamps = true;
    shuffled.timestamps.resize(30);
    for (size_t i = 0; i < 30; ++i) {
        shuffled.entity_keys[i] = t.entity_keys[perm[i]];
        shuffled.timestamps[i] = t.timestamps[perm[i]];
    }
    assign_temporal_split(shuffled, {0.6, 0.2, 0.2});
    for (size_t i = 0; i < 30; ++i) CHECK(shuffled.split[i] == t.split[perm[i]]);

    // boundary-tied rows all share a split with their timestamp twins
    for (size_t i = 0; i < 30; ++i)
        for (size_t j = 0; j < 30; ++j)
            if (t.timestamps[i] == t.timestamps[j]) CHECK(t.split[i] == t.split[j]);
}

TEST_CASE("temporal split without timestamps raises") {
    auto t = table_of(5);
    CHECK_THROWS_AS(assign_temporal_split(t, {0.7, 0.15, 0.15}), Error);
}

TEST_CASE("mask rate sweep: masked share tracks the rate") {
    SynthSpec gen;
    gen.n_tables = 2;
    gen.rows_per_table = 400;
    gen.numeric_cols = 2;
    gen.categorical_cols = 0;
    gen.seed = 3;
    auto [inst, ledger] = generate(gen);
    for (double rate : {0.05, 0.5, 1.0}) {
        TaskSpec spec;
        spec.kind = TaskKind::MaskPretrain;
        spec.target_table = "t1";
        spec.mask_rate = rate;
        spec.seed = 7;
        auto [masked, table] = make_mask_pretrain_task(inst, spec);
        double share = static_cast<double>(table.size()) / 800.0;
        CHECK(share == doctest::Approx(rate).epsilon(0.25));
        if (rate == 1.0) CHECK(table.size() == 800);
    }
}
