#include <doctest.h>

#include "redelex/schema.hpp"
#include "redelex/error.hpp"

using namespace redelex;

namespace {

ColumnDef col(const std::string& name, DeclaredType t) {
    ColumnDef c;
    c.name = name;
    c.declared_type = t;
    return c;
}

RelationalSchema two_table_schema() {
    RelationalSchema s;
    TableDef parent;
    parent.name = "parent";
    parent.columns = {col("id", DeclaredType::Integer), col("name", DeclaredType::Text)};
    parent.primary_key = {"id"};
    TableDef child;
    child.name = "child";
    child.columns = {col("id", DeclaredType::Integer), col("parent_id", DeclaredType::Integer)};
    child.primary_key = {"id"};
    s.tables = {parent, child};
    ForeignKeyDef fk;
    fk.name = "child_parent";
    fk.child_table = "child";
    fk.child_columns = {"parent_id"};
    fk.parent_table = "parent";
    fk.parent_columns = {"id"};
    s.foreign_keys = {fk};
    return s;
}

}  // namespace

TEST_CASE("well-formed two-table schema validates clean") {
    CHECK(validate_schema(two_table_schema()).empty());
}

TEST_CASE("FK referencing a non-PK parent column is a violation") {
    RelationalSchema s = two_table_schema();
    s.foreign_keys[0].parent_columns = {"name"};
    auto v = validate_schema(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "fk_parent_not_pk");
    CHECK(v[0].detail.find("child_parent") != std::string::npos);
}

TEST_CASE("duplicate table name is a violation") {
    RelationalSchema s = two_table_schema();
    s.tables.push_back(s.tables[0]);
    auto v = validate_schema(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "duplicate_table_name");
    CHECK(v[0].table == "parent");
}

TEST_CASE("missing pk column and fk arity violations are reported") {
    RelationalSchema s = two_table_schema();
    s.tables[0].primary_key = {"missing"};
    s.foreign_keys[0].child_columns = {"parent_id", "id"};
    auto v = validate_schema(s);
    bool saw_pk = false, saw_arity = false, saw_parent_pk = false;
    for (auto& viol : v) {
        if (viol.rule == "pk_column_missing") saw_pk = true;
        if (viol.rule == "fk_arity_mismatch") saw_arity = true;
        if (viol.rule == "fk_parent_not_pk") saw_parent_pk = true;
    }
    CHECK(saw_pk);
    CHECK(saw_arity);
    CHECK(saw_parent_pk);  // parent PK changed, so fk no longer matches it
}

namespace {

std::vector<Row> rows_of(const std::vector<Cell>& cells) {
    std::vector<Row> rows;
    for (const auto& c : cells) rows.push_back({c});
    return rows;
}

}  // namespace

TEST_CASE("text column with few distinct values infers categorical") {
    TableDef t;
    t.name = "t";
    t.columns = {col("status", DeclaredType::Text)};
    std::vector<Row> sample;
    const char* vals[3] = {"open", "closed", "pending"};
    for (int i = 0; i < 1000; ++i) sample.push_back({Cell(std::string(vals[i % 3]))});
    TableDef r = infer_semantic_types(t, sample, {});
    CHECK(r.columns[0].semantic_type == SemanticType::Categorical);
}

TEST_CASE("primary key column is typed primary_key regardless of values") {
    TableDef t;
    t.name = "t";
    t.columns = {col("id", DeclaredType::Text)};
    t.primary_key = {"id"};
    std::vector<Row> sample = rows_of({Cell("2020-01-01"), Cell("2020-01-02")});
    TableDef r = infer_semantic_types(t, sample, {});
    CHECK(r.columns[0].semantic_type == SemanticType::PrimaryKey);
}

TEST_CASE("fk membership outranks pk membership and content") {
    TableDef t;
    t.name = "t";
    t.columns = {col("ref", DeclaredType::Integer)};
    t.primary_key = {"ref"};
    std::vector<Row> sample = rows_of({Cell(int64_t(1)), Cell(int64_t(2))});
    TableDef r = infer_semantic_types(t, sample, {"ref"});
    CHECK(r.columns[0].semantic_type == SemanticType::ForeignKey);
}

TEST_CASE("ISO date text column infers temporal; oracle is a direct scan") {
    TableDef t;
    t.name = "t";
    t.columns = {col("shipped", DeclaredType::Text)};
    std::vector<Row> sample;
    for (int d = 1; d <= 28; ++d) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "2021-03-%02d", d);
        sample.push_back({Cell(std::string(buf))});
    }
    sample.push_back({Cell::null()});

    // independent oracle: count pattern matches over non-null values
    size_t matches = 0, non_null = 0;
    for (auto& row : sample) {
        if (row[0].is_null()) continue;
        ++non_null;
        if (parse_timestamp(row[0].as_text())) ++matches;
    }
    CHECK(matches == non_null);  // 100% parseable

    TableDef r = infer_semantic_types(t, sample, {});
    CHECK(r.columns[0].semantic_type == SemanticType::Temporal);
}

TEST_CASE("temporal name pattern needs value confirmation") {
    TableDef t;
    t.name = "t";
    t.columns = {col("update_time", DeclaredType::Text)};
    std::vector<Row> sample;
    for (int i = 0; i < 50; ++i) sample.push_back({Cell("hello" + std::to_string(i))});
    TableDef r = infer_semantic_types(t, sample, {});
    CHECK(r.columns[0].semantic_type == SemanticType::Text);
}

TEST_CASE("numeric strings infer numerical before the unique-ratio rule") {
    TableDef t;
    t.name = "t";
    t.columns = {col("amount", DeclaredType::Text)};
    std::vector<Row> sample;
    for (int i = 0; i < 100; ++i) sample.push_back({Cell(std::to_string(i % 3))});
    TableDef r = infer_semantic_types(t, sample, {});
    CHECK(r.columns[0].semantic_type == SemanticType::Numerical);
}

TEST_CASE("delimited categorical upgrades to multi_categorical") {
    TableDef t;
    t.name = "t";
    t.columns = {col("tags", DeclaredType::Text)};
    std::vector<Row> sample;
    const char* vals[4] = {"red,blue", "red", "blue,green", "green"};
    for (int i = 0; i < 200; ++i) sample.push_back({Cell(std::string(vals[i % 4]))});
    TableDef r = infer_semantic_types(t, sample, {});
    CHECK(r.columns[0].semantic_type == SemanticType::MultiCategorical);
}

TEST_CASE("mostly-null signal-less column is ignored") {
    TableDef t;
    t.name = "t";
    t.columns = {col("junk", DeclaredType::Text)};
    std::vector<Row> sample;
    for (int i = 0; i < 100; ++i) {
        if (i < 70) sample.push_back({Cell::null()});
        else sample.push_back({Cell("u" + std::to_string(i))});
    }
    TableDef r = infer_semantic_types(t, sample, {});
    CHECK(r.columns[0].semantic_type == SemanticType::Ignored);
}

TEST_CASE("inference is deterministic and exhaustive") {
    TableDef t;
    t.name = "t";
    t.columns = {col("a", DeclaredType::Text), col("b", DeclaredType::Integer),
                 col("c", DeclaredType::Real), col("d", DeclaredType::Boolean),
                 col("e", DeclaredType::Datetime), col("f", DeclaredType::Unknown)};
    std::vector<Row> sample;
    for (int i = 0; i < 64; ++i) {
        sample.push_back({Cell("s" + std::to_string(i)), Cell(int64_t(i)), Cell(i * 0.5),
                          Cell(i % 2 == 0), Cell(Timestamp{i * 1000}),
                          Cell(std::to_string(i) + "x")});
    }
    TableDef r1 = infer_semantic_types(t, sample, {});
    TableDef r2 = infer_semantic_types(t, sample, {});
    for (size_t i = 0; i < r1.columns.size(); ++i) {
        CHECK(r1.columns[i].semantic_type == r2.columns[i].semantic_type);
        CHECK(r1.columns[i].semantic_type != SemanticType::Unassigned);
    }
    CHECK(r1.columns[3].semantic_type == SemanticType::Categorical);  // boolean
    CHECK(r1.columns[4].semantic_type == SemanticType::Temporal);     // datetime
}

TEST_CASE("empty sample raises EmptySample") {
    TableDef t;
    t.name = "t";
    t.columns = {col("a", DeclaredType::Text)};
    CHECK_THROWS_AS(infer_semantic_types(t, {}, {}), Error);
    try {
        infer_semantic_types(t, {}, {});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptySample);
    }
}
