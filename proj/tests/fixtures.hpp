// Hand-built schema fixtures used by feature and CLI tests.
#pragma once

#include <string>
#include <vector>

#include "redelex/instance.hpp"

namespace redelex::fixtures {

inline ColumnDef make_col(const std::string& name, DeclaredType d, SemanticType s) {
    ColumnDef c;
    c.name = name;
    c.declared_type = d;
    c.semantic_type = s;
    return c;
}

inline void add_fk(RelationalSchema& schema, const std::string& child,
                   const std::string& child_col, const std::string& parent) {
    ForeignKeyDef fk;
    fk.name = child + "_" + child_col;
    fk.child_table = child;
    fk.child_columns = {child_col};
    fk.parent_table = parent;
    fk.parent_columns = {"id"};
    schema.foreign_keys.push_back(fk);
}

// Traffic-accident style database: three tables forming a triangle of FKs
// (diameter 1, cycle) and 38 factual columns in total.
inline RelationalInstance accident_db() {
    RelationalInstance inst;

    TableDef district;
    district.name = "district";
    district.columns = {make_col("id", DeclaredType::Integer, SemanticType::PrimaryKey)};
    for (int i = 0; i < 4; ++i)
        district.columns.push_back(
            make_col("d_attr" + std::to_string(i), DeclaredType::Text, SemanticType::Categorical));
    district.primary_key = {"id"};

    TableDef incident;
    incident.name = "incident";
    incident.columns = {make_col("id", DeclaredType::Integer, SemanticType::PrimaryKey),
                        make_col("district_id", DeclaredType::Integer, SemanticType::ForeignKey)};
    for (int i = 0; i < 25; ++i)
        incident.columns.push_back(
            make_col("i_attr" + std::to_string(i), DeclaredType::Real, SemanticType::Numerical));
    incident.primary_key = {"id"};

    TableDef person;
    person.name = "person";
    person.columns = {make_col("id", DeclaredType::Integer, SemanticType::PrimaryKey),
                      make_col("incident_id", DeclaredType::Integer, SemanticType::ForeignKey),
                      make_col("district_id", DeclaredType::Integer, SemanticType::ForeignKey)};
    for (int i = 0; i < 9; ++i)
        person.columns.push_back(
            make_col("p_attr" + std::to_string(i), DeclaredType::Text, SemanticType::Categorical));
    person.primary_key = {"id"};

    inst.schema.tables = {district, incident, person};
    add_fk(inst.schema, "incident", "district_id", "district");
    add_fk(inst.schema, "person", "incident_id", "incident");
    add_fk(inst.schema, "person", "district_id", "district");

    inst.tables.resize(3);
    for (int i = 0; i < 3; ++i) {
        Row row = {Cell(int64_t(i))};
        for (int k = 0; k < 4; ++k) row.push_back(Cell("d" + std::to_string(i)));
        inst.tables[0].rows.push_back(row);
    }
    for (int i = 0; i < 6; ++i) {
        Row row = {Cell(int64_t(i)), Cell(int64_t(i % 3))};
        for (int k = 0; k < 25; ++k) row.push_back(Cell(i * 0.5 + k));
        inst.tables[1].rows.push_back(row);
    }
    for (int i = 0; i < 8; ++i) {
        Row row = {Cell(int64_t(i)), Cell(int64_t(i % 6)), Cell(int64_t(i % 3))};
        for (int k = 0; k < 9; ++k) row.push_back(Cell("p" + std::to_string(i % 2)));
        inst.tables[2].rows.push_back(row);
    }
    return inst;
}

// Geography-style database: a six-table containment chain plus a border
// junction, giving table-graph diameter 5 with a cycle.
inline RelationalInstance geography_db() {
    RelationalInstance inst;
    const char* chain[6] = {"continent", "country", "province", "city", "district", "street"};
    for (int i = 0; i < 6; ++i) {
        TableDef t;
        t.name = chain[i];
        t.columns = {make_col("id", DeclaredType::Integer, SemanticType::PrimaryKey),
                     make_col("name", DeclaredType::Text, SemanticType::Text)};
        if (i > 0)
            t.columns.push_back(
                make_col("within_id", DeclaredType::Integer, SemanticType::ForeignKey));
        t.primary_key = {"id"};
        inst.schema.tables.push_back(t);
    }
    TableDef border;
    border.name = "border";
    border.columns = {make_col("id", DeclaredType::Integer, SemanticType::PrimaryKey),
                      make_col("a_id", DeclaredType::Integer, SemanticType::ForeignKey),
                      make_col("b_id", DeclaredType::Integer, SemanticType::ForeignKey)};
    border.primary_key = {"id"};
    inst.schema.tables.push_back(border);

    for (int i = 1; i < 6; ++i) add_fk(inst.schema, chain[i], "within_id", chain[i - 1]);
    // border links province<->city, closing a cycle without stretching paths
    add_fk(inst.schema, "border", "a_id", "province");
    add_fk(inst.schema, "border", "b_id", "city");

    inst.tables.resize(7);
    for (int t = 0; t < 6; ++t) {
        for (int r = 0; r < 4; ++r) {
            Row row = {Cell(int64_t(r)), Cell(std::string(chain[t]) + std::to_string(r))};
            if (t > 0) row.push_back(Cell(int64_t(r % 4)));
            inst.tables[static_cast<size_t>(t)].rows.push_back(row);
        }
    }
    for (int r = 0; r < 5; ++r)
        inst.tables[6].rows.push_back(
            {Cell(int64_t(r)), Cell(int64_t(r % 4)), Cell(int64_t((r + 1) % 4))});
    return inst;
}

// Telemetry-style hub database: 34 tables, 34 FKs, every relationship 1:1.
inline RelationalInstance telemetry_db() {
    RelationalInstance inst;
    TableDef hub;
    hub.name = "unit";
    hub.columns = {make_col("id", DeclaredType::Integer, SemanticType::PrimaryKey),
                   make_col("serial", DeclaredType::Text, SemanticType::Text)};
    hub.primary_key = {"id"};
    inst.schema.tables.push_back(hub);
    for (int i = 0; i < 33; ++i) {
        TableDef t;
        t.name = "sensor" + std::to_string(i);
        t.columns = {make_col("id", DeclaredType::Integer, SemanticType::PrimaryKey),
                     make_col("unit_id", DeclaredType::Integer, SemanticType::ForeignKey),
                     make_col("reading", DeclaredType::Real, SemanticType::Numerical),
                     make_col("status", DeclaredType::Text, SemanticType::Categorical)};
        t.primary_key = {"id"};
        inst.schema.tables.push_back(t);
        add_fk(inst.schema, t.name, "unit_id", "unit");
    }
    // one extra 1:1 link between two sensor tables -> 34 FKs
    inst.schema.tables[1].columns.push_back(
        make_col("twin_id", DeclaredType::Integer, SemanticType::ForeignKey));
    add_fk(inst.schema, "sensor0", "twin_id", "sensor1");

    inst.tables.resize(inst.schema.tables.size());
    for (int r = 0; r < 5; ++r)
        inst.tables[0].rows.push_back({Cell(int64_t(r)), Cell("u" + std::to_string(r))});
    for (size_t t = 1; t < inst.schema.tables.size(); ++t) {
        for (int r = 0; r < 5; ++r) {
            Row row = {Cell(int64_t(r)), Cell(int64_t(r)), Cell(r * 1.25),
                       Cell(r % 2 ? "ok" : "warn")};
            if (t == 1) row.push_back(Cell(int64_t(r)));  // sensor0.twin_id, unique
            inst.tables[t].rows.push_back(row);
        }
    }
    return inst;
}

// Citation-style database: 3 tables, 3 FKs, only 2 factual columns.
inline RelationalInstance citation_db() {
    RelationalInstance inst;
    TableDef paper;
    paper.name = "paper";
    paper.columns = {make_col("id", DeclaredType::Integer, SemanticType::PrimaryKey),
                     make_col("subject", DeclaredType::Text, SemanticType::Categorical)};
    paper.primary_key = {"id"};
    TableDef content;
    content.name = "content";
    content.columns = {make_col("id", DeclaredType::Integer, SemanticType::PrimaryKey),
                       make_col("paper_id", DeclaredType::Integer, SemanticType::ForeignKey),
                       make_col("word", DeclaredType::Text, SemanticType::Categorical)};
    content.primary_key = {"id"};
    TableDef cites;
    cites.name = "cites";
    cites.columns = {make_col("id", DeclaredType::Integer, SemanticType::PrimaryKey),
                     make_col("citing_id", DeclaredType::Integer, SemanticType::ForeignKey),
                     make_col("cited_id", DeclaredType::Integer, SemanticType::ForeignKey)};
    cites.primary_key = {"id"};
    inst.schema.tables = {paper, content, cites};
    add_fk(inst.schema, "content", "paper_id", "paper");
    add_fk(inst.schema, "cites", "citing_id", "paper");
    add_fk(inst.schema, "cites", "cited_id", "paper");

    inst.tables.resize(3);
    for (int r = 0; r < 8; ++r)
        inst.tables[0].rows.push_back({Cell(int64_t(r)), Cell("s" + std::to_string(r % 3))});
    for (int r = 0; r < 40; ++r)
        inst.tables[1].rows.push_back(
            {Cell(int64_t(r)), Cell(int64_t(r % 8)), Cell("w" + std::to_string(r % 10))});
    for (int r = 0; r < 20; ++r)
        inst.tables[2].rows.push_back(
            {Cell(int64_t(r)), Cell(int64_t(r % 8)), Cell(int64_t((r + 3) % 8))});
    return inst;
}

}  // namespace redelex::fixtures
