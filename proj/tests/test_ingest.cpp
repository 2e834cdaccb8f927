#include "kpaths/ingest.hpp"

#include "kpaths/augment.hpp"
#include "kpaths/serialize.hpp"
#include "support/fixture.hpp"

#include <doctest.h>

#include <sstream>

using namespace kpaths;

TEST_SUITE("ingestion") {

TEST_CASE("tsv edge lines parse into records") {
    std::istringstream in("Quetiapine\tbinds\tHTR1A\n");
    auto records = load_edges(in, EdgeFormat::tsv);
    REQUIRE(records.size() == 1);
    CHECK(records[0].head_name == "Quetiapine");
    CHECK(records[0].relation_name == "binds");
    CHECK(records[0].tail_name == "HTR1A");
    CHECK(records[0].line == 1);
}

TEST_CASE("wrong column count reports the line number") {
    std::istringstream in("a\tr\tb\nbroken\tline\n");
    try {
        load_edges(in, EdgeFormat::tsv, "edges.tsv");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("edges.tsv:2") != std::string::npos);
    }
}

TEST_CASE("comments and blank lines are ignored, empty input is empty") {
    std::istringstream in("# header\n\na\tr\tb\n  # indented comment\nc\tr\td\n");
    CHECK(load_edges(in, EdgeFormat::tsv).size() == 2);
    std::istringstream empty("");
    CHECK(load_edges(empty, EdgeFormat::tsv).empty());
    std::istringstream three("a\tr\tb\nb\tr\tc\nc\tr\ta\n");
    CHECK(load_edges(three, EdgeFormat::tsv).size() == 3);
}

TEST_CASE("jsonl edges parse and validate") {
    std::istringstream in(R"({"head":"a","relation":"r","tail":"b"})" "\n");
    auto records = load_edges(in, EdgeFormat::jsonl);
    REQUIRE(records.size() == 1);
    CHECK(records[0].head_name == "a");

    std::istringstream bad(R"({"head":"a","relation":"r"})" "\n");
    CHECK_THROWS_AS(load_edges(bad, EdgeFormat::jsonl), Error);
}

TEST_CASE("entity dictionary rows map name to kind") {
    std::istringstream in("HTR1A\tGene\n");
    auto records = load_entity_dictionary(in);
    REQUIRE(records.size() == 1);
    CHECK(records[0].name == "HTR1A");
    CHECK(records[0].kind == "Gene");
}

TEST_CASE("duplicate entity names after normalization are rejected") {
    std::istringstream in("aspirin\tCompound\nAspirin\tCompound\n");
    try {
        load_entity_dictionary(in, "entities.tsv");
        FAIL("expected DuplicateEntity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DuplicateEntity);
    }
}

TEST_CASE("empty kind column is a parse error") {
    std::istringstream in("HTR1A\t\n");
    CHECK_THROWS_AS(load_entity_dictionary(in), Error);
}

TEST_CASE("relation rows carry both labels") {
    std::istringstream in("downregulates\tdownregulates\tis downregulated by\n");
    auto records = load_relation_dictionary(in);
    REQUIRE(records.size() == 1);
    CHECK(records[0].forward_label == "downregulates");
    CHECK(records[0].inverse_label == "is downregulated by");
}

TEST_CASE("passive fallback covers regular and irregular verbs") {
    CHECK(passive_inverse_label("treats") == "is treated by");
    CHECK(passive_inverse_label("causes") == "is caused by");
    CHECK(passive_inverse_label("binds") == "is bound by");
    CHECK(passive_inverse_label("resembles") == "is resembled by");
    CHECK(passive_inverse_label("covaries") == "is covaried by");
    CHECK_FALSE(passive_inverse_label("associates with").has_value());
    CHECK_FALSE(passive_inverse_label("x").has_value());

    std::istringstream in("treats\ttreats\n");
    auto records = load_relation_dictionary(in);
    REQUIRE(records.size() == 1);
    CHECK(records[0].inverse_label == "is treated by");

    // no fallback for labels not ending in 's'
    std::istringstream bad("with\tassociates with\n");
    CHECK_THROWS_AS(load_relation_dictionary(bad), Error);
}

TEST_CASE("duplicate relation rows are rejected") {
    std::istringstream in("treats\ttreats\tis treated by\nTreats\ttreats\tis treated by\n");
    try {
        load_relation_dictionary(in);
        FAIL("expected DuplicateRelation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DuplicateRelation);
    }
}

TEST_CASE("query resolution annotates each endpoint") {
    auto fixture = testsupport::load_fixture();
    std::istringstream in("Ritonavir\tLeflunomide\nMipomersen\tOxymetholone\nNopeA\tNopeB\n");
    auto queries = resolve_queries(fixture.graph, load_queries(in));
    REQUIRE(queries.size() == 3);
    CHECK((queries[0].u_resolved() && queries[0].v_resolved()));
    CHECK((queries[1].u_resolved() && !queries[1].v_resolved()));
    CHECK((!queries[2].u_resolved() && !queries[2].v_resolved()));
}

TEST_CASE("query endpoints must differ after normalization") {
    std::istringstream in("Aspirin\taspirin\n");
    CHECK_THROWS_AS(load_queries(in), Error);
}

TEST_CASE("query label column is preserved") {
    std::istringstream in("a\tb\tMajor\nc\td\n");
    auto queries = load_queries(in);
    REQUIRE(queries.size() == 2);
    CHECK(queries[0].label == "Major");
    CHECK_FALSE(queries[1].label.has_value());
}

TEST_CASE("unresolved edge records are counted, never silently dropped") {
    GraphBuilder builder;
    builder.add_entity("A", "Thing");
    builder.add_entity("B", "Thing");
    builder.add_relation("r", "rs", "is red by");

    std::vector<EdgeRecord> records = {
        {"A", "r", "B", 1},
        {"A", "r", "Ghost", 2},
        {"Ghost", "r", "B", 3},
        {"A", "ghost_rel", "B", 4},
    };
    IngestReport report;
    add_edges(builder, records, report);
    CHECK(report.records_total == 4);
    CHECK(report.triplets_added == 1);
    CHECK(report.unresolved == 3);
    CHECK(report.unresolved_samples.size() == 3);

    IngestReport strict_report;
    CHECK_THROWS_AS(add_edges(builder, records, strict_report, /*reject_unresolved=*/true), Error);
}

TEST_CASE("graph serialization round-trips and is idempotent") {
    auto fixture = testsupport::load_fixture();

    std::ostringstream first;
    save_graph(fixture.graph, first);
    std::istringstream in(first.str());
    auto reloaded = load_graph(in);

    CHECK(reloaded.entity_count() == fixture.graph.entity_count());
    CHECK(reloaded.relation_count() == fixture.graph.relation_count());
    CHECK(reloaded.triplets() == fixture.graph.triplets());
    CHECK(reloaded.inverses_added() == fixture.graph.inverses_added());

    std::ostringstream second;
    save_graph(reloaded, second);
    CHECK(first.str() == second.str());
}

} // TEST_SUITE
