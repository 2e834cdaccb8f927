#include "kpaths/retrieval.hpp"

#include "kpaths/augment.hpp"
#include "support/fixture.hpp"
#include "support/oracle.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace kpaths;

namespace {

// Entities named a..z register in lexicographic order, so ids follow the
// letters: a=0, b=1, ...
KnowledgeGraph letter_graph(int entities, const std::vector<std::string>& relations,
                            const std::vector<Triplet>& triplets) {
    GraphBuilder builder;
    for (int i = 0; i < entities; ++i) {
        builder.add_entity(std::string(1, static_cast<char>('a' + i)), "Thing");
    }
    for (const auto& name : relations) {
        builder.add_relation(name, name + "s", "is " + name + "ed by");
    }
    for (const Triplet& t : triplets) builder.add_triplet(t);
    return std::move(builder).build();
}

Path make_path(std::vector<EntityId> nodes, std::vector<RelationId> relations) {
    return Path{std::move(nodes), std::move(relations)};
}

bool same_paths(const std::vector<RetrievalResult>& a, const std::vector<RetrievalResult>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].mode != b[i].mode || a[i].paths != b[i].paths) return false;
        if (a[i].query.u_name != b[i].query.u_name || a[i].query.v_name != b[i].query.v_name) return false;
    }
    return true;
}

void check_path_invariants(const Path& path, int max_hops) {
    REQUIRE(path.nodes.size() == path.relations.size() + 1);
    CHECK(path.hops() >= 1);
    CHECK(static_cast<int>(path.hops()) <= max_hops);
    std::set<EntityId> distinct(path.nodes.begin(), path.nodes.end());
    CHECK(distinct.size() == path.nodes.size());
}

} // namespace

TEST_SUITE("retrieval") {

TEST_CASE("shortest_path: disconnected endpoints yield no path") {
    auto graph = letter_graph(3, {"r"}, {{0, 0, 1}});
    CHECK_FALSE(shortest_path(graph, 0, 2, 3).has_value());
}

TEST_CASE("shortest_path: excluding the only edge yields no path") {
    auto graph = letter_graph(2, {"r"}, {{0, 0, 1}});
    CHECK(shortest_path(graph, 0, 1, 3).has_value());
    std::vector<Triplet> excluded = {{0, 0, 1}};
    CHECK_FALSE(shortest_path(graph, 0, 1, 3, excluded).has_value());
}

TEST_CASE("shortest_path: diamond tie breaks on the node-id sequence") {
    // a->b->c and a->d->c, both two hops
    auto graph = letter_graph(4, {"r"}, {{0, 0, 1}, {1, 0, 2}, {0, 0, 3}, {3, 0, 2}});
    auto oracle = testsupport::k_shortest_oracle(graph, 0, 2, 1, 3);
    REQUIRE(oracle.size() == 1);

    auto path = shortest_path(graph, 0, 2, 3);
    REQUIRE(path.has_value());
    CHECK(*path == oracle[0]);
    CHECK(path->nodes == std::vector<EntityId>{0, 1, 2});
}

TEST_CASE("shortest_path respects the hop budget") {
    auto graph = letter_graph(5, {"r"}, {{0, 0, 1}, {1, 0, 2}, {2, 0, 3}, {3, 0, 4}});
    CHECK_FALSE(shortest_path(graph, 0, 4, 3).has_value());
    CHECK(shortest_path(graph, 0, 4, 4).has_value());
}

TEST_CASE("shortest_path: excluded nodes force detours") {
    // a->b->c, a->d->e->c
    auto graph = letter_graph(5, {"r"},
                              {{0, 0, 1}, {1, 0, 2}, {0, 0, 3}, {3, 0, 4}, {4, 0, 2}});
    std::vector<EntityId> blocked = {1};
    auto path = shortest_path(graph, 0, 2, 3, {}, blocked);
    REQUIRE(path.has_value());
    CHECK(path->nodes == std::vector<EntityId>{0, 3, 4, 2});
}

TEST_CASE("yen: two-route toy graph enumerates both length-2 paths") {
    // (a,r1,b),(b,r2,c),(a,r3,d),(d,r2,c); relations register as r1=0,r2=1,r3=2
    auto graph = letter_graph(4, {"r1", "r2", "r3"}, {{0, 0, 1}, {1, 1, 2}, {0, 2, 3}, {3, 1, 2}});
    auto paths = yen_k_shortest(graph, 0, 2, 3, 3);
    REQUIRE(paths.size() == 2); // no third loopless path exists
    CHECK(paths[0] == make_path({0, 1, 2}, {0, 1}));
    CHECK(paths[1] == make_path({0, 3, 2}, {2, 1}));
    CHECK(paths == testsupport::k_shortest_oracle(graph, 0, 2, 3, 3));
}

TEST_CASE("yen: k=1 equals the plain shortest path") {
    auto fixture = testsupport::load_fixture();
    auto u = *fixture.graph.lookup_entity("Quetiapine");
    auto v = *fixture.graph.lookup_entity("Bipolar disorder");
    auto paths = yen_k_shortest(fixture.graph, u, v, 1, 3);
    auto single = shortest_path(fixture.graph, u, v, 3);
    REQUIRE(paths.size() == 1);
    REQUIRE(single.has_value());
    CHECK(paths[0] == *single);
}

TEST_CASE("yen: parallel edges are distinct one-hop paths") {
    auto graph = letter_graph(2, {"r1", "r2"}, {{0, 0, 1}, {0, 1, 1}});
    auto paths = yen_k_shortest(graph, 0, 1, 3, 1);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0] == make_path({0, 1}, {0}));
    CHECK(paths[1] == make_path({0, 1}, {1}));
    CHECK(paths == testsupport::k_shortest_oracle(graph, 0, 1, 3, 1));
}

TEST_CASE("yen matches exhaustive enumeration on random multigraphs") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 40; ++trial) {
        auto graph = testsupport::random_multigraph(rng);
        SearchWorkspace workspace;
        for (EntityId u = 0; u < graph.entity_count(); ++u) {
            for (EntityId v = 0; v < graph.entity_count(); ++v) {
                if (u == v) continue;
                auto all = testsupport::enumerate_loopless_paths(graph, u, v, 3);
                for (int k : {1, 3, 10}) {
                    auto expected = all;
                    if (static_cast<int>(expected.size()) > k) expected.resize(k);
                    auto actual = yen_k_shortest(graph, u, v, k, 3, workspace);
                    REQUIRE(actual == expected);
                }
            }
        }
    }
}

TEST_CASE("yen results are monotone in k") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        auto graph = testsupport::random_multigraph(rng);
        SearchWorkspace workspace;
        std::uniform_int_distribution<EntityId> pick(0, static_cast<EntityId>(graph.entity_count() - 1));
        EntityId u = pick(rng), v = pick(rng);
        if (u == v) continue;
        auto small = yen_k_shortest(graph, u, v, 3, 3, workspace);
        auto large = yen_k_shortest(graph, u, v, 10, 3, workspace);
        REQUIRE(small.size() <= large.size());
        CHECK(std::equal(small.begin(), small.end(), large.begin()));
    }
}

TEST_CASE("every returned path satisfies the path invariants") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 25; ++trial) {
        auto graph = testsupport::random_multigraph(rng);
        SearchWorkspace workspace;
        std::uniform_int_distribution<EntityId> pick(0, static_cast<EntityId>(graph.entity_count() - 1));
        EntityId u = pick(rng), v = pick(rng);
        if (u == v) continue;
        for (const Path& path : yen_k_shortest(graph, u, v, 10, 3, workspace)) {
            check_path_invariants(path, 3);
        }
    }
}

TEST_CASE("diversity filter keeps the first path per relation sequence") {
    auto p = [](std::vector<RelationId> rels) {
        Path path;
        path.relations = std::move(rels);
        for (std::size_t i = 0; i <= path.relations.size(); ++i) {
            path.nodes.push_back(static_cast<EntityId>(100 + i));
        }
        return path;
    };
    std::vector<Path> input = {p({0}), p({0, 1}), p({0}), p({0, 1}), p({2})};
    auto output = diversity_filter(input);
    REQUIRE(output.size() == 3);
    CHECK(output[0] == input[0]);
    CHECK(output[1] == input[1]);
    CHECK(output[2] == input[4]);

    CHECK(diversity_filter({}).empty());

    // two same-relation-sequence paths collapse to the first
    std::vector<Path> dup = {make_path({0, 1, 2}, {0, 1}), make_path({0, 3, 2}, {0, 1})};
    auto filtered = diversity_filter(dup);
    REQUIRE(filtered.size() == 1);
    CHECK(filtered[0] == dup[0]);
}

TEST_CASE("diversity filter matches the first-occurrence oracle on random lists") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        auto paths = testsupport::random_path_list(rng);
        auto expected = testsupport::first_occurrence_filter_oracle(paths);
        auto actual = diversity_filter(paths);
        REQUIRE(actual == expected);

        // idempotence
        CHECK(diversity_filter(actual) == actual);

        // subsequence of the input
        auto it = paths.begin();
        for (const Path& kept : actual) {
            it = std::find(it, paths.end(), kept);
            REQUIRE(it != paths.end());
            ++it;
        }

        // no duplicate relation sequences remain
        std::set<std::vector<RelationId>> keys;
        for (const Path& kept : actual) CHECK(keys.insert(kept.relations).second);
    }
}

TEST_CASE("neighbor fallback: empty, capped and filtered") {
    auto none = letter_graph(2, {"r"}, {});
    CHECK(neighbor_fallback(none, 0, 5).empty());

    // seven edges over seven distinct relations, cap five
    std::vector<std::string> relations;
    std::vector<Triplet> triplets;
    for (int i = 0; i < 7; ++i) {
        relations.push_back("r" + std::to_string(i));
        triplets.push_back({0, static_cast<RelationId>(i), static_cast<EntityId>(1 + i)});
    }
    auto seven = letter_graph(8, relations, triplets);
    auto capped = neighbor_fallback(seven, 0, 5);
    REQUIRE(capped.size() == 5);
    for (const Path& path : capped) CHECK(path.hops() == 1);

    // relations (a,a,b) collapse to two paths
    auto dup = letter_graph(4, {"ra", "rb"}, {{0, 0, 1}, {0, 0, 2}, {0, 1, 3}});
    auto filtered = neighbor_fallback(dup, 0, 5);
    REQUIRE(filtered.size() == 2);
    CHECK(filtered[0].relations == std::vector<RelationId>{0});
    CHECK(filtered[1].relations == std::vector<RelationId>{1});
}

TEST_CASE("neighbor fallback equals filtering the full edge list then capping") {
    std::mt19937 rng(555);
    for (int trial = 0; trial < 30; ++trial) {
        auto graph = testsupport::random_multigraph(rng);
        for (EntityId anchor = 0; anchor < graph.entity_count(); ++anchor) {
            std::vector<Path> all;
            for (const Edge& e : graph.outgoing(anchor)) {
                if (e.node == anchor) continue;
                all.push_back(Path{{anchor, e.node}, {e.relation}});
            }
            for (int cap : {1, 3, 10}) {
                auto expected = diversity_filter(all);
                if (static_cast<int>(expected.size()) > cap) expected.resize(cap);
                CHECK(neighbor_fallback(graph, anchor, cap) == expected);
            }
        }
    }
}

TEST_CASE("retrieve: both endpoints resolved walks the graph") {
    auto fixture = testsupport::load_fixture();
    RetrievalConfig config;
    auto result = retrieve(fixture.graph, fixture.queries[1], config); // Quetiapine / Bipolar disorder
    CHECK(result.mode == QueryMode::BothResolved);
    REQUIRE_FALSE(result.paths.empty());

    auto binds = *fixture.graph.lookup_relation("binds");
    auto associates = *fixture.graph.lookup_relation("associates");
    auto htr1a = *fixture.graph.lookup_entity("HTR1A");
    bool found = false;
    for (const Path& path : result.paths) {
        if (path.relations == std::vector<RelationId>{binds, associates} && path.nodes[1] == htr1a) {
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("retrieve: single resolved endpoint returns anchored one-hop paths") {
    auto fixture = testsupport::load_fixture();
    RetrievalConfig config;
    auto result = retrieve(fixture.graph, fixture.queries[2], config); // Mipomersen / Oxymetholone
    CHECK(result.mode == QueryMode::OnlyU);
    REQUIRE_FALSE(result.paths.empty());
    auto anchor = *fixture.graph.lookup_entity("Mipomersen");
    for (const Path& path : result.paths) {
        CHECK(path.hops() == 1);
        CHECK(path.nodes[0] == anchor);
    }
    // both outgoing label edges share a relation sequence; the filter keeps one
    CHECK(result.paths.size() == 1);
    CHECK(result.paths[0].nodes[1] == *fixture.graph.lookup_entity("Diclofenac"));
}

TEST_CASE("retrieve: unresolved queries return nothing") {
    auto fixture = testsupport::load_fixture();
    RetrievalConfig config;
    auto result = retrieve(fixture.graph, fixture.queries[3], config); // both unknown
    CHECK(result.mode == QueryMode::Neither);
    CHECK(result.paths.empty());
}

TEST_CASE("retrieve caps results at k") {
    auto fixture = testsupport::load_fixture();
    RetrievalConfig config;
    config.k = 1;
    auto result = retrieve(fixture.graph, fixture.queries[0], config);
    CHECK(result.paths.size() <= 1);
}

TEST_CASE("no length-1 path uses a label relation after leakage removal") {
    auto fixture = testsupport::load_fixture();
    RetrievalConfig config;
    for (const auto& query : fixture.queries) {
        auto result = retrieve(fixture.graph, query, config);
        if (result.mode != QueryMode::BothResolved) continue;
        for (const Path& path : result.paths) {
            if (path.hops() != 1) continue;
            auto forward_id = forward_relation_id(fixture.graph, path.relations[0]);
            CHECK(std::find(fixture.config.label_relation_ids.begin(),
                            fixture.config.label_relation_ids.end(),
                            forward_id) == fixture.config.label_relation_ids.end());
        }
    }
}

TEST_CASE("baseline: unfiltered retrieval keeps redundant relation sequences") {
    // diamond with one relation: both 2-hop paths share the relation sequence
    auto graph = letter_graph(4, {"r"}, {{0, 0, 1}, {1, 0, 2}, {0, 0, 3}, {3, 0, 2}});
    RetrievalConfig config;
    auto unfiltered = baseline_shortest_unfiltered(graph, 0, 2, config);
    CHECK(unfiltered.size() == 2);
    CHECK(diversity_filter(unfiltered).size() == 1);

    config.k = 1;
    auto single = baseline_shortest_unfiltered(graph, 0, 2, config);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == *shortest_path(graph, 0, 2, 3));

    CHECK(baseline_shortest_unfiltered(graph, 3, 1, config).empty()); // disconnected pair
}

TEST_CASE("baseline: local neighborhood takes capped edges per endpoint") {
    std::vector<std::string> relations;
    std::vector<Triplet> triplets;
    for (int i = 0; i < 6; ++i) relations.push_back("r" + std::to_string(i));
    // u = 0 and v = 1 each get six outgoing edges
    for (int i = 0; i < 6; ++i) {
        triplets.push_back({0, static_cast<RelationId>(i), static_cast<EntityId>(2 + i)});
        triplets.push_back({1, static_cast<RelationId>(i), static_cast<EntityId>(2 + i)});
    }
    auto graph = letter_graph(8, relations, triplets);
    RetrievalConfig config;

    auto both = baseline_local_neighborhood(graph, EntityId{0}, EntityId{1}, config);
    CHECK(both.size() == 10); // five per entity
    for (std::size_t i = 0; i < 5; ++i) CHECK(both[i].nodes[0] == 0);
    for (std::size_t i = 5; i < 10; ++i) CHECK(both[i].nodes[0] == 1);

    auto only_u = baseline_local_neighborhood(graph, EntityId{0}, std::nullopt, config);
    CHECK(only_u.size() == 5);

    auto sparse = letter_graph(4, {"r"}, {{0, 0, 1}, {0, 0, 2}});
    auto two = baseline_local_neighborhood(sparse, EntityId{0}, std::nullopt, config);
    CHECK(two.size() == 2);

    CHECK(baseline_local_neighborhood(graph, std::nullopt, std::nullopt, config).empty());
}

TEST_CASE("retrieve honors the strategy switch") {
    auto graph = letter_graph(4, {"r"}, {{0, 0, 1}, {1, 0, 2}, {0, 0, 3}, {3, 0, 2}});
    QueryPair query;
    query.u_name = "a";
    query.v_name = "c";

    RetrievalConfig diverse;
    auto filtered = retrieve(graph, query, diverse);
    CHECK(filtered.paths.size() == 1);

    RetrievalConfig unfiltered;
    unfiltered.strategy = Strategy::shortest_unfiltered;
    CHECK(retrieve(graph, query, unfiltered).paths.size() == 2);

    RetrievalConfig no_filter_flag;
    no_filter_flag.diversity_filter_enabled = false;
    CHECK(retrieve(graph, query, no_filter_flag).paths.size() == 2);

    RetrievalConfig neighborhood;
    neighborhood.strategy = Strategy::local_neighborhood;
    auto local = retrieve(graph, query, neighborhood);
    for (const Path& path : local.paths) CHECK(path.hops() == 1);
}

TEST_CASE("overfetch mines extra raw paths before filtering") {
    // k distinct-relation 2-hop routes plus many same-relation ones
    std::vector<std::string> relations = {"r0", "r1", "r2"};
    std::vector<Triplet> triplets;
    // three midpoints under r0, one each under r1, r2
    triplets.push_back({0, 0, 2});
    triplets.push_back({2, 0, 1});
    triplets.push_back({0, 0, 3});
    triplets.push_back({3, 0, 1});
    triplets.push_back({0, 1, 4});
    triplets.push_back({4, 0, 1});
    triplets.push_back({0, 2, 5});
    triplets.push_back({5, 0, 1});
    auto graph = letter_graph(6, relations, triplets);

    QueryPair query;
    query.u_name = "a";
    query.v_name = "b";

    RetrievalConfig config;
    config.k = 2;
    auto plain = retrieve(graph, query, config);

    config.overfetch = 3;
    auto overfetched = retrieve(graph, query, config);
    CHECK(overfetched.paths.size() >= plain.paths.size());
    CHECK(overfetched.paths.size() == 2);
    // with overfetch the second slot holds a relationally distinct route
    CHECK(overfetched.paths[1].relations != overfetched.paths[0].relations);
}

TEST_CASE("batch: empty input, order stability, worker equivalence") {
    auto fixture = testsupport::load_fixture();
    RetrievalConfig config;

    auto empty = retrieve_batch(fixture.graph, {}, config, 4);
    CHECK(empty.results.empty());

    auto serial = retrieve_batch_serial(fixture.graph, fixture.queries, config);
    REQUIRE(serial.results.size() == fixture.queries.size());
    for (std::size_t i = 0; i < serial.results.size(); ++i) {
        CHECK(serial.results[i].query.u_name == fixture.queries[i].u_name);
    }

    auto parallel = retrieve_batch(fixture.graph, fixture.queries, config, 8);
    CHECK(same_paths(serial.results, parallel.results));

    auto one_worker = retrieve_batch(fixture.graph, fixture.queries, config, 1);
    CHECK(same_paths(serial.results, one_worker.results));
}

TEST_CASE("batch results are identical across worker counts on random graphs") {
    std::mt19937 rng(31337);
    testsupport::RandomGraphSpec spec;
    spec.min_nodes = 8;
    spec.max_nodes = 12;
    auto graph = testsupport::random_multigraph(rng, spec);

    std::vector<QueryPair> queries;
    for (EntityId u = 0; u < graph.entity_count(); ++u) {
        for (EntityId v = 0; v < graph.entity_count(); ++v) {
            if (u == v) continue;
            QueryPair q;
            q.u_name = graph.entity(u).name;
            q.v_name = graph.entity(v).name;
            queries.push_back(std::move(q));
        }
    }
    RetrievalConfig config;
    auto serial = retrieve_batch_serial(graph, queries, config);
    for (int workers : {2, 4, 8}) {
        auto parallel = retrieve_batch(graph, queries, config, workers);
        REQUIRE(same_paths(serial.results, parallel.results));
    }
}

TEST_CASE("config validation rejects out-of-range values") {
    RetrievalConfig config;
    config.k = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = {};
    config.max_hops = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = {};
    config.overfetch = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

} // TEST_SUITE
