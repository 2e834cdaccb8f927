#pragma once
// Loads the checked-in TSV fixtures through the real ingestion pipeline and
// produces the augmented, leakage-cleaned graph the retrieval tests run on.

#include "kpaths/augment.hpp"
#include "kpaths/graph.hpp"
#include "kpaths/ingest.hpp"

#include <filesystem>
#include <string>
#include <vector>

#ifndef KPATHS_FIXTURE_DIR
#error "KPATHS_FIXTURE_DIR must be defined by the build"
#endif

namespace testsupport {

inline std::filesystem::path fixture_dir() { return KPATHS_FIXTURE_DIR; }

struct Fixture {
    kpaths::KnowledgeGraph graph; // augmented, leakage removed
    kpaths::KnowledgeGraph forward;
    std::vector<kpaths::QueryPair> queries;
    kpaths::AugmentationConfig config;
    std::vector<kpaths::Triplet> removed;
};

inline Fixture load_fixture() {
    const auto dir = fixture_dir();
    auto entities = kpaths::load_entity_dictionary_file(dir / "entities.tsv");
    auto relations = kpaths::load_relation_dictionary_file(dir / "relations.tsv");
    auto base = kpaths::load_edges_file(dir / "edges.tsv", kpaths::EdgeFormat::tsv);
    auto train = kpaths::load_edges_file(dir / "train_edges.tsv", kpaths::EdgeFormat::tsv);

    Fixture fixture;
    fixture.forward = kpaths::merge(base, train, std::move(entities), std::move(relations));
    auto augmented = kpaths::add_inverses(fixture.forward);

    for (const char* name : {"Major", "Moderate", "Minor"}) {
        if (auto id = augmented.lookup_relation(name)) {
            fixture.config.label_relation_ids.push_back(*id);
        }
    }
    fixture.queries = kpaths::resolve_queries(augmented, kpaths::load_queries_file(dir / "queries.tsv"));
    for (const auto& query : fixture.queries) {
        if (query.u_id && query.v_id) {
            fixture.config.leakage_pairs.emplace_back(*query.u_id, *query.v_id);
        }
    }

    auto leakage = kpaths::remove_leakage(augmented, fixture.config);
    fixture.graph = std::move(leakage.graph);
    fixture.removed = std::move(leakage.removed);
    return fixture;
}

} // namespace testsupport
