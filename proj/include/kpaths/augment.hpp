#pragma once
// Augmented-graph construction: merge the base network with observed training
// interactions, materialize inverse relations, and remove label-leakage edges
// between query pairs.

#include "kpaths/graph.hpp"
#include "kpaths/ingest.hpp"

#include <utility>
#include <vector>

namespace kpaths {

struct AugmentationConfig {
    // Forward relation ids that carry task labels (e.g. interaction severities).
    std::vector<RelationId> label_relation_ids;
    // Unordered entity pairs whose direct label edges must not survive.
    std::vector<std::pair<EntityId, EntityId>> leakage_pairs;
    // Strict mode removes every edge between a leakage pair, not just label
    // relations.
    bool strict = false;
};

enum class UnresolvedPolicy { error, skip_and_count };

// Union of the base edge set and the training interaction edges against a
// shared dictionary. Forward edges only; set semantics on triplets.
KnowledgeGraph merge(const std::vector<EdgeRecord>& base_edges,
                     const std::vector<EdgeRecord>& train_edges,
                     std::vector<EntityRecord> entities,
                     std::vector<RelationRecord> relations,
                     UnresolvedPolicy policy = UnresolvedPolicy::error,
                     IngestReport* report = nullptr);

// For every forward schema add an inverse schema with id offset by the
// forward-relation count; for every triplet (h, r, t) add (t, r^-1, h).
// Throws AlreadyAugmented when called on an augmented graph.
KnowledgeGraph add_inverses(const KnowledgeGraph& graph);

// Keep only forward triplets and forward schemas; exact inverse of
// add_inverses on a graph that has not been otherwise modified.
KnowledgeGraph project_forward(const KnowledgeGraph& graph);

RelationId inverse_relation_id(const KnowledgeGraph& graph, RelationId id);
// Maps an inverse relation id back onto its forward partner; identity for
// forward ids.
RelationId forward_relation_id(const KnowledgeGraph& graph, RelationId id);

struct LeakageResult {
    KnowledgeGraph graph;
    std::vector<Triplet> removed; // audit trail, canonical order
};

// Drop label-relation edges (both directions, inverses included) between each
// leakage pair. Requires inverse augmentation to have run. Everything else
// between the pair survives unless config.strict is set.
LeakageResult remove_leakage(const KnowledgeGraph& graph, const AugmentationConfig& config);

// Number of label-relation triplets still connecting any configured pair;
// zero after remove_leakage.
std::size_t count_label_edges(const KnowledgeGraph& graph, const AugmentationConfig& config);

struct AugmentationReport {
    std::size_t entity_count = 0;
    std::size_t forward_relation_count = 0;
    std::size_t relation_count = 0;
    std::size_t forward_triplet_count = 0;
    std::size_t triplet_count = 0;
    std::size_t removed_leakage_count = 0;
    std::size_t unresolved_edge_count = 0;
};

} // namespace kpaths
