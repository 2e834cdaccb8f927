#include "kpaths/augment.hpp"

#include <algorithm>
#include <unordered_set>

namespace kpaths {

namespace {

std::uint64_t pair_key(EntityId a, EntityId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::unordered_set<std::uint64_t> pair_set(const AugmentationConfig& config) {
    std::unordered_set<std::uint64_t> keys;
    keys.reserve(config.leakage_pairs.size());
    for (auto [a, b] : config.leakage_pairs) keys.insert(pair_key(a, b));
    return keys;
}

std::unordered_set<RelationId> label_set(const KnowledgeGraph& graph, const AugmentationConfig& config) {
    std::unordered_set<RelationId> labels;
    for (RelationId id : config.label_relation_ids) {
        if (id >= graph.forward_relation_count()) {
            throw Error(ErrorCode::IdOutOfRange,
                        "label relation id " + std::to_string(id) + " is not a forward relation");
        }
        labels.insert(id);
    }
    return labels;
}

} // namespace

KnowledgeGraph merge(const std::vector<EdgeRecord>& base_edges, const std::vector<EdgeRecord>& train_edges,
                     std::vector<EntityRecord> entities, std::vector<RelationRecord> relations,
                     UnresolvedPolicy policy, IngestReport* report) {
    GraphBuilder builder;
    register_entities(builder, std::move(entities));
    register_relations(builder, std::move(relations));

    IngestReport local;
    IngestReport& out = report ? *report : local;
    bool reject = policy == UnresolvedPolicy::error;
    add_edges(builder, base_edges, out, reject);
    add_edges(builder, train_edges, out, reject);
    return std::move(builder).build();
}

KnowledgeGraph add_inverses(const KnowledgeGraph& graph) {
    if (graph.inverses_added()) {
        throw Error(ErrorCode::AlreadyAugmented, "inverse relations have already been added");
    }

    GraphBuilder builder;
    for (const Entity& e : graph.entities()) {
        builder.add_entity(std::string(e.name), std::string(e.kind));
    }

    const auto forward_count = static_cast<RelationId>(graph.relation_count());
    // Pairing is an involution: forward id r maps to r + forward_count and back.
    for (const RelationSchema& forward : graph.relations()) {
        RelationSchema copy = forward;
        copy.inverse_of = forward.id + forward_count;
        builder.add_schema(std::move(copy));
    }
    for (const RelationSchema& forward : graph.relations()) {
        RelationSchema inverse;
        inverse.name = forward.name + "_inverse";
        inverse.forward_label = forward.forward_label;
        inverse.inverse_label = forward.inverse_label;
        inverse.is_inverse = true;
        inverse.inverse_of = forward.id;
        builder.add_schema(std::move(inverse));
    }
    builder.mark_augmented(forward_count);

    graph.for_each_triplet([&](const Triplet& t) {
        builder.add_triplet(t);
        builder.add_triplet(Triplet{t.tail, t.relation + forward_count, t.head});
    });

    return std::move(builder).build();
}

KnowledgeGraph project_forward(const KnowledgeGraph& graph) {
    if (!graph.inverses_added()) return graph;

    GraphBuilder builder;
    for (const Entity& e : graph.entities()) {
        builder.add_entity(std::string(e.name), std::string(e.kind));
    }
    const auto forward_count = static_cast<RelationId>(graph.forward_relation_count());
    for (RelationId id = 0; id < forward_count; ++id) {
        RelationSchema copy = graph.relation(id);
        copy.inverse_of.reset();
        builder.add_schema(std::move(copy));
    }
    graph.for_each_triplet([&](const Triplet& t) {
        if (t.relation < forward_count) builder.add_triplet(t);
    });
    return std::move(builder).build();
}

RelationId inverse_relation_id(const KnowledgeGraph& graph, RelationId id) {
    const RelationSchema& schema = graph.relation(id);
    if (!schema.inverse_of) {
        throw Error(ErrorCode::IdOutOfRange,
                    "relation " + schema.name + " has no inverse partner (graph not augmented?)");
    }
    return *schema.inverse_of;
}

RelationId forward_relation_id(const KnowledgeGraph& graph, RelationId id) {
    const RelationSchema& schema = graph.relation(id);
    return schema.is_inverse ? *schema.inverse_of : schema.id;
}

LeakageResult remove_leakage(const KnowledgeGraph& graph, const AugmentationConfig& config) {
    auto pairs = pair_set(config);
    auto labels = label_set(graph, config);

    GraphBuilder builder = GraphBuilder::like(graph);
    std::vector<Triplet> removed;

    graph.for_each_triplet([&](const Triplet& t) {
        bool drop = false;
        if (pairs.contains(pair_key(t.head, t.tail))) {
            drop = config.strict || labels.contains(forward_relation_id(graph, t.relation));
        }
        if (drop) {
            removed.push_back(t);
        } else {
            builder.add_triplet(t);
        }
    });

    return LeakageResult{std::move(builder).build(), std::move(removed)};
}

std::size_t count_label_edges(const KnowledgeGraph& graph, const AugmentationConfig& config) {
    auto pairs = pair_set(config);
    auto labels = label_set(graph, config);

    std::size_t count = 0;
    graph.for_each_triplet([&](const Triplet& t) {
        if (pairs.contains(pair_key(t.head, t.tail)) &&
            labels.contains(forward_relation_id(graph, t.relation))) {
            ++count;
        }
    });
    return count;
}

} // namespace kpaths
