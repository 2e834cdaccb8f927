#include "kpaths/graph.hpp"

#include <algorithm>
#include <cctype>

namespace kpaths {

std::string normalize_name(std::string_view name) {
    std::size_t begin = 0;
    std::size_t end = name.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(name[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(name[end - 1]))) --end;

    std::string out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(name[i]))));
    }
    return out;
}

GraphBuilder GraphBuilder::like(const KnowledgeGraph& graph) {
    GraphBuilder builder;
    builder.entities_.assign(graph.entities().begin(), graph.entities().end());
    builder.relations_.assign(graph.relations().begin(), graph.relations().end());
    builder.entity_index_ = graph.entity_index_;
    builder.relation_index_ = graph.relation_index_;
    builder.inverses_added_ = graph.inverses_added();
    builder.forward_relation_count_ = graph.forward_relation_count();
    return builder;
}

EntityId GraphBuilder::add_entity(std::string name, std::string kind) {
    std::string key = normalize_name(name);
    if (key.empty()) {
        throw Error(ErrorCode::ParseError, "entity name is empty");
    }
    if (kind.empty()) {
        throw Error(ErrorCode::ParseError, "entity '" + name + "' has an empty kind");
    }
    auto [it, inserted] = entity_index_.try_emplace(std::move(key), static_cast<EntityId>(entities_.size()));
    if (!inserted) {
        throw Error(ErrorCode::DuplicateEntity,
                    "entity name collides after normalization: '" + name + "' vs '" +
                        entities_[it->second].name + "'");
    }
    EntityId id = it->second;
    entities_.push_back(Entity{id, std::move(name), std::move(kind)});
    return id;
}

RelationId GraphBuilder::add_relation(std::string name, std::string forward_label, std::string inverse_label) {
    RelationSchema schema;
    schema.name = std::move(name);
    schema.forward_label = std::move(forward_label);
    schema.inverse_label = std::move(inverse_label);
    return add_schema(std::move(schema));
}

RelationId GraphBuilder::add_schema(RelationSchema schema) {
    std::string key = normalize_name(schema.name);
    if (key.empty()) {
        throw Error(ErrorCode::ParseError, "relation name is empty");
    }
    auto [it, inserted] = relation_index_.try_emplace(std::move(key), static_cast<RelationId>(relations_.size()));
    if (!inserted) {
        throw Error(ErrorCode::DuplicateRelation,
                    "relation name collides after normalization: '" + schema.name + "'");
    }
    schema.id = it->second;
    relations_.push_back(std::move(schema));
    if (!inverses_added_) {
        forward_relation_count_ = relations_.size();
    }
    return relations_.back().id;
}

void GraphBuilder::add_triplet(const Triplet& triplet) {
    if (triplet.head >= entities_.size() || triplet.tail >= entities_.size()) {
        throw Error(ErrorCode::IdOutOfRange,
                    "triplet references entity id out of range (" + std::to_string(triplet.head) + ", " +
                        std::to_string(triplet.tail) + ") with " + std::to_string(entities_.size()) +
                        " entities");
    }
    if (triplet.relation >= relations_.size()) {
        throw Error(ErrorCode::IdOutOfRange,
                    "triplet references relation id " + std::to_string(triplet.relation) + " with " +
                        std::to_string(relations_.size()) + " relations");
    }
    triplets_.insert(triplet);
}

std::optional<EntityId> GraphBuilder::find_entity(std::string_view name) const {
    auto it = entity_index_.find(normalize_name(name));
    if (it == entity_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<RelationId> GraphBuilder::find_relation(std::string_view name) const {
    auto it = relation_index_.find(normalize_name(name));
    if (it == relation_index_.end()) return std::nullopt;
    return it->second;
}

void GraphBuilder::mark_augmented(std::size_t forward_relation_count) {
    inverses_added_ = true;
    forward_relation_count_ = forward_relation_count;
}

KnowledgeGraph GraphBuilder::build() && {
    KnowledgeGraph graph;
    graph.entities_ = std::move(entities_);
    graph.relations_ = std::move(relations_);
    graph.entity_index_ = std::move(entity_index_);
    graph.relation_index_ = std::move(relation_index_);
    graph.inverses_added_ = inverses_added_;
    graph.forward_relation_count_ =
        inverses_added_ ? forward_relation_count_ : graph.relations_.size();
    graph.triplet_count_ = triplets_.size();

    const std::size_t n = graph.entities_.size();
    std::vector<Triplet> sorted(triplets_.begin(), triplets_.end());
    triplets_.clear();

    // Adjacency order is (tail, relation) within each head; rebuilding from
    // any insertion order yields identical lists.
    std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        if (a.head != b.head) return a.head < b.head;
        if (a.tail != b.tail) return a.tail < b.tail;
        return a.relation < b.relation;
    });

    graph.out_offsets_.assign(n + 1, 0);
    for (const Triplet& t : sorted) graph.out_offsets_[t.head + 1]++;
    for (std::size_t i = 1; i <= n; ++i) graph.out_offsets_[i] += graph.out_offsets_[i - 1];
    graph.out_edges_.reserve(sorted.size());
    for (const Triplet& t : sorted) graph.out_edges_.push_back(Edge{t.relation, t.tail});

    std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        if (a.tail != b.tail) return a.tail < b.tail;
        if (a.head != b.head) return a.head < b.head;
        return a.relation < b.relation;
    });

    graph.in_offsets_.assign(n + 1, 0);
    for (const Triplet& t : sorted) graph.in_offsets_[t.tail + 1]++;
    for (std::size_t i = 1; i <= n; ++i) graph.in_offsets_[i] += graph.in_offsets_[i - 1];
    graph.in_edges_.reserve(sorted.size());
    for (const Triplet& t : sorted) graph.in_edges_.push_back(Edge{t.relation, t.head});

    return graph;
}

const Entity& KnowledgeGraph::entity(EntityId id) const {
    if (id >= entities_.size()) {
        throw Error(ErrorCode::IdOutOfRange,
                    "entity id " + std::to_string(id) + " out of range (" +
                        std::to_string(entities_.size()) + " entities)");
    }
    return entities_[id];
}

const RelationSchema& KnowledgeGraph::relation(RelationId id) const {
    if (id >= relations_.size()) {
        throw Error(ErrorCode::IdOutOfRange,
                    "relation id " + std::to_string(id) + " out of range (" +
                        std::to_string(relations_.size()) + " relations)");
    }
    return relations_[id];
}

std::span<const Edge> KnowledgeGraph::outgoing(EntityId node) const {
    if (node >= entities_.size()) {
        throw Error(ErrorCode::IdOutOfRange,
                    "entity id " + std::to_string(node) + " out of range (" +
                        std::to_string(entities_.size()) + " entities)");
    }
    return {out_edges_.data() + out_offsets_[node],
            out_edges_.data() + out_offsets_[node + 1]};
}

std::span<const Edge> KnowledgeGraph::incoming(EntityId node) const {
    if (node >= entities_.size()) {
        throw Error(ErrorCode::IdOutOfRange,
                    "entity id " + std::to_string(node) + " out of range (" +
                        std::to_string(entities_.size()) + " entities)");
    }
    return {in_edges_.data() + in_offsets_[node],
            in_edges_.data() + in_offsets_[node + 1]};
}

std::optional<EntityId> KnowledgeGraph::lookup_entity(std::string_view name) const {
    auto it = entity_index_.find(normalize_name(name));
    if (it == entity_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<RelationId> KnowledgeGraph::lookup_relation(std::string_view name) const {
    auto it = relation_index_.find(normalize_name(name));
    if (it == relation_index_.end()) return std::nullopt;
    return it->second;
}

bool KnowledgeGraph::has_triplet(const Triplet& triplet) const {
    if (triplet.head >= entities_.size()) return false;
    auto edges = outgoing(triplet.head);
    Edge probe{triplet.relation, triplet.tail};
    auto it = std::lower_bound(edges.begin(), edges.end(), probe, [](const Edge& a, const Edge& b) {
        if (a.node != b.node) return a.node < b.node;
        return a.relation < b.relation;
    });
    return it != edges.end() && *it == probe;
}

std::vector<Triplet> KnowledgeGraph::triplets() const {
    std::vector<Triplet> out;
    out.reserve(triplet_count_);
    for_each_triplet([&](const Triplet& t) { out.push_back(t); });
    return out;
}

} // namespace kpaths
