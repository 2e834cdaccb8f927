#pragma once
// Immutable multi-relational directed multigraph with dense integer ids and
// CSR adjacency. All strings are resolved to ids at the ingestion boundary;
// traversal never touches text.

#include "kpaths/errors.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kpaths {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

inline constexpr RelationId kNoRelation = static_cast<RelationId>(-1);

struct Entity {
    EntityId id = 0;
    std::string name;
    std::string kind; // e.g. "Compound", "Gene", "Disease", "Side Effect"
};

struct RelationSchema {
    RelationId id = 0;
    std::string name;          // dictionary key, e.g. "downregulates"
    std::string forward_label; // active voice, e.g. "downregulates"
    std::string inverse_label; // passive voice, e.g. "is downregulated by"
    bool is_inverse = false;
    std::optional<RelationId> inverse_of;
};

struct Triplet {
    EntityId head = 0;
    RelationId relation = 0;
    EntityId tail = 0;

    friend auto operator<=>(const Triplet&, const Triplet&) = default;
};

struct TripletHash {
    std::size_t operator()(const Triplet& t) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t v : {std::uint64_t(t.head), std::uint64_t(t.relation), std::uint64_t(t.tail)}) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

// One adjacency entry. Outgoing lists hold (relation, tail); incoming lists
// hold (relation, head) in the `node` field.
struct Edge {
    RelationId relation = 0;
    EntityId node = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Trim ASCII whitespace and case-fold A-Z. Lookup and duplicate detection
// operate on this normalized form; stored names keep their original casing.
std::string normalize_name(std::string_view name);

class KnowledgeGraph;

// Single-writer builder. Ids are assigned densely in registration order; the
// ingestion layer registers dictionary entries in lexicographic order of the
// normalized name, so rebuilt graphs are canonical.
class GraphBuilder {
public:
    GraphBuilder() = default;

    // Seed a builder with another graph's entity and relation tables
    // (triplets are not copied).
    static GraphBuilder like(const KnowledgeGraph& graph);

    EntityId add_entity(std::string name, std::string kind);
    RelationId add_relation(std::string name, std::string forward_label, std::string inverse_label);
    RelationId add_schema(RelationSchema schema); // id field is overwritten

    // Set semantics: duplicate insertion is a no-op.
    void add_triplet(const Triplet& triplet);
    bool has_triplet(const Triplet& triplet) const { return triplets_.contains(triplet); }

    std::optional<EntityId> find_entity(std::string_view name) const;
    std::optional<RelationId> find_relation(std::string_view name) const;

    std::size_t entity_count() const { return entities_.size(); }
    std::size_t relation_count() const { return relations_.size(); }
    std::size_t triplet_count() const { return triplets_.size(); }

    void mark_augmented(std::size_t forward_relation_count);

    KnowledgeGraph build() &&;

private:
    friend class KnowledgeGraph;

    std::vector<Entity> entities_;
    std::vector<RelationSchema> relations_;
    std::unordered_map<std::string, EntityId> entity_index_;     // normalized name -> id
    std::unordered_map<std::string, RelationId> relation_index_; // normalized name -> id
    std::unordered_set<Triplet, TripletHash> triplets_;
    bool inverses_added_ = false;
    std::size_t forward_relation_count_ = 0;
};

class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    std::size_t entity_count() const { return entities_.size(); }
    std::size_t relation_count() const { return relations_.size(); }
    std::size_t triplet_count() const { return triplet_count_; }

    // Number of forward relation schemas (equals relation_count() until
    // inverse augmentation runs, half of it afterwards).
    std::size_t forward_relation_count() const { return forward_relation_count_; }
    bool inverses_added() const { return inverses_added_; }

    const Entity& entity(EntityId id) const;
    const RelationSchema& relation(RelationId id) const;
    std::span<const Entity> entities() const { return entities_; }
    std::span<const RelationSchema> relations() const { return relations_; }

    // Outgoing edges of `node`, sorted by (tail id, relation id).
    std::span<const Edge> outgoing(EntityId node) const;

    // Incoming edges of `node` as (relation, head), sorted by (head id,
    // relation id). Derived index used for reverse traversal.
    std::span<const Edge> incoming(EntityId node) const;

    std::optional<EntityId> lookup_entity(std::string_view name) const;
    std::optional<RelationId> lookup_relation(std::string_view name) const;

    bool has_triplet(const Triplet& triplet) const;

    // Visits triplets in canonical order: head-major, then (tail, relation).
    template <typename Fn>
    void for_each_triplet(Fn&& fn) const {
        for (EntityId head = 0; head < entities_.size(); ++head) {
            for (const Edge& e : outgoing(head)) {
                fn(Triplet{head, e.relation, e.node});
            }
        }
    }

    std::vector<Triplet> triplets() const;

private:
    friend class GraphBuilder;

    std::vector<Entity> entities_;
    std::vector<RelationSchema> relations_;
    std::unordered_map<std::string, EntityId> entity_index_;
    std::unordered_map<std::string, RelationId> relation_index_;

    // CSR adjacency, one offsets array per direction.
    std::vector<std::uint64_t> out_offsets_;
    std::vector<Edge> out_edges_;
    std::vector<std::uint64_t> in_offsets_;
    std::vector<Edge> in_edges_;

    std::size_t triplet_count_ = 0;
    std::size_t forward_relation_count_ = 0;
    bool inverses_added_ = false;
};

} // namespace kpaths
