#pragma once
// K shortest loopless paths between query entities. Hop count is the only
// edge weight; ties break on node-id sequences, then relation-id sequences,
// so identical inputs always produce identical paths. Batch retrieval fans
// out across OpenMP workers; a serial loop is kept as the reference kernel.

#include "kpaths/graph.hpp"
#include "kpaths/ingest.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace kpaths {

struct Path {
    std::vector<EntityId> nodes;       // length = hops + 1, all distinct
    std::vector<RelationId> relations; // length = hops

    std::size_t hops() const { return relations.size(); }
    Triplet edge_at(std::size_t i) const { return Triplet{nodes[i], relations[i], nodes[i + 1]}; }

    friend bool operator==(const Path&, const Path&) = default;
};

// Total order: hop count, then node sequence, then relation sequence.
struct PathOrder {
    bool operator()(const Path& a, const Path& b) const {
        if (a.hops() != b.hops()) return a.hops() < b.hops();
        if (a.nodes != b.nodes) return a.nodes < b.nodes;
        return a.relations < b.relations;
    }
};

enum class Strategy { kpaths, shortest_unfiltered, local_neighborhood };

struct RetrievalConfig {
    int k = 10;
    int max_hops = 3;
    Strategy strategy = Strategy::kpaths;
    int neighbor_cap = 5;               // local-neighborhood baseline only
    bool diversity_filter_enabled = true;
    int overfetch = 1;                  // mine overfetch*k raw paths before filtering

    void validate() const;
};

enum class QueryMode { BothResolved, OnlyU, OnlyV, Neither };

const char* query_mode_name(QueryMode mode);

struct RetrievalResult {
    QueryPair query;
    QueryMode mode = QueryMode::Neither;
    std::vector<Path> paths;
    std::chrono::microseconds elapsed{0};
};

// Reusable per-thread scratch for the reverse BFS and greedy reconstruction.
// Stamped arrays avoid O(V) clears between searches.
struct SearchWorkspace {
    void prepare(std::size_t entity_count);

    std::vector<std::uint32_t> dist_stamp_;
    std::vector<std::uint32_t> dist_;
    std::vector<std::uint32_t> blocked_stamp_;
    std::vector<EntityId> frontier_;
    std::vector<EntityId> next_frontier_;
    std::uint32_t version_ = 0;
};

// Minimum-hop loopless path from u to v avoiding the given edges/nodes, or
// nullopt if none exists within max_hops. Among equal-length paths the
// PathOrder minimum is returned.
std::optional<Path> shortest_path(const KnowledgeGraph& graph, EntityId u, EntityId v, int max_hops,
                                  std::span<const Triplet> excluded_edges = {},
                                  std::span<const EntityId> excluded_nodes = {});
std::optional<Path> shortest_path(const KnowledgeGraph& graph, EntityId u, EntityId v, int max_hops,
                                  std::span<const Triplet> excluded_edges,
                                  std::span<const EntityId> excluded_nodes, SearchWorkspace& workspace);

// Up to k loopless paths of at most max_hops hops, in PathOrder. Spur
// searches exclude specific (head, relation, tail) edges, not node pairs, so
// parallel-relation alternatives are enumerated.
std::vector<Path> yen_k_shortest(const KnowledgeGraph& graph, EntityId u, EntityId v, int k, int max_hops);
std::vector<Path> yen_k_shortest(const KnowledgeGraph& graph, EntityId u, EntityId v, int k, int max_hops,
                                 SearchWorkspace& workspace);

// First-occurrence deduplication keyed on the relation sequence. Output is a
// subsequence of the input.
std::vector<Path> diversity_filter(std::vector<Path> paths);

// Up to cap single-hop paths out of `anchor` (the augmented graph's inverse
// edges cover incoming context), deduplicated by relation before capping.
std::vector<Path> neighbor_fallback(const KnowledgeGraph& graph, EntityId anchor, int cap);

// Baselines. The first mirrors yen_k_shortest with no filter step; the second
// takes the first neighbor_cap outgoing edges per resolved endpoint, u's
// first, with no filtering.
std::vector<Path> baseline_shortest_unfiltered(const KnowledgeGraph& graph, EntityId u, EntityId v,
                                               const RetrievalConfig& config);
std::vector<Path> baseline_local_neighborhood(const KnowledgeGraph& graph, std::optional<EntityId> u,
                                              std::optional<EntityId> v, const RetrievalConfig& config);

// Full per-query pipeline: resolve endpoints, pick the strategy, filter,
// truncate to k, record timing. Unresolved endpoints select the fallback
// mode; they are data, never errors.
RetrievalResult retrieve(const KnowledgeGraph& graph, QueryPair query, const RetrievalConfig& config);
RetrievalResult retrieve(const KnowledgeGraph& graph, QueryPair query, const RetrievalConfig& config,
                         SearchWorkspace& workspace);

struct BatchResult {
    std::vector<RetrievalResult> results; // input order
    std::chrono::microseconds wall{0};
};

// Serial reference kernel.
BatchResult retrieve_batch_serial(const KnowledgeGraph& graph, const std::vector<QueryPair>& queries,
                                  const RetrievalConfig& config);

// OpenMP kernel; results match the serial kernel for any worker count.
// worker_count < 2 runs the serial path.
BatchResult retrieve_batch(const KnowledgeGraph& graph, const std::vector<QueryPair>& queries,
                           const RetrievalConfig& config, int worker_count);

} // namespace kpaths
