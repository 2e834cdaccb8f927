#include "kpaths/retrieval.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kpaths {

void RetrievalConfig::validate() const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (max_hops < 1) throw std::invalid_argument("max_hops must be >= 1");
    if (neighbor_cap < 1) throw std::invalid_argument("neighbor_cap must be >= 1");
    if (overfetch < 1) throw std::invalid_argument("overfetch must be >= 1");
}

const char* query_mode_name(QueryMode mode) {
    switch (mode) {
        case QueryMode::BothResolved: return "both_resolved";
        case QueryMode::OnlyU: return "only_u";
        case QueryMode::OnlyV: return "only_v";
        case QueryMode::Neither: return "neither";
    }
    return "neither";
}

void SearchWorkspace::prepare(std::size_t entity_count) {
    if (dist_stamp_.size() < entity_count) {
        dist_stamp_.assign(entity_count, 0);
        dist_.assign(entity_count, 0);
        blocked_stamp_.assign(entity_count, 0);
        version_ = 0;
    }
}

namespace {

// One bounded shortest-path search: reverse BFS from the target to get exact
// distances, then a greedy forward walk that always takes the smallest
// (tail, relation) edge staying on a shortest path. The walk's distance to
// the target strictly decreases, so the result is loopless by construction
// and is the PathOrder minimum among minimum-hop paths.
class PathFinder {
public:
    PathFinder(const KnowledgeGraph& graph, SearchWorkspace& ws) : graph_(graph), ws_(ws) {
        ws_.prepare(graph.entity_count());
    }

    std::optional<Path> find(EntityId src, EntityId dst, int max_hops,
                             std::span<const Triplet> excluded_edges,
                             std::span<const EntityId> excluded_nodes) {
        if (src == dst || max_hops < 1) return std::nullopt;
        excluded_edges_ = excluded_edges;

        next_version();
        for (EntityId node : excluded_nodes) {
            if (node < ws_.blocked_stamp_.size()) ws_.blocked_stamp_[node] = ws_.version_;
        }
        if (blocked(src) || blocked(dst)) return std::nullopt;

        if (!reverse_bfs(src, dst, max_hops)) return std::nullopt;
        return reconstruct(src);
    }

private:
    void next_version() {
        if (++ws_.version_ == 0) {
            std::fill(ws_.dist_stamp_.begin(), ws_.dist_stamp_.end(), 0u);
            std::fill(ws_.blocked_stamp_.begin(), ws_.blocked_stamp_.end(), 0u);
            ws_.version_ = 1;
        }
    }

    bool blocked(EntityId node) const { return ws_.blocked_stamp_[node] == ws_.version_; }
    bool has_dist(EntityId node) const { return ws_.dist_stamp_[node] == ws_.version_; }

    void set_dist(EntityId node, std::uint32_t d) {
        ws_.dist_stamp_[node] = ws_.version_;
        ws_.dist_[node] = d;
    }

    bool edge_excluded(const Triplet& t) const {
        return std::binary_search(excluded_edges_.begin(), excluded_edges_.end(), t);
    }

    // Levels are expanded one at a time; once the level containing src is
    // complete, every distance the reconstruction can ask for is final.
    bool reverse_bfs(EntityId src, EntityId dst, int max_hops) {
        auto& frontier = ws_.frontier_;
        auto& next = ws_.next_frontier_;
        frontier.clear();
        next.clear();

        set_dist(dst, 0);
        frontier.push_back(dst);

        std::uint32_t depth = 0;
        while (!frontier.empty() && depth < static_cast<std::uint32_t>(max_hops) && !has_dist(src)) {
            next.clear();
            for (EntityId y : frontier) {
                for (const Edge& e : graph_.incoming(y)) {
                    EntityId head = e.node;
                    if (has_dist(head) || blocked(head)) continue;
                    if (edge_excluded(Triplet{head, e.relation, y})) continue;
                    set_dist(head, depth + 1);
                    next.push_back(head);
                }
            }
            std::swap(frontier, next);
            ++depth;
        }
        return has_dist(src);
    }

    Path reconstruct(EntityId src) {
        Path path;
        const std::uint32_t len = ws_.dist_[src];
        path.nodes.reserve(len + 1);
        path.relations.reserve(len);
        path.nodes.push_back(src);

        EntityId cur = src;
        for (std::uint32_t step = 0; step < len; ++step) {
            const std::uint32_t target = ws_.dist_[cur] - 1;
            bool advanced = false;
            for (const Edge& e : graph_.outgoing(cur)) { // sorted (tail, relation)
                EntityId w = e.node;
                if (blocked(w) || !has_dist(w) || ws_.dist_[w] != target) continue;
                if (edge_excluded(Triplet{cur, e.relation, w})) continue;
                path.relations.push_back(e.relation);
                path.nodes.push_back(w);
                cur = w;
                advanced = true;
                break;
            }
            if (!advanced) {
                throw std::logic_error("shortest-path reconstruction lost the frontier");
            }
        }
        return path;
    }

    const KnowledgeGraph& graph_;
    SearchWorkspace& ws_;
    std::span<const Triplet> excluded_edges_;
};

bool shares_edge_prefix(const Path& p, const Path& reference, std::size_t edges) {
    if (p.hops() < edges || reference.hops() < edges) return false;
    return std::equal(p.nodes.begin(), p.nodes.begin() + edges + 1, reference.nodes.begin()) &&
           std::equal(p.relations.begin(), p.relations.begin() + edges, reference.relations.begin());
}

std::vector<Path> single_hop_paths(const KnowledgeGraph& graph, EntityId anchor, int limit) {
    std::vector<Path> paths;
    for (const Edge& e : graph.outgoing(anchor)) {
        if (e.node == anchor) continue; // self-loops cannot form a loopless path
        if (static_cast<int>(paths.size()) >= limit) break;
        paths.push_back(Path{{anchor, e.node}, {e.relation}});
    }
    return paths;
}

void truncate(std::vector<Path>& paths, int limit) {
    if (limit >= 0 && paths.size() > static_cast<std::size_t>(limit)) {
        paths.resize(static_cast<std::size_t>(limit));
    }
}

} // namespace

std::optional<Path> shortest_path(const KnowledgeGraph& graph, EntityId u, EntityId v, int max_hops,
                                  std::span<const Triplet> excluded_edges,
                                  std::span<const EntityId> excluded_nodes, SearchWorkspace& workspace) {
    if (u >= graph.entity_count() || v >= graph.entity_count()) {
        throw Error(ErrorCode::IdOutOfRange, "query endpoint id out of range");
    }
    std::vector<Triplet> sorted(excluded_edges.begin(), excluded_edges.end());
    std::sort(sorted.begin(), sorted.end());
    PathFinder finder(graph, workspace);
    return finder.find(u, v, max_hops, sorted, excluded_nodes);
}

std::optional<Path> shortest_path(const KnowledgeGraph& graph, EntityId u, EntityId v, int max_hops,
                                  std::span<const Triplet> excluded_edges,
                                  std::span<const EntityId> excluded_nodes) {
    SearchWorkspace workspace;
    return shortest_path(graph, u, v, max_hops, excluded_edges, excluded_nodes, workspace);
}

std::vector<Path> yen_k_shortest(const KnowledgeGraph& graph, EntityId u, EntityId v, int k, int max_hops,
                                 SearchWorkspace& workspace) {
    std::vector<Path> accepted;
    if (k < 1 || u == v) return accepted;
    if (u >= graph.entity_count() || v >= graph.entity_count()) {
        throw Error(ErrorCode::IdOutOfRange, "query endpoint id out of range");
    }

    PathFinder finder(graph, workspace);
    auto first = finder.find(u, v, max_hops, {}, {});
    if (!first) return accepted;
    accepted.push_back(std::move(*first));

    // Candidate pool; the set both deduplicates spur results and hands out
    // the PathOrder minimum.
    std::set<Path, PathOrder> candidates;
    std::vector<Triplet> excluded_edges;
    std::vector<EntityId> root_nodes;

    while (accepted.size() < static_cast<std::size_t>(k)) {
        const Path& prev = accepted.back();
        for (std::size_t spur = 0; spur < prev.hops(); ++spur) {
            const EntityId spur_node = prev.nodes[spur];

            // Remove the continuations every accepted path takes out of this
            // root, so the spur search is forced onto a new alternative.
            excluded_edges.clear();
            for (const Path& p : accepted) {
                if (shares_edge_prefix(p, prev, spur)) {
                    excluded_edges.push_back(p.edge_at(spur));
                }
            }
            std::sort(excluded_edges.begin(), excluded_edges.end());
            excluded_edges.erase(std::unique(excluded_edges.begin(), excluded_edges.end()),
                                 excluded_edges.end());

            // Root nodes (spur node excluded) stay off-limits to keep the
            // concatenation loopless.
            root_nodes.assign(prev.nodes.begin(), prev.nodes.begin() + spur);

            auto spur_path =
                finder.find(spur_node, v, max_hops - static_cast<int>(spur), excluded_edges, root_nodes);
            if (!spur_path) continue;

            Path candidate;
            candidate.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + spur);
            candidate.nodes.insert(candidate.nodes.end(), spur_path->nodes.begin(), spur_path->nodes.end());
            candidate.relations.assign(prev.relations.begin(), prev.relations.begin() + spur);
            candidate.relations.insert(candidate.relations.end(), spur_path->relations.begin(),
                                       spur_path->relations.end());
            candidates.insert(std::move(candidate));
        }

        if (candidates.empty()) break;
        accepted.push_back(std::move(candidates.extract(candidates.begin()).value()));
    }
    return accepted;
}

std::vector<Path> yen_k_shortest(const KnowledgeGraph& graph, EntityId u, EntityId v, int k, int max_hops) {
    SearchWorkspace workspace;
    return yen_k_shortest(graph, u, v, k, max_hops, workspace);
}

std::vector<Path> diversity_filter(std::vector<Path> paths) {
    std::vector<Path> kept;
    kept.reserve(paths.size());
    std::set<std::vector<RelationId>> seen;
    for (Path& p : paths) {
        if (seen.insert(p.relations).second) {
            kept.push_back(std::move(p));
        }
    }
    return kept;
}

std::vector<Path> neighbor_fallback(const KnowledgeGraph& graph, EntityId anchor, int cap) {
    // First occurrence per relation, capped. For single-hop paths the
    // relation sequence is the relation id, so this equals running the full
    // edge list through diversity_filter and truncating.
    std::vector<Path> paths;
    std::set<RelationId> seen;
    for (const Edge& e : graph.outgoing(anchor)) {
        if (e.node == anchor) continue;
        if (static_cast<int>(paths.size()) >= cap) break;
        if (seen.insert(e.relation).second) {
            paths.push_back(Path{{anchor, e.node}, {e.relation}});
        }
    }
    return paths;
}

std::vector<Path> baseline_shortest_unfiltered(const KnowledgeGraph& graph, EntityId u, EntityId v,
                                               const RetrievalConfig& config) {
    config.validate();
    return yen_k_shortest(graph, u, v, config.k, config.max_hops);
}

std::vector<Path> baseline_local_neighborhood(const KnowledgeGraph& graph, std::optional<EntityId> u,
                                              std::optional<EntityId> v, const RetrievalConfig& config) {
    config.validate();
    std::vector<Path> paths;
    auto take = [&](EntityId anchor) {
        int taken = 0;
        for (const Edge& e : graph.outgoing(anchor)) {
            if (e.node == anchor) continue;
            if (taken >= config.neighbor_cap) break;
            paths.push_back(Path{{anchor, e.node}, {e.relation}});
            ++taken;
        }
    };
    if (u) take(*u);
    if (v) take(*v);
    return paths;
}

RetrievalResult retrieve(const KnowledgeGraph& graph, QueryPair query, const RetrievalConfig& config,
                         SearchWorkspace& workspace) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    if (!query.u_id) query.u_id = graph.lookup_entity(query.u_name);
    if (!query.v_id) query.v_id = graph.lookup_entity(query.v_name);
    if (query.u_id && query.v_id && *query.u_id == *query.v_id) {
        throw Error(ErrorCode::ParseError,
                    "query endpoints resolve to the same entity: " + query.u_name + " / " + query.v_name);
    }

    RetrievalResult result;
    result.mode = query.u_id && query.v_id ? QueryMode::BothResolved
                  : query.u_id             ? QueryMode::OnlyU
                  : query.v_id             ? QueryMode::OnlyV
                                           : QueryMode::Neither;

    const bool filter_on =
        config.diversity_filter_enabled && config.strategy != Strategy::shortest_unfiltered;

    switch (result.mode) {
        case QueryMode::Neither:
            break;
        case QueryMode::OnlyU:
        case QueryMode::OnlyV: {
            const EntityId anchor = result.mode == QueryMode::OnlyU ? *query.u_id : *query.v_id;
            if (config.strategy == Strategy::local_neighborhood) {
                result.paths = baseline_local_neighborhood(graph, query.u_id, query.v_id, config);
            } else if (filter_on) {
                result.paths = neighbor_fallback(graph, anchor, config.k);
            } else {
                result.paths = single_hop_paths(graph, anchor, config.k);
            }
            break;
        }
        case QueryMode::BothResolved: {
            if (config.strategy == Strategy::local_neighborhood) {
                result.paths = baseline_local_neighborhood(graph, query.u_id, query.v_id, config);
            } else {
                const long long mined = static_cast<long long>(config.k) * config.overfetch;
                const int raw_k = filter_on
                                      ? static_cast<int>(std::min<long long>(mined, INT_MAX))
                                      : config.k;
                result.paths =
                    yen_k_shortest(graph, *query.u_id, *query.v_id, raw_k, config.max_hops, workspace);
                if (filter_on) result.paths = diversity_filter(std::move(result.paths));
            }
            break;
        }
    }
    truncate(result.paths, config.k);

    result.query = std::move(query);
    result.elapsed =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
    return result;
}

RetrievalResult retrieve(const KnowledgeGraph& graph, QueryPair query, const RetrievalConfig& config) {
    SearchWorkspace workspace;
    return retrieve(graph, std::move(query), config, workspace);
}

BatchResult retrieve_batch_serial(const KnowledgeGraph& graph, const std::vector<QueryPair>& queries,
                                  const RetrievalConfig& config) {
    config.validate();
    BatchResult batch;
    batch.results.reserve(queries.size());

    const auto start = std::chrono::steady_clock::now();
    SearchWorkspace workspace;
    for (const QueryPair& query : queries) {
        batch.results.push_back(retrieve(graph, query, config, workspace));
    }
    batch.wall =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
    return batch;
}

BatchResult retrieve_batch(const KnowledgeGraph& graph, const std::vector<QueryPair>& queries,
                           const RetrievalConfig& config, int worker_count) {
#ifdef _OPENMP
    if (worker_count >= 2) {
        config.validate();

        // Resolve serially so contract violations surface before the
        // parallel region.
        std::vector<QueryPair> resolved = resolve_queries(graph, queries);
        for (const QueryPair& q : resolved) {
            if (q.u_id && q.v_id && *q.u_id == *q.v_id) {
                throw Error(ErrorCode::ParseError,
                            "query endpoints resolve to the same entity: " + q.u_name + " / " + q.v_name);
            }
        }

        BatchResult batch;
        batch.results.resize(resolved.size());
        const auto start = std::chrono::steady_clock::now();

#pragma omp parallel num_threads(worker_count)
        {
            SearchWorkspace workspace;
#pragma omp for schedule(dynamic, 4)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(resolved.size()); ++i) {
                batch.results[static_cast<std::size_t>(i)] =
                    retrieve(graph, resolved[static_cast<std::size_t>(i)], config, workspace);
            }
        }

        batch.wall = std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now() - start);
        return batch;
    }
#else
    (void)worker_count;
#endif
    return retrieve_batch_serial(graph, queries, config);
}

} // namespace kpaths
