#pragma once
// Independent oracles used to cross-check retrieval: exhaustive loopless-path
// enumeration by DFS and the first-occurrence relation-sequence filter. These
// deliberately share no code with the search implementation.

#include "kpaths/graph.hpp"
#include "kpaths/retrieval.hpp"

#include <algorithm>
#include <vector>

namespace testsupport {

inline void enumerate_dfs(const kpaths::KnowledgeGraph& graph, kpaths::EntityId target, int max_hops,
                          kpaths::Path& current, std::vector<char>& on_path,
                          std::vector<kpaths::Path>& out) {
    const kpaths::EntityId at = current.nodes.back();
    if (at == target && current.hops() >= 1) {
        out.push_back(current);
        return; // any continuation would revisit the target
    }
    if (static_cast<int>(current.hops()) == max_hops) return;

    for (const kpaths::Edge& e : graph.outgoing(at)) {
        if (on_path[e.node]) continue;
        current.relations.push_back(e.relation);
        current.nodes.push_back(e.node);
        on_path[e.node] = 1;
        enumerate_dfs(graph, target, max_hops, current, on_path, out);
        on_path[e.node] = 0;
        current.nodes.pop_back();
        current.relations.pop_back();
    }
}

inline std::vector<kpaths::Path> enumerate_loopless_paths(const kpaths::KnowledgeGraph& graph,
                                                          kpaths::EntityId u, kpaths::EntityId v,
                                                          int max_hops) {
    std::vector<kpaths::Path> out;
    if (u == v) return out;
    kpaths::Path current;
    current.nodes.push_back(u);
    std::vector<char> on_path(graph.entity_count(), 0);
    on_path[u] = 1;
    enumerate_dfs(graph, v, max_hops, current, on_path, out);
    std::sort(out.begin(), out.end(), kpaths::PathOrder{});
    return out;
}

inline std::vector<kpaths::Path> k_shortest_oracle(const kpaths::KnowledgeGraph& graph,
                                                   kpaths::EntityId u, kpaths::EntityId v, int k,
                                                   int max_hops) {
    auto all = enumerate_loopless_paths(graph, u, v, max_hops);
    if (static_cast<int>(all.size()) > k) all.resize(static_cast<std::size_t>(k));
    return all;
}

inline std::vector<kpaths::Path> first_occurrence_filter_oracle(const std::vector<kpaths::Path>& paths) {
    std::vector<kpaths::Path> kept;
    std::vector<std::vector<kpaths::RelationId>> seen;
    for (const kpaths::Path& p : paths) {
        if (std::find(seen.begin(), seen.end(), p.relations) == seen.end()) {
            seen.push_back(p.relations);
            kept.push_back(p);
        }
    }
    return kept;
}

} // namespace testsupport
