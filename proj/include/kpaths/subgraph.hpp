#pragma once
// Unions retrieved paths into query-specific or corpus-level subgraphs and
// computes the size statistics comparing them against the full graph.

#include "kpaths/graph.hpp"
#include "kpaths/retrieval.hpp"

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace kpaths {

struct Subgraph {
    std::vector<Triplet> triplets;      // sorted by (head, relation, tail)
    std::vector<EntityId> nodes;        // sorted, exactly the ids in triplets
    std::vector<RelationId> relations;  // sorted, exactly the ids in triplets

    static Subgraph from_triplets(std::vector<Triplet> triplets);
};

// Union of every (head, relation, tail) hop across all retrieved paths;
// duplicates collapse.
Subgraph paths_to_subgraph(std::span<const RetrievalResult> results);
Subgraph paths_to_subgraph(const RetrievalResult& result);

// Map inverse-relation triplets onto their forward form and dedupe, for
// consumers that want the half-size export.
Subgraph forward_projection(const Subgraph& subgraph, const KnowledgeGraph& graph);

struct SubgraphStats {
    std::size_t num_nodes = 0;
    std::size_t num_relations = 0;
    std::size_t num_triplets = 0;
    std::chrono::microseconds elapsed{0};
};

struct StatsComparison {
    SubgraphStats before;
    SubgraphStats after;
    SubgraphStats after_forward_only;
    double node_reduction = 0.0;     // 1 - after/before per dimension
    double relation_reduction = 0.0;
    double triplet_reduction = 0.0;
};

StatsComparison stats(const KnowledgeGraph& before, const Subgraph& after);

enum class ExportFormat { tsv, jsonl };

// Canonical export sorted by (head, relation, tail) ids; names resolved
// through the graph. Re-exporting the same subgraph yields identical bytes.
void export_subgraph(const Subgraph& subgraph, const KnowledgeGraph& graph, std::ostream& out,
                     ExportFormat format);
void export_subgraph_file(const Subgraph& subgraph, const KnowledgeGraph& graph,
                          const std::filesystem::path& path, ExportFormat format);

} // namespace kpaths
