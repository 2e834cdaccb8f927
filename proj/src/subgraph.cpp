#include "kpaths/subgraph.hpp"

#include "kpaths/augment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace kpaths {

namespace {

bool export_order(const Triplet& a, const Triplet& b) {
    if (a.head != b.head) return a.head < b.head;
    if (a.relation != b.relation) return a.relation < b.relation;
    return a.tail < b.tail;
}

} // namespace

Subgraph Subgraph::from_triplets(std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), export_order);
    triplets.erase(std::unique(triplets.begin(), triplets.end()), triplets.end());

    Subgraph subgraph;
    subgraph.nodes.reserve(triplets.size());
    subgraph.relations.reserve(triplets.size());
    for (const Triplet& t : triplets) {
        subgraph.nodes.push_back(t.head);
        subgraph.nodes.push_back(t.tail);
        subgraph.relations.push_back(t.relation);
    }
    std::sort(subgraph.nodes.begin(), subgraph.nodes.end());
    subgraph.nodes.erase(std::unique(subgraph.nodes.begin(), subgraph.nodes.end()),
                         subgraph.nodes.end());
    std::sort(subgraph.relations.begin(), subgraph.relations.end());
    subgraph.relations.erase(std::unique(subgraph.relations.begin(), subgraph.relations.end()),
                             subgraph.relations.end());
    subgraph.triplets = std::move(triplets);
    return subgraph;
}

Subgraph paths_to_subgraph(std::span<const RetrievalResult> results) {
    std::vector<Triplet> triplets;
    for (const RetrievalResult& result : results) {
        for (const Path& path : result.paths) {
            for (std::size_t hop = 0; hop < path.hops(); ++hop) {
                triplets.push_back(path.edge_at(hop));
            }
        }
    }
    return Subgraph::from_triplets(std::move(triplets));
}

Subgraph paths_to_subgraph(const RetrievalResult& result) {
    return paths_to_subgraph(std::span<const RetrievalResult>(&result, 1));
}

Subgraph forward_projection(const Subgraph& subgraph, const KnowledgeGraph& graph) {
    std::vector<Triplet> forward;
    forward.reserve(subgraph.triplets.size());
    for (const Triplet& t : subgraph.triplets) {
        if (graph.relation(t.relation).is_inverse) {
            forward.push_back(Triplet{t.tail, forward_relation_id(graph, t.relation), t.head});
        } else {
            forward.push_back(t);
        }
    }
    return Subgraph::from_triplets(std::move(forward));
}

StatsComparison stats(const KnowledgeGraph& before, const Subgraph& after) {
    const auto start = std::chrono::steady_clock::now();

    StatsComparison comparison;
    comparison.before.num_nodes = before.entity_count();
    comparison.before.num_relations = before.relation_count();
    comparison.before.num_triplets = before.triplet_count();
    comparison.after.num_nodes = after.nodes.size();
    comparison.after.num_relations = after.relations.size();
    comparison.after.num_triplets = after.triplets.size();

    Subgraph forward = forward_projection(after, before);
    comparison.after_forward_only.num_nodes = forward.nodes.size();
    comparison.after_forward_only.num_relations = forward.relations.size();
    comparison.after_forward_only.num_triplets = forward.triplets.size();

    auto reduction = [](std::size_t before_count, std::size_t after_count) {
        if (before_count == 0) return 0.0;
        return 1.0 - static_cast<double>(after_count) / static_cast<double>(before_count);
    };
    comparison.node_reduction = reduction(comparison.before.num_nodes, comparison.after.num_nodes);
    comparison.relation_reduction =
        reduction(comparison.before.num_relations, comparison.after.num_relations);
    comparison.triplet_reduction =
        reduction(comparison.before.num_triplets, comparison.after.num_triplets);

    const auto elapsed =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
    comparison.before.elapsed = elapsed;
    comparison.after.elapsed = elapsed;
    comparison.after_forward_only.elapsed = elapsed;
    return comparison;
}

void export_subgraph(const Subgraph& subgraph, const KnowledgeGraph& graph, std::ostream& out,
                     ExportFormat format) {
    if (format == ExportFormat::tsv) {
        for (const Triplet& t : subgraph.triplets) {
            out << graph.entity(t.head).name << '\t' << graph.relation(t.relation).name << '\t'
                << graph.entity(t.tail).name << '\n';
        }
    } else {
        for (const Triplet& t : subgraph.triplets) {
            nlohmann::ordered_json record;
            record["h"] = t.head;
            record["hn"] = graph.entity(t.head).name;
            record["r"] = t.relation;
            record["rn"] = graph.relation(t.relation).name;
            record["t"] = t.tail;
            record["tn"] = graph.entity(t.tail).name;
            out << record.dump() << '\n';
        }
    }
    if (!out) {
        throw Error(ErrorCode::ExportError, "subgraph export stream failed");
    }
}

void export_subgraph_file(const Subgraph& subgraph, const KnowledgeGraph& graph,
                          const std::filesystem::path& path, ExportFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::ExportError, "cannot open " + path.string() + " for writing");
    }
    export_subgraph(subgraph, graph, out, format);
}

} // namespace kpaths
