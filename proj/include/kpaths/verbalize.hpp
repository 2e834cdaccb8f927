#pragma once
// Renders paths as natural-language reasoning chains and assembles the full
// prompt around them. All functions are pure: same inputs, identical bytes.

#include "kpaths/graph.hpp"
#include "kpaths/ingest.hpp"
#include "kpaths/retrieval.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kpaths {

struct VerbalizedPath {
    std::string text;
    Path source;
};

enum class DatasetKind { severity, indication, open_interaction };

struct VerbalizeOptions {
    // Suppress the comma inserted before "and" on two-hop sentences whose
    // second relation reads in passive voice.
    bool plain_join = false;
};

// Forward relations read in active voice, inverse relations in passive voice.
std::string verbalize_relation(const RelationSchema& relation);

// Kind descriptor as printed in parentheses: "Gene" renders lower-cased,
// every other kind keeps its dictionary casing.
std::string kind_descriptor(std::string_view kind);

// One sentence per path, hops joined with " and ". Entities carry their kind
// descriptor except the query endpoints, which are assumed known to the
// reader.
VerbalizedPath verbalize_path(const KnowledgeGraph& graph, const Path& path,
                              std::optional<EntityId> query_u = std::nullopt,
                              std::optional<EntityId> query_v = std::nullopt,
                              const VerbalizeOptions& options = {});

struct PromptSpec {
    DatasetKind dataset_kind = DatasetKind::severity;
    std::string system_text;
    std::string instruction_text;
    std::string question_text;
    std::optional<std::string> kg_block; // newline-separated paths, retrieval order
};

PromptSpec build_prompt_spec(const QueryPair& query, const std::vector<VerbalizedPath>& paths,
                             DatasetKind kind);

std::string render_prompt(const PromptSpec& spec, const std::optional<std::string>& definitions);

// System block, dataset-specific answer directive, question, optional
// definitions, then one verbalized path per line under the knowledge-graph
// heading (omitted when no paths were retrieved).
std::string build_prompt(const QueryPair& query, const std::vector<VerbalizedPath>& paths,
                         DatasetKind kind, const std::optional<std::string>& definitions = std::nullopt);

const char* dataset_kind_name(DatasetKind kind);
std::optional<DatasetKind> dataset_kind_from_name(std::string_view name);

} // namespace kpaths
