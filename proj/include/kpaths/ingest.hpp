#pragma once
// Parsers for the on-disk formats feeding the graph builder:
//   edges.tsv      head<TAB>relation<TAB>tail, '#' comment lines ignored
//   entities.tsv   name<TAB>kind
//   relations.tsv  name<TAB>forward_text<TAB>inverse_text (third column optional)
//   queries.tsv    u_name<TAB>v_name[<TAB>label]
// JSONL edge files carry one {"head","relation","tail"} object per line.

#include "kpaths/graph.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kpaths {

enum class EdgeFormat { tsv, jsonl };

struct EdgeRecord {
    std::string head_name;
    std::string relation_name;
    std::string tail_name;
    std::size_t line = 0; // 1-based source line, kept for error reporting
};

struct EntityRecord {
    std::string name;
    std::string kind;
};

struct RelationRecord {
    std::string name;
    std::string forward_label;
    std::string inverse_label;
};

struct QueryPair {
    std::string u_name;
    std::string v_name;
    std::optional<std::string> label; // passed through to outputs, never used in retrieval
    std::optional<EntityId> u_id;
    std::optional<EntityId> v_id;

    bool u_resolved() const { return u_id.has_value(); }
    bool v_resolved() const { return v_id.has_value(); }
};

struct IngestReport {
    std::size_t records_total = 0;
    std::size_t triplets_added = 0;
    std::size_t duplicates = 0;        // records mapping onto an existing triplet
    std::size_t unresolved = 0;        // records naming entities/relations outside the dictionaries
    std::vector<std::string> unresolved_samples; // first few, with line context
};

std::vector<EdgeRecord> load_edges(std::istream& in, EdgeFormat format, const std::string& source_name = "<stream>");
std::vector<EdgeRecord> load_edges_file(const std::filesystem::path& path, EdgeFormat format);

std::vector<EntityRecord> load_entity_dictionary(std::istream& in, const std::string& source_name = "<stream>");
std::vector<EntityRecord> load_entity_dictionary_file(const std::filesystem::path& path);

std::vector<RelationRecord> load_relation_dictionary(std::istream& in, const std::string& source_name = "<stream>");
std::vector<RelationRecord> load_relation_dictionary_file(const std::filesystem::path& path);

std::vector<QueryPair> load_queries(std::istream& in, const std::string& source_name = "<stream>");
std::vector<QueryPair> load_queries_file(const std::filesystem::path& path);

// Passive-voice fallback for relation rows without explicit inverse text.
// Applies only to labels ending in 's': strip the trailing 's', form the past
// participle (small irregular-verb table, then 'd'/'ed'), produce
// "is <participle> by". Returns nullopt when the label does not qualify.
std::optional<std::string> passive_inverse_label(std::string_view forward_label);

// Register dictionaries in lexicographic order of the normalized name so ids
// are canonical regardless of file row order.
void register_entities(GraphBuilder& builder, std::vector<EntityRecord> records);
void register_relations(GraphBuilder& builder, std::vector<RelationRecord> records);

// Resolve edge records against the builder's dictionaries and insert them.
// When `reject_unresolved` is set, the first unknown name raises
// UnresolvedEntity; otherwise unknown records are counted in the report,
// never silently dropped.
void add_edges(GraphBuilder& builder, const std::vector<EdgeRecord>& records, IngestReport& report,
               bool reject_unresolved = false);

// Annotate query pairs with the entity ids their names resolve to. Unresolved
// names are preserved for reporting; resolution status is data, not an error.
std::vector<QueryPair> resolve_queries(const KnowledgeGraph& graph, std::vector<QueryPair> pairs);

EdgeFormat edge_format_from_extension(const std::filesystem::path& path);

} // namespace kpaths
