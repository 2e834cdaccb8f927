#pragma once
// Canonical binary graph artifact plus the JSON surfaces: retrieval results
// as JSON-lines, augmentation reports, run manifests. Serialized bytes are a
// pure function of content, so digests double as cache keys.

#include "kpaths/augment.hpp"
#include "kpaths/graph.hpp"
#include "kpaths/retrieval.hpp"
#include "kpaths/subgraph.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace kpaths {

inline constexpr const char* kToolVersion = "0.1.0";

void save_graph(const KnowledgeGraph& graph, std::ostream& out);
void save_graph_file(const KnowledgeGraph& graph, const std::filesystem::path& path);
KnowledgeGraph load_graph(std::istream& in, const std::string& source_name = "<stream>");
KnowledgeGraph load_graph_file(const std::filesystem::path& path);

// FNV-1a 64-bit content fingerprints (cache keys, not security).
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t file_digest(const std::filesystem::path& path);
std::string digest_hex(std::uint64_t digest);

// One JSON object per query in input order. Paths carry id arrays alongside
// the resolved names and labels. Timings are opt-in so that default outputs
// are byte-identical across runs and worker counts.
void write_results_jsonl(std::ostream& out, const KnowledgeGraph& graph,
                         const std::vector<RetrievalResult>& results, bool include_timings = false);

nlohmann::ordered_json result_to_json(const KnowledgeGraph& graph, const RetrievalResult& result,
                                      bool include_timings = false);

// Inverse of write_results_jsonl for the downstream commands; ids are taken
// from the record and validated lazily against the graph they are used with.
std::vector<RetrievalResult> read_results_jsonl(std::istream& in,
                                                const std::string& source_name = "<stream>");
std::vector<RetrievalResult> read_results_jsonl_file(const std::filesystem::path& path);

nlohmann::ordered_json augmentation_report_json(const AugmentationReport& report);
nlohmann::ordered_json stats_json(const StatsComparison& comparison);

struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string command;
    nlohmann::ordered_json config; // full flag snapshot
    std::vector<std::pair<std::string, std::uint64_t>> inputs;  // path, digest
    std::vector<std::pair<std::string, std::uint64_t>> outputs; // path, digest
    std::int64_t wall_ms = 0;
};

nlohmann::ordered_json manifest_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

} // namespace kpaths
