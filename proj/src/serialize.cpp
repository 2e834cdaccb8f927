#include "kpaths/serialize.hpp"

#include "kpaths/verbalize.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace kpaths {

namespace {

constexpr std::uint32_t kMagic = 0x4b504752; // "KPGR"
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kNoInverse = 0xffffffffu;

void write_u32(std::ostream& out, std::uint32_t value) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    out.write(bytes, 4);
}

void write_u64(std::ostream& out, std::uint64_t value) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

void write_string(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t read_u32(std::istream& in, const std::string& source) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw Error(ErrorCode::ParseError, source + ": truncated graph artifact");
    }
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) value |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
    return value;
}

std::uint64_t read_u64(std::istream& in, const std::string& source) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        throw Error(ErrorCode::ParseError, source + ": truncated graph artifact");
    }
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return value;
}

std::string read_string(std::istream& in, const std::string& source) {
    std::uint32_t size = read_u32(in, source);
    std::string s(size, '\0');
    if (size > 0 && !in.read(s.data(), size)) {
        throw Error(ErrorCode::ParseError, source + ": truncated graph artifact");
    }
    return s;
}

} // namespace

void save_graph(const KnowledgeGraph& graph, std::ostream& out) {
    write_u32(out, kMagic);
    write_u32(out, kVersion);
    write_u64(out, graph.entity_count());
    write_u64(out, graph.relation_count());
    write_u64(out, graph.forward_relation_count());
    write_u64(out, graph.triplet_count());
    write_u32(out, graph.inverses_added() ? 1u : 0u);

    for (const Entity& entity : graph.entities()) {
        write_string(out, entity.name);
        write_string(out, entity.kind);
    }
    for (const RelationSchema& relation : graph.relations()) {
        write_string(out, relation.name);
        write_string(out, relation.forward_label);
        write_string(out, relation.inverse_label);
        write_u32(out, relation.is_inverse ? 1u : 0u);
        write_u32(out, relation.inverse_of ? *relation.inverse_of : kNoInverse);
    }
    graph.for_each_triplet([&](const Triplet& t) {
        write_u32(out, t.head);
        write_u32(out, t.relation);
        write_u32(out, t.tail);
    });

    if (!out) {
        throw Error(ErrorCode::IoError, "graph artifact write failed");
    }
}

void save_graph_file(const KnowledgeGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    save_graph(graph, out);
}

KnowledgeGraph load_graph(std::istream& in, const std::string& source_name) {
    if (read_u32(in, source_name) != kMagic) {
        throw Error(ErrorCode::ParseError, source_name + ": not a graph artifact (bad magic)");
    }
    if (read_u32(in, source_name) != kVersion) {
        throw Error(ErrorCode::ParseError, source_name + ": unsupported graph artifact version");
    }
    const std::uint64_t entity_count = read_u64(in, source_name);
    const std::uint64_t relation_count = read_u64(in, source_name);
    const std::uint64_t forward_count = read_u64(in, source_name);
    const std::uint64_t triplet_count = read_u64(in, source_name);
    const bool augmented = read_u32(in, source_name) != 0;

    GraphBuilder builder;
    for (std::uint64_t i = 0; i < entity_count; ++i) {
        std::string name = read_string(in, source_name);
        std::string kind = read_string(in, source_name);
        builder.add_entity(std::move(name), std::move(kind));
    }
    for (std::uint64_t i = 0; i < relation_count; ++i) {
        RelationSchema schema;
        schema.name = read_string(in, source_name);
        schema.forward_label = read_string(in, source_name);
        schema.inverse_label = read_string(in, source_name);
        schema.is_inverse = read_u32(in, source_name) != 0;
        std::uint32_t inverse_of = read_u32(in, source_name);
        if (inverse_of != kNoInverse) schema.inverse_of = inverse_of;
        builder.add_schema(std::move(schema));
    }
    if (augmented) builder.mark_augmented(forward_count);
    for (std::uint64_t i = 0; i < triplet_count; ++i) {
        Triplet t;
        t.head = read_u32(in, source_name);
        t.relation = read_u32(in, source_name);
        t.tail = read_u32(in, source_name);
        builder.add_triplet(t);
    }
    return std::move(builder).build();
}

KnowledgeGraph load_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return load_graph(in, path.string());
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = seed;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[1 << 16];
    while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
        hash = fnv1a(buffer, static_cast<std::size_t>(in.gcount()), hash);
    }
    return hash;
}

std::string digest_hex(std::uint64_t digest) {
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[digest & 0xf];
        digest >>= 4;
    }
    return out;
}

nlohmann::ordered_json result_to_json(const KnowledgeGraph& graph, const RetrievalResult& result,
                                      bool include_timings) {
    nlohmann::ordered_json record;
    nlohmann::ordered_json query;
    query["u"] = result.query.u_name;
    query["v"] = result.query.v_name;
    if (result.query.label) query["label"] = *result.query.label;
    record["query"] = std::move(query);
    record["mode"] = query_mode_name(result.mode);

    nlohmann::ordered_json paths = nlohmann::ordered_json::array();
    for (const Path& path : result.paths) {
        nlohmann::ordered_json entry;
        entry["nodes"] = path.nodes;
        entry["relations"] = path.relations;
        nlohmann::ordered_json names = nlohmann::ordered_json::array();
        for (EntityId id : path.nodes) names.push_back(graph.entity(id).name);
        entry["entity_names"] = std::move(names);
        nlohmann::ordered_json labels = nlohmann::ordered_json::array();
        for (RelationId id : path.relations) labels.push_back(verbalize_relation(graph.relation(id)));
        entry["relation_labels"] = std::move(labels);
        paths.push_back(std::move(entry));
    }
    record["paths"] = std::move(paths);
    if (include_timings) {
        record["elapsed_ms"] = result.elapsed.count() / 1000;
    }
    return record;
}

std::vector<RetrievalResult> read_results_jsonl(std::istream& in, const std::string& source_name) {
    std::vector<RetrievalResult> results;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object() || !record.contains("query") ||
            !record.contains("mode") || !record.contains("paths")) {
            throw Error(ErrorCode::ParseError,
                        source_name + ":" + std::to_string(lineno) + ": malformed results record");
        }
        RetrievalResult result;
        result.query.u_name = record["query"].value("u", "");
        result.query.v_name = record["query"].value("v", "");
        if (record["query"].contains("label")) {
            result.query.label = record["query"]["label"].get<std::string>();
        }
        const std::string mode = record["mode"].get<std::string>();
        if (mode == "both_resolved") result.mode = QueryMode::BothResolved;
        else if (mode == "only_u") result.mode = QueryMode::OnlyU;
        else if (mode == "only_v") result.mode = QueryMode::OnlyV;
        else if (mode == "neither") result.mode = QueryMode::Neither;
        else {
            throw Error(ErrorCode::ParseError,
                        source_name + ":" + std::to_string(lineno) + ": unknown mode '" + mode + "'");
        }
        for (const auto& entry : record["paths"]) {
            Path path;
            path.nodes = entry.at("nodes").get<std::vector<EntityId>>();
            path.relations = entry.at("relations").get<std::vector<RelationId>>();
            if (path.nodes.size() != path.relations.size() + 1) {
                throw Error(ErrorCode::ParseError,
                            source_name + ":" + std::to_string(lineno) + ": path arity mismatch");
            }
            result.paths.push_back(std::move(path));
        }
        results.push_back(std::move(result));
    }
    return results;
}

std::vector<RetrievalResult> read_results_jsonl_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return read_results_jsonl(in, path.string());
}

void write_results_jsonl(std::ostream& out, const KnowledgeGraph& graph,
                         const std::vector<RetrievalResult>& results, bool include_timings) {
    for (const RetrievalResult& result : results) {
        out << result_to_json(graph, result, include_timings).dump() << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::IoError, "results stream write failed");
    }
}

nlohmann::ordered_json augmentation_report_json(const AugmentationReport& report) {
    nlohmann::ordered_json json;
    json["entity_count"] = report.entity_count;
    json["forward_relation_count"] = report.forward_relation_count;
    json["relation_count"] = report.relation_count;
    json["forward_triplet_count"] = report.forward_triplet_count;
    json["triplet_count"] = report.triplet_count;
    json["removed_leakage_count"] = report.removed_leakage_count;
    json["unresolved_edge_count"] = report.unresolved_edge_count;
    return json;
}

nlohmann::ordered_json stats_json(const StatsComparison& comparison) {
    auto block = [](const SubgraphStats& s) {
        nlohmann::ordered_json json;
        json["num_nodes"] = s.num_nodes;
        json["num_relations"] = s.num_relations;
        json["num_triplets"] = s.num_triplets;
        return json;
    };
    nlohmann::ordered_json json;
    json["before"] = block(comparison.before);
    json["after"] = block(comparison.after);
    json["after_forward_only"] = block(comparison.after_forward_only);
    nlohmann::ordered_json reduction;
    reduction["nodes"] = comparison.node_reduction;
    reduction["relations"] = comparison.relation_reduction;
    reduction["triplets"] = comparison.triplet_reduction;
    json["reduction"] = std::move(reduction);
    return json;
}

nlohmann::ordered_json manifest_json(const RunManifest& manifest) {
    nlohmann::ordered_json json;
    json["tool_version"] = manifest.tool_version;
    json["command"] = manifest.command;
    json["config"] = manifest.config;
    auto digests = [](const std::vector<std::pair<std::string, std::uint64_t>>& entries) {
        nlohmann::ordered_json block = nlohmann::ordered_json::object();
        for (const auto& [path, digest] : entries) block[path] = digest_hex(digest);
        return block;
    };
    json["inputs"] = digests(manifest.inputs);
    json["outputs"] = digests(manifest.outputs);
    json["wall_ms"] = manifest.wall_ms;
    return json;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    out << manifest_json(manifest).dump(2) << '\n';
}

} // namespace kpaths
