#include "kpaths/ingest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace kpaths {

namespace {

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

bool skip_line(const std::string& line) {
    if (line.empty()) return true;
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    return i == line.size() || line[i] == '#';
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
        fields.back().pop_back();
    }
    return fields;
}

std::ifstream open_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return in;
}

template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skip_line(line)) continue;
        fn(line, lineno);
    }
}

} // namespace

std::vector<EdgeRecord> load_edges(std::istream& in, EdgeFormat format, const std::string& source_name) {
    std::vector<EdgeRecord> records;
    if (format == EdgeFormat::tsv) {
        for_each_data_line(in, [&](const std::string& line, std::size_t lineno) {
            auto fields = split_tabs(line);
            if (fields.size() != 3) {
                parse_error(source_name, lineno,
                            "expected 3 tab-separated columns, got " + std::to_string(fields.size()));
            }
            if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
                parse_error(source_name, lineno, "empty field in edge record");
            }
            records.push_back(EdgeRecord{fields[0], fields[1], fields[2], lineno});
        });
    } else {
        for_each_data_line(in, [&](const std::string& line, std::size_t lineno) {
            nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
            if (obj.is_discarded() || !obj.is_object()) {
                parse_error(source_name, lineno, "invalid JSON object");
            }
            for (const char* key : {"head", "relation", "tail"}) {
                if (!obj.contains(key) || !obj[key].is_string() || obj[key].get<std::string>().empty()) {
                    parse_error(source_name, lineno, std::string("missing or empty \"") + key + "\" field");
                }
            }
            records.push_back(EdgeRecord{obj["head"].get<std::string>(), obj["relation"].get<std::string>(),
                                         obj["tail"].get<std::string>(), lineno});
        });
    }
    return records;
}

std::vector<EdgeRecord> load_edges_file(const std::filesystem::path& path, EdgeFormat format) {
    auto in = open_file(path);
    return load_edges(in, format, path.string());
}

std::vector<EntityRecord> load_entity_dictionary(std::istream& in, const std::string& source_name) {
    std::vector<EntityRecord> records;
    std::unordered_map<std::string, std::size_t> seen; // normalized name -> line
    for_each_data_line(in, [&](const std::string& line, std::size_t lineno) {
        auto fields = split_tabs(line);
        if (fields.size() != 2) {
            parse_error(source_name, lineno,
                        "expected 2 tab-separated columns (name, kind), got " + std::to_string(fields.size()));
        }
        if (fields[0].empty()) parse_error(source_name, lineno, "empty entity name");
        if (fields[1].empty()) parse_error(source_name, lineno, "empty entity kind");
        std::string key = normalize_name(fields[0]);
        auto [it, inserted] = seen.try_emplace(key, lineno);
        if (!inserted) {
            throw Error(ErrorCode::DuplicateEntity,
                        source_name + ":" + std::to_string(lineno) + ": entity '" + fields[0] +
                            "' duplicates line " + std::to_string(it->second) + " after normalization");
        }
        records.push_back(EntityRecord{fields[0], fields[1]});
    });
    return records;
}

std::vector<EntityRecord> load_entity_dictionary_file(const std::filesystem::path& path) {
    auto in = open_file(path);
    return load_entity_dictionary(in, path.string());
}

std::optional<std::string> passive_inverse_label(std::string_view forward_label) {
    if (forward_label.size() < 2 || forward_label.back() != 's') return std::nullopt;
    std::string stem(forward_label.substr(0, forward_label.size() - 1));

    static const std::unordered_map<std::string, std::string> irregular = {
        {"bind", "bound"},   {"find", "found"},   {"hold", "held"},    {"take", "taken"},
        {"give", "given"},   {"make", "made"},    {"see", "seen"},     {"know", "known"},
        {"show", "shown"},   {"feed", "fed"},     {"lead", "led"},     {"set", "set"},
        {"put", "put"},      {"cut", "cut"},      {"hit", "hit"},      {"let", "let"},
        {"keep", "kept"},    {"build", "built"},  {"send", "sent"},    {"spend", "spent"},
        {"bring", "brought"}, {"buy", "bought"},  {"break", "broken"}, {"choose", "chosen"},
        {"speak", "spoken"}, {"drive", "driven"}, {"grow", "grown"},   {"draw", "drawn"},
        {"throw", "thrown"}, {"write", "written"}, {"do", "done"},     {"get", "gotten"},
        {"have", "had"},     {"eat", "eaten"},    {"leave", "left"},   {"lose", "lost"},
    };

    std::string participle;
    auto it = irregular.find(normalize_name(stem));
    if (it != irregular.end()) {
        participle = it->second;
    } else if (!stem.empty() && stem.back() == 'e') {
        participle = stem + "d";
    } else {
        participle = stem + "ed";
    }
    return "is " + participle + " by";
}

std::vector<RelationRecord> load_relation_dictionary(std::istream& in, const std::string& source_name) {
    std::vector<RelationRecord> records;
    std::unordered_map<std::string, std::size_t> seen;
    for_each_data_line(in, [&](const std::string& line, std::size_t lineno) {
        auto fields = split_tabs(line);
        if (fields.size() != 2 && fields.size() != 3) {
            parse_error(source_name, lineno,
                        "expected 2 or 3 tab-separated columns (name, forward_text[, inverse_text]), got " +
                            std::to_string(fields.size()));
        }
        if (fields[0].empty()) parse_error(source_name, lineno, "empty relation name");
        if (fields[1].empty()) parse_error(source_name, lineno, "empty forward text");

        std::string key = normalize_name(fields[0]);
        auto [it, inserted] = seen.try_emplace(key, lineno);
        if (!inserted) {
            throw Error(ErrorCode::DuplicateRelation,
                        source_name + ":" + std::to_string(lineno) + ": relation '" + fields[0] +
                            "' duplicates line " + std::to_string(it->second));
        }

        std::string inverse;
        if (fields.size() == 3 && !fields[2].empty()) {
            inverse = fields[2];
        } else {
            auto synthesized = passive_inverse_label(fields[1]);
            if (!synthesized) {
                parse_error(source_name, lineno,
                            "relation '" + fields[0] +
                                "' has no inverse text and its forward text is not eligible for the passive fallback");
            }
            inverse = *synthesized;
        }
        records.push_back(RelationRecord{fields[0], fields[1], std::move(inverse)});
    });
    return records;
}

std::vector<RelationRecord> load_relation_dictionary_file(const std::filesystem::path& path) {
    auto in = open_file(path);
    return load_relation_dictionary(in, path.string());
}

std::vector<QueryPair> load_queries(std::istream& in, const std::string& source_name) {
    std::vector<QueryPair> pairs;
    for_each_data_line(in, [&](const std::string& line, std::size_t lineno) {
        auto fields = split_tabs(line);
        if (fields.size() != 2 && fields.size() != 3) {
            parse_error(source_name, lineno,
                        "expected 2 or 3 tab-separated columns (u, v[, label]), got " +
                            std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[1].empty()) {
            parse_error(source_name, lineno, "empty query entity name");
        }
        if (normalize_name(fields[0]) == normalize_name(fields[1])) {
            parse_error(source_name, lineno, "query endpoints are identical after normalization");
        }
        QueryPair pair;
        pair.u_name = fields[0];
        pair.v_name = fields[1];
        if (fields.size() == 3 && !fields[2].empty()) pair.label = fields[2];
        pairs.push_back(std::move(pair));
    });
    return pairs;
}

std::vector<QueryPair> load_queries_file(const std::filesystem::path& path) {
    auto in = open_file(path);
    return load_queries(in, path.string());
}

void register_entities(GraphBuilder& builder, std::vector<EntityRecord> records) {
    std::sort(records.begin(), records.end(), [](const EntityRecord& a, const EntityRecord& b) {
        return normalize_name(a.name) < normalize_name(b.name);
    });
    for (auto& record : records) {
        builder.add_entity(std::move(record.name), std::move(record.kind));
    }
}

void register_relations(GraphBuilder& builder, std::vector<RelationRecord> records) {
    std::sort(records.begin(), records.end(), [](const RelationRecord& a, const RelationRecord& b) {
        return normalize_name(a.name) < normalize_name(b.name);
    });
    for (auto& record : records) {
        builder.add_relation(std::move(record.name), std::move(record.forward_label),
                             std::move(record.inverse_label));
    }
}

void add_edges(GraphBuilder& builder, const std::vector<EdgeRecord>& records, IngestReport& report,
               bool reject_unresolved) {
    constexpr std::size_t kMaxSamples = 10;
    for (const EdgeRecord& record : records) {
        ++report.records_total;
        auto head = builder.find_entity(record.head_name);
        auto relation = builder.find_relation(record.relation_name);
        auto tail = builder.find_entity(record.tail_name);
        if (!head || !relation || !tail) {
            std::string what = "line " + std::to_string(record.line) + ": unresolved " +
                               (!head ? "entity '" + record.head_name + "'"
                                      : !relation ? "relation '" + record.relation_name + "'"
                                                  : "entity '" + record.tail_name + "'");
            if (reject_unresolved) {
                throw Error(ErrorCode::UnresolvedEntity, what);
            }
            ++report.unresolved;
            if (report.unresolved_samples.size() < kMaxSamples) {
                report.unresolved_samples.push_back(std::move(what));
            }
            continue;
        }
        Triplet triplet{*head, *relation, *tail};
        if (builder.has_triplet(triplet)) {
            ++report.duplicates;
        } else {
            builder.add_triplet(triplet);
            ++report.triplets_added;
        }
    }
}

std::vector<QueryPair> resolve_queries(const KnowledgeGraph& graph, std::vector<QueryPair> pairs) {
    for (QueryPair& pair : pairs) {
        pair.u_id = graph.lookup_entity(pair.u_name);
        pair.v_id = graph.lookup_entity(pair.v_name);
    }
    return pairs;
}

EdgeFormat edge_format_from_extension(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext == ".jsonl" || ext == ".ndjson") return EdgeFormat::jsonl;
    return EdgeFormat::tsv;
}

} // namespace kpaths
