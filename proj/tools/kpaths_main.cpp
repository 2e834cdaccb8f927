// Command-line pipeline: build an augmented graph artifact, retrieve diverse
// paths for query batches, verbalize them into prompts, export subgraphs and
// size statistics, and benchmark retrieval configurations.

#include "kpaths/augment.hpp"
#include "kpaths/graph.hpp"
#include "kpaths/ingest.hpp"
#include "kpaths/retrieval.hpp"
#include "kpaths/serialize.hpp"
#include "kpaths/subgraph.hpp"
#include "kpaths/verbalize.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct BuildOptions {
    std::string edges;
    std::string train_edges;
    std::string entities;
    std::string relations;
    std::string edges_format = "auto";
    std::vector<std::string> label_relations;
    std::vector<std::string> leakage_queries;
    bool strict_leakage = false;
    bool reject_unresolved = false;
    std::string out;
    std::string report;
    std::string manifest;
};

struct RetrieveOptions {
    std::string graph;
    std::string queries;
    int k = 10;
    int max_hops = 3;
    std::string strategy = "kpaths";
    bool no_diversity_filter = false;
    int overfetch = 1;
    int neighbor_cap = 5;
    int workers = 1;
    bool timings = false;
    std::string out;
    std::string manifest;
};

struct VerbalizeOptionsCli {
    std::string graph;
    std::string paths;
    std::string dataset = "severity";
    std::string definitions;
    bool plain_join = false;
    std::string out;
    std::string out_dir;
    std::string manifest;
};

struct ExportOptions {
    std::string graph;
    std::string paths;
    std::string format = "tsv";
    bool forward_only = false;
    std::string out;
    std::string per_query_dir;
    std::string stats_out;
    std::string manifest;
};

struct StatsOptions {
    std::string graph;
    std::string paths;
    std::string out;
    std::string manifest;
};

struct BenchOptions {
    std::string graph;
    std::string queries;
    std::string k_grid = "0,1,5,10,15,20";
    std::string strategies = "kpaths";
    std::string workers_list = "1";
    int reps = 3;
    int max_hops = 3;
    std::string out;
    std::string manifest;
};

std::vector<int> parse_int_list(const std::string& csv, const std::string& flag) {
    std::vector<int> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            values.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw kpaths::Error(kpaths::ErrorCode::ParseError, flag + ": invalid integer '" + item + "'");
        }
    }
    if (values.empty()) {
        throw kpaths::Error(kpaths::ErrorCode::ParseError, flag + ": empty list");
    }
    return values;
}

std::vector<std::string> parse_string_list(const std::string& csv) {
    std::vector<std::string> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(item);
    }
    return values;
}

kpaths::Strategy parse_strategy(const std::string& name) {
    if (name == "kpaths") return kpaths::Strategy::kpaths;
    if (name == "shortest_unfiltered") return kpaths::Strategy::shortest_unfiltered;
    if (name == "local_neighborhood") return kpaths::Strategy::local_neighborhood;
    throw kpaths::Error(kpaths::ErrorCode::ParseError, "unknown strategy '" + name + "'");
}

kpaths::EdgeFormat resolve_edge_format(const std::string& flag, const fs::path& path) {
    if (flag == "tsv") return kpaths::EdgeFormat::tsv;
    if (flag == "jsonl") return kpaths::EdgeFormat::jsonl;
    return kpaths::edge_format_from_extension(path);
}

void add_input_digest(kpaths::RunManifest& manifest, const std::string& path) {
    if (!path.empty()) manifest.inputs.emplace_back(path, kpaths::file_digest(path));
}

void add_output_digest(kpaths::RunManifest& manifest, const std::string& path) {
    if (!path.empty()) manifest.outputs.emplace_back(path, kpaths::file_digest(path));
}

void finalize_manifest(kpaths::RunManifest& manifest, const std::string& explicit_path,
                       const std::string& default_anchor,
                       std::chrono::steady_clock::time_point start) {
    manifest.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    std::string path = explicit_path;
    if (path.empty() && !default_anchor.empty()) path = default_anchor + ".manifest.json";
    if (!path.empty()) kpaths::write_manifest(manifest, path);
}

int cmd_build(const BuildOptions& opt) {
    const auto start = std::chrono::steady_clock::now();

    auto entities = kpaths::load_entity_dictionary_file(opt.entities);
    auto relations = kpaths::load_relation_dictionary_file(opt.relations);
    auto base_edges = kpaths::load_edges_file(opt.edges, resolve_edge_format(opt.edges_format, opt.edges));
    std::vector<kpaths::EdgeRecord> train_edges;
    if (!opt.train_edges.empty()) {
        train_edges =
            kpaths::load_edges_file(opt.train_edges, resolve_edge_format(opt.edges_format, opt.train_edges));
    }

    kpaths::IngestReport ingest_report;
    kpaths::KnowledgeGraph forward = kpaths::merge(
        base_edges, train_edges, std::move(entities), std::move(relations),
        opt.reject_unresolved ? kpaths::UnresolvedPolicy::error : kpaths::UnresolvedPolicy::skip_and_count,
        &ingest_report);

    kpaths::AugmentationReport report;
    report.entity_count = forward.entity_count();
    report.forward_relation_count = forward.relation_count();
    report.forward_triplet_count = forward.triplet_count();
    report.unresolved_edge_count = ingest_report.unresolved;

    kpaths::KnowledgeGraph graph = kpaths::add_inverses(forward);

    kpaths::AugmentationConfig config;
    config.strict = opt.strict_leakage;
    for (const std::string& name : opt.label_relations) {
        auto id = graph.lookup_relation(name);
        if (!id || *id >= graph.forward_relation_count()) {
            throw kpaths::Error(kpaths::ErrorCode::UnresolvedEntity,
                                "--label-relations: unknown forward relation '" + name + "'");
        }
        config.label_relation_ids.push_back(*id);
    }
    for (const std::string& path : opt.leakage_queries) {
        auto pairs = kpaths::resolve_queries(graph, kpaths::load_queries_file(path));
        for (const auto& pair : pairs) {
            if (pair.u_id && pair.v_id) config.leakage_pairs.emplace_back(*pair.u_id, *pair.v_id);
        }
    }

    std::size_t removed_count = 0;
    if (!config.leakage_pairs.empty() && (!config.label_relation_ids.empty() || config.strict)) {
        auto leakage = kpaths::remove_leakage(graph, config);
        removed_count = leakage.removed.size();
        graph = std::move(leakage.graph);
    }

    report.relation_count = graph.relation_count();
    report.triplet_count = graph.triplet_count();
    report.removed_leakage_count = removed_count;

    kpaths::save_graph_file(graph, opt.out);

    ordered_json report_json = kpaths::augmentation_report_json(report);
    if (!opt.report.empty()) {
        std::ofstream out(opt.report, std::ios::binary);
        if (!out) throw kpaths::Error(kpaths::ErrorCode::IoError, "cannot open " + opt.report);
        out << report_json.dump(2) << '\n';
    }

    std::cout << "graph: " << opt.out << " (digest " << kpaths::digest_hex(kpaths::file_digest(opt.out))
              << ")\n"
              << report_json.dump(2) << '\n';
    if (ingest_report.unresolved > 0) {
        std::cout << "rejected " << ingest_report.unresolved << " edge records naming unknown entities:\n";
        for (const auto& sample : ingest_report.unresolved_samples) {
            std::cout << "  " << sample << '\n';
        }
    }

    kpaths::RunManifest manifest;
    manifest.command = "build";
    manifest.config = ordered_json{{"edges", opt.edges},
                                   {"train_edges", opt.train_edges},
                                   {"entities", opt.entities},
                                   {"relations", opt.relations},
                                   {"label_relations", opt.label_relations},
                                   {"leakage_queries", opt.leakage_queries},
                                   {"strict_leakage", opt.strict_leakage},
                                   {"reject_unresolved", opt.reject_unresolved}};
    add_input_digest(manifest, opt.edges);
    add_input_digest(manifest, opt.train_edges);
    add_input_digest(manifest, opt.entities);
    add_input_digest(manifest, opt.relations);
    for (const auto& path : opt.leakage_queries) add_input_digest(manifest, path);
    add_output_digest(manifest, opt.out);
    if (!opt.report.empty()) add_output_digest(manifest, opt.report);
    finalize_manifest(manifest, opt.manifest, opt.out, start);
    return 0;
}

kpaths::RetrievalConfig make_config(const RetrieveOptions& opt) {
    kpaths::RetrievalConfig config;
    config.k = opt.k;
    config.max_hops = opt.max_hops;
    config.strategy = parse_strategy(opt.strategy);
    config.neighbor_cap = opt.neighbor_cap;
    config.diversity_filter_enabled = !opt.no_diversity_filter;
    config.overfetch = opt.overfetch;
    config.validate();
    return config;
}

int cmd_retrieve(const RetrieveOptions& opt) {
    const auto start = std::chrono::steady_clock::now();

    kpaths::KnowledgeGraph graph = kpaths::load_graph_file(opt.graph);
    auto queries = kpaths::resolve_queries(graph, kpaths::load_queries_file(opt.queries));
    kpaths::RetrievalConfig config = make_config(opt);

    kpaths::BatchResult batch = kpaths::retrieve_batch(graph, queries, config, opt.workers);

    {
        std::ofstream out(opt.out, std::ios::binary);
        if (!out) throw kpaths::Error(kpaths::ErrorCode::IoError, "cannot open " + opt.out);
        kpaths::write_results_jsonl(out, graph, batch.results, opt.timings);
    }

    std::map<std::string, std::size_t> modes;
    std::size_t total_paths = 0;
    for (const auto& result : batch.results) {
        modes[kpaths::query_mode_name(result.mode)]++;
        total_paths += result.paths.size();
    }
    std::cout << batch.results.size() << " queries, " << total_paths << " paths, "
              << batch.wall.count() / 1000 << " ms wall (" << opt.workers << " worker"
              << (opt.workers == 1 ? "" : "s") << ")\n";
    for (const auto& [mode, count] : modes) {
        std::cout << "  " << mode << ": " << count << '\n';
    }

    kpaths::RunManifest manifest;
    manifest.command = "retrieve";
    manifest.config = ordered_json{{"k", opt.k},
                                   {"max_hops", opt.max_hops},
                                   {"strategy", opt.strategy},
                                   {"diversity_filter", !opt.no_diversity_filter},
                                   {"overfetch", opt.overfetch},
                                   {"neighbor_cap", opt.neighbor_cap},
                                   {"workers", opt.workers},
                                   {"timings", opt.timings}};
    add_input_digest(manifest, opt.graph);
    add_input_digest(manifest, opt.queries);
    add_output_digest(manifest, opt.out);
    finalize_manifest(manifest, opt.manifest, opt.out, start);
    return 0;
}

std::map<std::string, std::string> load_definitions(const std::string& path) {
    std::map<std::string, std::string> definitions;
    std::ifstream in(path);
    if (!in) throw kpaths::Error(kpaths::ErrorCode::IoError, "cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw kpaths::Error(kpaths::ErrorCode::ParseError,
                                path + ":" + std::to_string(lineno) + ": expected name<TAB>definition");
        }
        definitions[kpaths::normalize_name(line.substr(0, tab))] = line.substr(tab + 1);
    }
    return definitions;
}

int cmd_verbalize(const VerbalizeOptionsCli& opt) {
    const auto start = std::chrono::steady_clock::now();
    kpaths::KnowledgeGraph graph = kpaths::load_graph_file(opt.graph);
    auto results = kpaths::read_results_jsonl_file(opt.paths);
    auto kind = kpaths::dataset_kind_from_name(opt.dataset);
    if (!kind) {
        throw kpaths::Error(kpaths::ErrorCode::ParseError, "unknown dataset kind '" + opt.dataset + "'");
    }

    std::map<std::string, std::string> definitions;
    if (!opt.definitions.empty()) definitions = load_definitions(opt.definitions);

    kpaths::VerbalizeOptions verbalize_options;
    verbalize_options.plain_join = opt.plain_join;

    std::ofstream jsonl_out;
    if (!opt.out.empty()) {
        jsonl_out.open(opt.out, std::ios::binary);
        if (!jsonl_out) throw kpaths::Error(kpaths::ErrorCode::IoError, "cannot open " + opt.out);
    }
    if (!opt.out_dir.empty()) fs::create_directories(opt.out_dir);

    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& result = results[i];
        auto u_id = graph.lookup_entity(result.query.u_name);
        auto v_id = graph.lookup_entity(result.query.v_name);

        std::vector<kpaths::VerbalizedPath> verbalized;
        verbalized.reserve(result.paths.size());
        for (const auto& path : result.paths) {
            verbalized.push_back(kpaths::verbalize_path(graph, path, u_id, v_id, verbalize_options));
        }

        std::optional<std::string> defs_block;
        if (!definitions.empty()) {
            std::string block;
            for (const std::string& name : {result.query.u_name, result.query.v_name}) {
                auto it = definitions.find(kpaths::normalize_name(name));
                if (it != definitions.end()) {
                    if (!block.empty()) block += '\n';
                    block += name + ": " + it->second;
                }
            }
            if (!block.empty()) defs_block = std::move(block);
        }

        std::string prompt = kpaths::build_prompt(result.query, verbalized, *kind, defs_block);
        if (jsonl_out.is_open()) {
            ordered_json record;
            record["query_id"] = i;
            record["prompt"] = prompt;
            jsonl_out << record.dump() << '\n';
        }
        if (!opt.out_dir.empty()) {
            std::ostringstream name;
            name << "prompt_" << std::setw(5) << std::setfill('0') << i << ".txt";
            std::ofstream file(fs::path(opt.out_dir) / name.str(), std::ios::binary);
            if (!file) {
                throw kpaths::Error(kpaths::ErrorCode::IoError, "cannot write prompt file " + name.str());
            }
            file << prompt;
        }
    }
    std::cout << results.size() << " prompts written\n";

    kpaths::RunManifest manifest;
    manifest.command = "verbalize";
    manifest.config = ordered_json{{"dataset", opt.dataset},
                                   {"definitions", opt.definitions},
                                   {"plain_join", opt.plain_join}};
    add_input_digest(manifest, opt.graph);
    add_input_digest(manifest, opt.paths);
    add_input_digest(manifest, opt.definitions);
    if (jsonl_out.is_open()) {
        jsonl_out.close();
        add_output_digest(manifest, opt.out);
    }
    finalize_manifest(manifest, opt.manifest, !opt.out.empty() ? opt.out : opt.out_dir, start);
    return 0;
}

int cmd_export(const ExportOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    kpaths::KnowledgeGraph graph = kpaths::load_graph_file(opt.graph);
    auto results = kpaths::read_results_jsonl_file(opt.paths);

    kpaths::ExportFormat format =
        opt.format == "jsonl" ? kpaths::ExportFormat::jsonl : kpaths::ExportFormat::tsv;
    auto maybe_project = [&](kpaths::Subgraph subgraph) {
        return opt.forward_only ? kpaths::forward_projection(subgraph, graph) : std::move(subgraph);
    };

    kpaths::Subgraph corpus = maybe_project(kpaths::paths_to_subgraph(results));
    if (!opt.out.empty()) {
        kpaths::export_subgraph_file(corpus, graph, opt.out, format);
        std::cout << "corpus subgraph: " << corpus.triplets.size() << " triplets, "
                  << corpus.nodes.size() << " nodes -> " << opt.out << '\n';
    }

    if (!opt.per_query_dir.empty()) {
        fs::create_directories(opt.per_query_dir);
        const char* ext = format == kpaths::ExportFormat::jsonl ? ".jsonl" : ".tsv";
        for (std::size_t i = 0; i < results.size(); ++i) {
            kpaths::Subgraph per_query = maybe_project(kpaths::paths_to_subgraph(results[i]));
            std::ostringstream name;
            name << "subgraph_" << std::setw(5) << std::setfill('0') << i << ext;
            kpaths::export_subgraph_file(per_query, graph, fs::path(opt.per_query_dir) / name.str(),
                                         format);
        }
        std::cout << results.size() << " per-query subgraphs -> " << opt.per_query_dir << '\n';
    }

    if (!opt.stats_out.empty()) {
        auto comparison = kpaths::stats(graph, corpus);
        std::ofstream out(opt.stats_out, std::ios::binary);
        if (!out) throw kpaths::Error(kpaths::ErrorCode::IoError, "cannot open " + opt.stats_out);
        out << kpaths::stats_json(comparison).dump(2) << '\n';
    }

    kpaths::RunManifest manifest;
    manifest.command = "export";
    manifest.config = ordered_json{{"format", opt.format}, {"forward_only", opt.forward_only}};
    add_input_digest(manifest, opt.graph);
    add_input_digest(manifest, opt.paths);
    add_output_digest(manifest, opt.out);
    add_output_digest(manifest, opt.stats_out);
    finalize_manifest(manifest, opt.manifest, !opt.out.empty() ? opt.out : opt.per_query_dir, start);
    return 0;
}

int cmd_stats(const StatsOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    kpaths::KnowledgeGraph graph = kpaths::load_graph_file(opt.graph);
    auto results = kpaths::read_results_jsonl_file(opt.paths);

    kpaths::Subgraph corpus = kpaths::paths_to_subgraph(results);
    auto comparison = kpaths::stats(graph, corpus);
    ordered_json json = kpaths::stats_json(comparison);

    if (!opt.out.empty()) {
        std::ofstream out(opt.out, std::ios::binary);
        if (!out) throw kpaths::Error(kpaths::ErrorCode::IoError, "cannot open " + opt.out);
        out << json.dump(2) << '\n';
    }
    std::cout << json.dump(2) << '\n';

    kpaths::RunManifest manifest;
    manifest.command = "stats";
    manifest.config = ordered_json::object();
    add_input_digest(manifest, opt.graph);
    add_input_digest(manifest, opt.paths);
    add_output_digest(manifest, opt.out);
    finalize_manifest(manifest, opt.manifest, opt.out, start);
    return 0;
}

int cmd_bench(const BenchOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    kpaths::KnowledgeGraph graph = kpaths::load_graph_file(opt.graph);
    auto queries = kpaths::resolve_queries(graph, kpaths::load_queries_file(opt.queries));

    auto k_grid = parse_int_list(opt.k_grid, "--k-grid");
    auto workers_list = parse_int_list(opt.workers_list, "--workers-list");
    auto strategies = parse_string_list(opt.strategies);
    if (opt.reps < 1) throw kpaths::Error(kpaths::ErrorCode::ParseError, "--reps must be >= 1");

    std::ofstream csv;
    if (!opt.out.empty()) {
        csv.open(opt.out, std::ios::binary);
        if (!csv) throw kpaths::Error(kpaths::ErrorCode::IoError, "cannot open " + opt.out);
    }
    const char* header = "strategy,k,workers,reps,min_seconds,median_seconds,total_paths";
    if (csv.is_open()) csv << header << '\n';
    std::cout << header << '\n';

    for (const std::string& strategy_name : strategies) {
        for (int workers : workers_list) {
            for (int k : k_grid) {
                std::vector<double> seconds;
                std::size_t total_paths = 0;
                for (int rep = 0; rep < opt.reps; ++rep) {
                    if (k == 0) {
                        // Base setting: no retrieval, resolution cost only.
                        const auto t0 = std::chrono::steady_clock::now();
                        auto resolved = kpaths::resolve_queries(graph, queries);
                        const auto t1 = std::chrono::steady_clock::now();
                        seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
                        total_paths = 0;
                        continue;
                    }
                    kpaths::RetrievalConfig config;
                    config.k = k;
                    config.max_hops = opt.max_hops;
                    config.strategy = parse_strategy(strategy_name);
                    auto batch = kpaths::retrieve_batch(graph, queries, config, workers);
                    seconds.push_back(std::chrono::duration<double>(batch.wall).count());
                    total_paths = 0;
                    for (const auto& result : batch.results) total_paths += result.paths.size();
                }
                std::sort(seconds.begin(), seconds.end());
                const double min_s = seconds.front();
                const double median_s = seconds[seconds.size() / 2];

                std::ostringstream row;
                row << strategy_name << ',' << k << ',' << workers << ',' << opt.reps << ','
                    << std::fixed << std::setprecision(4) << min_s << ',' << median_s << ','
                    << total_paths;
                if (csv.is_open()) csv << row.str() << '\n';
                std::cout << row.str() << '\n';
            }
        }
    }

    kpaths::RunManifest manifest;
    manifest.command = "bench";
    manifest.config = ordered_json{{"k_grid", opt.k_grid},
                                   {"strategies", opt.strategies},
                                   {"workers_list", opt.workers_list},
                                   {"reps", opt.reps},
                                   {"max_hops", opt.max_hops}};
    add_input_digest(manifest, opt.graph);
    add_input_digest(manifest, opt.queries);
    if (csv.is_open()) {
        csv.close();
        add_output_digest(manifest, opt.out);
    }
    finalize_manifest(manifest, opt.manifest, opt.out, start);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"K shortest diverse paths over multi-relational graphs"};
    app.set_version_flag("--version", kpaths::kToolVersion);
    app.require_subcommand(1);

    BuildOptions build_opt;
    auto* build = app.add_subcommand("build", "Build the augmented graph artifact from edge lists");
    build->add_option("--edges", build_opt.edges, "Base edge list (tsv or jsonl)")->required();
    build->add_option("--train-edges", build_opt.train_edges, "Observed training interaction edges");
    build->add_option("--entities", build_opt.entities, "Entity dictionary (name<TAB>kind)")->required();
    build->add_option("--relations", build_opt.relations,
                      "Relation dictionary (name<TAB>forward[<TAB>inverse])")
        ->required();
    build->add_option("--edges-format", build_opt.edges_format, "tsv, jsonl or auto (by extension)")
        ->check(CLI::IsMember({"auto", "tsv", "jsonl"}));
    build->add_option("--label-relations", build_opt.label_relations,
                      "Relation names carrying task labels (repeat or comma-separate)")
        ->delimiter(',');
    build->add_option("--leakage-queries", build_opt.leakage_queries,
                      "Query files whose pairs must not keep direct label edges");
    build->add_flag("--strict-leakage", build_opt.strict_leakage,
                    "Remove every edge between leakage pairs, not just label relations");
    build->add_flag("--reject-unresolved", build_opt.reject_unresolved,
                    "Fail on edge records naming unknown entities instead of counting them");
    build->add_option("--out", build_opt.out, "Graph artifact path")->required();
    build->add_option("--report", build_opt.report, "Augmentation report JSON path");
    build->add_option("--manifest", build_opt.manifest, "Manifest path (default: <out>.manifest.json)");

    RetrieveOptions retrieve_opt;
    auto* retrieve = app.add_subcommand("retrieve", "Retrieve diverse paths for a query batch");
    retrieve->add_option("--graph", retrieve_opt.graph, "Graph artifact")->required();
    retrieve->add_option("--queries", retrieve_opt.queries, "Query file (u<TAB>v[<TAB>label])")->required();
    retrieve->add_option("--k", retrieve_opt.k, "Paths per query");
    retrieve->add_option("--max-hops", retrieve_opt.max_hops, "Maximum path length");
    retrieve->add_option("--strategy", retrieve_opt.strategy, "Path selection strategy")
        ->check(CLI::IsMember({"kpaths", "shortest_unfiltered", "local_neighborhood"}));
    retrieve->add_flag("--no-diversity-filter", retrieve_opt.no_diversity_filter,
                       "Skip relation-sequence deduplication");
    retrieve->add_option("--overfetch", retrieve_opt.overfetch,
                         "Mine overfetch*k raw paths before filtering");
    retrieve->add_option("--neighbor-cap", retrieve_opt.neighbor_cap,
                         "Neighbors per entity for the local_neighborhood strategy");
    retrieve->add_option("--workers", retrieve_opt.workers, "Worker threads")
        ->envname("KPATHS_WORKERS");
    retrieve->add_flag("--timings", retrieve_opt.timings,
                       "Include per-query elapsed_ms in the output records");
    retrieve->add_option("--out", retrieve_opt.out, "Results JSONL path")->required();
    retrieve->add_option("--manifest", retrieve_opt.manifest,
                         "Manifest path (default: <out>.manifest.json)");

    VerbalizeOptionsCli verbalize_opt;
    auto* verbalize = app.add_subcommand("verbalize", "Render retrieved paths into prompts");
    verbalize->add_option("--graph", verbalize_opt.graph, "Graph artifact")->required();
    verbalize->add_option("--paths", verbalize_opt.paths, "Results JSONL from retrieve")->required();
    verbalize->add_option("--dataset", verbalize_opt.dataset, "Answer format family")
        ->check(CLI::IsMember({"severity", "indication", "open_interaction"}));
    verbalize->add_option("--definitions", verbalize_opt.definitions,
                          "Optional definitions file (name<TAB>definition)");
    verbalize->add_flag("--plain-join", verbalize_opt.plain_join,
                        "Join hops with a bare \" and \" (no comma before passive endings)");
    verbalize->add_option("--out", verbalize_opt.out, "Prompts JSONL path");
    verbalize->add_option("--out-dir", verbalize_opt.out_dir, "One prompt text file per query");
    verbalize->add_option("--manifest", verbalize_opt.manifest, "Manifest path");

    ExportOptions export_opt;
    auto* exp = app.add_subcommand("export", "Export subgraphs built from retrieved paths");
    exp->add_option("--graph", export_opt.graph, "Graph artifact")->required();
    exp->add_option("--paths", export_opt.paths, "Results JSONL from retrieve")->required();
    exp->add_option("--format", export_opt.format, "tsv or jsonl")
        ->check(CLI::IsMember({"tsv", "jsonl"}));
    exp->add_flag("--forward-only", export_opt.forward_only,
                  "Project inverse edges onto their forward form");
    exp->add_option("--out", export_opt.out, "Corpus-level subgraph path");
    exp->add_option("--per-query", export_opt.per_query_dir, "Directory for per-query subgraphs");
    exp->add_option("--stats", export_opt.stats_out, "Write before/after stats JSON");
    exp->add_option("--manifest", export_opt.manifest, "Manifest path");

    StatsOptions stats_opt;
    auto* stats_cmd = app.add_subcommand("stats", "Size statistics of the retrieved subgraph");
    stats_cmd->add_option("--graph", stats_opt.graph, "Graph artifact")->required();
    stats_cmd->add_option("--paths", stats_opt.paths, "Results JSONL from retrieve")->required();
    stats_cmd->add_option("--out", stats_opt.out, "Stats JSON path");
    stats_cmd->add_option("--manifest", stats_opt.manifest, "Manifest path");

    BenchOptions bench_opt;
    auto* bench = app.add_subcommand("bench", "Time retrieval across a configuration grid");
    bench->add_option("--graph", bench_opt.graph, "Graph artifact")->required();
    bench->add_option("--queries", bench_opt.queries, "Query file")->required();
    bench->add_option("--k-grid", bench_opt.k_grid, "Comma-separated k values (0 = no retrieval)");
    bench->add_option("--strategies", bench_opt.strategies, "Comma-separated strategies");
    bench->add_option("--workers-list", bench_opt.workers_list, "Comma-separated worker counts");
    bench->add_option("--reps", bench_opt.reps, "Repetitions per cell");
    bench->add_option("--max-hops", bench_opt.max_hops, "Maximum path length");
    bench->add_option("--out", bench_opt.out, "CSV output path");
    bench->add_option("--manifest", bench_opt.manifest, "Manifest path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build(build_opt);
        if (retrieve->parsed()) return cmd_retrieve(retrieve_opt);
        if (verbalize->parsed()) return cmd_verbalize(verbalize_opt);
        if (exp->parsed()) return cmd_export(export_opt);
        if (stats_cmd->parsed()) return cmd_stats(stats_opt);
        if (bench->parsed()) return cmd_bench(bench_opt);
    } catch (const kpaths::Error& e) {
        std::cerr << "kpaths: " << kpaths::error_code_name(e.code()) << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "kpaths: error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
