// Compares the serial reference kernel against the OpenMP batch kernel on a
// synthetic power-law graph: wall time per worker count, speedup over serial,
// and a result-equality check (the kernels must agree bit for bit).

#include "kpaths/augment.hpp"
#include "kpaths/retrieval.hpp"

#include "support/synthetic.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace kpaths;

namespace {

bool same_paths(const std::vector<RetrievalResult>& a, const std::vector<RetrievalResult>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].mode != b[i].mode || a[i].paths != b[i].paths) return false;
    }
    return true;
}

double run_once(const KnowledgeGraph& graph, const std::vector<QueryPair>& queries,
                const RetrievalConfig& config, int workers, std::vector<RetrievalResult>* out) {
    auto batch = workers <= 1 ? retrieve_batch_serial(graph, queries, config)
                              : retrieve_batch(graph, queries, config, workers);
    if (out) *out = std::move(batch.results);
    return std::chrono::duration<double>(batch.wall).count();
}

} // namespace

int main(int argc, char** argv) {
    int nodes = 5000;
    int edges = 100000;
    int query_count = 1000;
    int k = 10;
    int max_hops = 3;
    int reps = 3;
    std::string workers_csv = "1,2,4,8";
    bool smoke = false;

    CLI::App app{"Serial vs OpenMP batch retrieval"};
    app.add_option("--nodes", nodes, "Entities in the synthetic graph");
    app.add_option("--edges", edges, "Forward edges before inverse augmentation");
    app.add_option("--queries", query_count, "Query pairs per run");
    app.add_option("--k", k, "Paths per query");
    app.add_option("--max-hops", max_hops, "Maximum path length");
    app.add_option("--reps", reps, "Repetitions per worker count");
    app.add_option("--workers", workers_csv, "Comma-separated worker counts");
    app.add_flag("--smoke", smoke, "Tiny sizes, correctness check only");
    CLI11_PARSE(app, argc, argv);

    if (smoke) {
        nodes = 300;
        edges = 3000;
        query_count = 150;
        reps = 1;
    }

    std::printf("building synthetic graph: %d nodes, %d forward edges...\n", nodes, edges);
    auto graph = add_inverses(testsupport::power_law_graph(nodes, edges, 8, 94111));
    auto queries = testsupport::sample_queries(graph, query_count, 272);
    std::printf("graph ready: %zu triplets augmented, %zu queries, k=%d, max_hops=%d\n",
                graph.triplet_count(), queries.size(), k, max_hops);

    RetrievalConfig config;
    config.k = k;
    config.max_hops = max_hops;

    std::vector<RetrievalResult> reference;
    std::vector<double> serial_times;
    for (int rep = 0; rep < reps; ++rep) {
        serial_times.push_back(run_once(graph, queries, config, 1, rep == 0 ? &reference : nullptr));
    }
    std::sort(serial_times.begin(), serial_times.end());
    const double serial_min = serial_times.front();

    std::printf("%-8s %-8s %-10s %-10s %-9s %s\n", "kernel", "workers", "min_s", "median_s",
                "speedup", "match");
    std::printf("%-8s %-8d %-10.3f %-10.3f %-9.2f %s\n", "serial", 1, serial_min,
                serial_times[serial_times.size() / 2], 1.0, "-");

#ifndef _OPENMP
    std::printf("openmp unavailable in this build; serial numbers only\n");
    (void)workers_csv;
    return 0;
#else
    bool all_match = true;
    std::stringstream ss(workers_csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        const int workers = std::stoi(token);
        if (workers <= 1) continue;

        std::vector<double> times;
        std::vector<RetrievalResult> results;
        for (int rep = 0; rep < reps; ++rep) {
            times.push_back(run_once(graph, queries, config, workers, rep == 0 ? &results : nullptr));
        }
        std::sort(times.begin(), times.end());
        const bool match = same_paths(reference, results);
        all_match = all_match && match;
        std::printf("%-8s %-8d %-10.3f %-10.3f %-9.2f %s\n", "openmp", workers, times.front(),
                    times[times.size() / 2], serial_min / times.front(), match ? "yes" : "NO");
    }
    if (!all_match) {
        std::printf("kernel mismatch: parallel results differ from the serial reference\n");
        return 1;
    }
    return 0;
#endif
}
