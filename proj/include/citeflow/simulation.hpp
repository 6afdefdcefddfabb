#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "citeflow/corpus.hpp"
#include "citeflow/error.hpp"
#include "citeflow/graph.hpp"
#include "citeflow/models.hpp"
#include "citeflow/pools.hpp"
#include "citeflow/random.hpp"
#include "citeflow/stats.hpp"
#include "citeflow/tbs.hpp"

namespace citeflow {

struct RunCounters {
    std::size_t relay_events = 0;
    std::size_t copy_events = 0;
    std::size_t fallback_events = 0;
    std::size_t dropped_edges = 0;
    std::size_t short_papers = 0;  // got fewer than m targets
    std::size_t failed_steps = 0;  // strategy raised; paper entered with no references
    std::size_t papers = 0;
    std::size_t edges = 0;

    friend bool operator==(const RunCounters&, const RunCounters&) = default;
};

struct SimulationRun {
    std::uint64_t seed = 0;
    ModelParams params;
    YearRange warmup_range;
    YearRange sim_range;
    RunCounters counters;
};

struct SimulationResult {
    CitationGraph graph;
    SimulationRun run;
};

/// Year range a graph needs to hold the corpus and everything simulated
/// after it.
inline YearRange graph_years_for(const Corpus& corpus, YearRange warmup, YearRange sim) {
    const auto span = year_span(corpus);
    YearRange r{std::min(warmup.first, sim.first), std::max(warmup.last, sim.last)};
    if (!span.empty()) {
        r.first = std::min(r.first, span.first);
        r.last = std::max(r.last, span.last);
    }
    return r;
}

/// The corpus papers published up to the end of the warm-up (earlier papers
/// included) with the citations among them.
inline CitationGraph build_warmup(const Corpus& corpus, YearRange warmup, YearRange graph_years) {
    if (warmup.empty()) throw Error("build_warmup: empty warm-up range");
    auto graph = build_graph(corpus, warmup.last, graph_years);
    if (graph.size() == 0) throw Error("build_warmup: no papers up to " + std::to_string(warmup.last));
    return graph;
}

inline CitationGraph build_warmup(const Corpus& corpus, YearRange warmup) {
    return build_warmup(corpus, warmup, graph_years_for(corpus, warmup, warmup));
}

/// Grows `warmup_graph` year by year through sim_range. In each year the
/// empirical number of papers per field arrives in a seeded random order and
/// each picks its targets with params.kind.
inline SimulationResult run(const CitationGraph& warmup_graph, const EmpiricalStats& stats, const ModelParams& params,
                            YearRange warmup_range, YearRange sim_range, std::uint64_t seed) {
    params.validate();
    if (sim_range.empty()) throw Error("run: empty simulation range");
    if (!(warmup_range.last < sim_range.first)) throw Error("run: warm-up range must precede the simulation range");
    const auto& gy = warmup_graph.year_range();
    if (!gy.contains(sim_range.first) || !gy.contains(sim_range.last)) {
        throw Error("run: graph year range does not cover the simulation range");
    }
    for (PaperId v = 0; v < warmup_graph.size(); ++v) {
        if (warmup_graph.year(v) >= sim_range.first) throw Error("run: warm-up graph holds papers inside sim_range");
    }

    SimulationResult out{warmup_graph, SimulationRun{seed, params, warmup_range, sim_range, {}}};
    auto& graph = out.graph;
    auto& counters = out.run.counters;
    auto pools = CitationPools::from_graph(graph);
    Random rng(seed);
    std::vector<Field> arrivals;
    for (Year y = sim_range.first; y <= sim_range.last; ++y) {
        arrivals.clear();
        for (auto f : kModelFields) arrivals.insert(arrivals.end(), stats.arrivals_in(y, f), f);
        shuffle(rng, arrivals);
        for (auto f : arrivals) {
            const IncomingPaper incoming{f, y};
            StepResult step;
            try {
                step = select_targets(ModelContext{graph, stats, pools, params}, incoming, rng);
            } catch (const InvariantError&) {
                throw;
            } catch (const Error&) {
                ++counters.failed_steps;
            }
            const PaperId id = graph.add_paper(y, f, Origin::simulated);
            for (auto t : step.targets) graph.add_citation(id, t);
            pools.on_paper_added(graph, id);
            counters.relay_events += step.counters.relay_events;
            counters.copy_events += step.counters.copy_events;
            counters.fallback_events += step.counters.fallback_events;
            counters.dropped_edges += step.counters.dropped_edges;
            if (step.targets.size() < params.m) ++counters.short_papers;
            ++counters.papers;
            counters.edges += step.targets.size();
        }
    }
    return out;
}

struct EvaluationTable {
    std::array<double, 9> l1{};  // kCitationTypes order
    double overall_mean = 0.0;
    double overall_weighted = 0.0;  // weighted by empirical citations per type
};

inline EvaluationTable evaluate(const std::vector<Signature>& simulated, const std::vector<Signature>& empirical) {
    EvaluationTable table;
    double weighted = 0.0;
    std::uint64_t weight = 0;
    for (std::size_t k = 0; k < kCitationTypes.size(); ++k) {
        const auto* s = find_signature(simulated, kCitationTypes[k]);
        const auto* e = find_signature(empirical, kCitationTypes[k]);
        if (!s || !e) throw Error("evaluate: missing signature " + kCitationTypes[k].name());
        table.l1[k] = l1_distance(*s, *e);
        table.overall_mean += table.l1[k];
        weighted += table.l1[k] * static_cast<double>(e->total());
        weight += e->total();
    }
    table.overall_mean /= static_cast<double>(kCitationTypes.size());
    table.overall_weighted = weight ? weighted / static_cast<double>(weight) : 0.0;
    return table;
}

inline EvaluationTable evaluate(const CitationGraph& simulated, const CitationGraph& empirical, const Bucketing& b) {
    return evaluate(all_signatures(simulated, b), all_signatures(empirical, b));
}

struct SweepRow {
    ModelParams params;
    std::uint64_t seed = 0;
    std::optional<EvaluationTable> table;
    RunCounters counters;
    std::string error;  // non-empty when the run failed
};

/// One independent run per grid point, seeded base_seed + index, evaluated
/// against `empirical`. Rows follow grid order regardless of `threads`.
inline std::vector<SweepRow> sweep(const CitationGraph& warmup_graph, const EmpiricalStats& stats,
                                   const std::vector<ModelParams>& grid, YearRange warmup_range, YearRange sim_range,
                                   std::uint64_t base_seed, const std::vector<Signature>& empirical,
                                   const Bucketing& b, unsigned threads = 1) {
    if (grid.empty()) throw Error("sweep: empty parameter grid");
    std::vector<SweepRow> rows(grid.size());
    auto work = [&](std::size_t i) {
        auto& row = rows[i];
        row.params = grid[i];
        row.seed = base_seed + i;
        try {
            auto result = run(warmup_graph, stats, grid[i], warmup_range, sim_range, row.seed);
            row.counters = result.run.counters;
            row.table = evaluate(all_signatures(result.graph, b), empirical);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) work(i);
        return rows;
    }
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i;
                {
                    std::lock_guard lock(mu);
                    if (next >= grid.size()) return;
                    i = next++;
                }
                work(i);
            }
        });
    }
    pool.clear();
    return rows;
}

}  // namespace citeflow
