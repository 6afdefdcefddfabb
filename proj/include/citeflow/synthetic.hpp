#pragma once

// Synthetic three-field corpora for tests, benchmarks and smoke runs. The
// defaults follow the arXiv shape: PHY dominates the paper count, CS is the
// smallest and most outward-citing field, and yearly output grows.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "citeflow/corpus.hpp"
#include "citeflow/field.hpp"
#include "citeflow/graph.hpp"
#include "citeflow/random.hpp"

namespace citeflow {

struct SyntheticSpec {
    std::size_t papers = 20000;
    YearRange years{1995, 2017};
    double growth = 1.08;                                  // yearly output ratio
    std::array<double, 3> field_mix{0.115, 0.231, 0.654};  // CS, MA, PHY
    std::array<double, 3> self_share{0.8408, 0.8950, 0.9712};
    std::size_t refs_min = 3;
    std::size_t refs_max = 14;
    double recent_bias = 0.5;  // chance a reference goes to the last few years uniformly
    int recent_window = 3;
    std::uint64_t seed = 1;
};

inline Corpus make_synthetic_corpus(const SyntheticSpec& spec) {
    if (spec.years.empty() || spec.papers == 0) throw Error("synthetic corpus: empty spec");
    Random rng(spec.seed);
    const auto n_years = static_cast<std::size_t>(spec.years.last - spec.years.first + 1);
    std::vector<double> share(n_years);
    double total = 0.0;
    for (std::size_t i = 0; i < n_years; ++i) total += share[i] = std::pow(spec.growth, static_cast<double>(i));
    std::vector<std::size_t> per_year(n_years);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n_years; ++i) {
        per_year[i] = static_cast<std::size_t>(std::floor(share[i] / total * static_cast<double>(spec.papers)));
        assigned += per_year[i];
    }
    per_year.back() += spec.papers - assigned;

    auto pick = [&](const std::array<double, 3>& w) {
        const double u = uniform01(rng) * (w[0] + w[1] + w[2]);
        if (u < w[0]) return Field::CS;
        if (u < w[0] + w[1]) return Field::MA;
        return Field::PHY;
    };

    CitationGraph graph(spec.years);
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<CorpusPaper> papers;
    papers.reserve(spec.papers);
    std::vector<PaperId> chosen;
    for (std::size_t yi = 0; yi < n_years; ++yi) {
        const Year y = spec.years.first + static_cast<Year>(yi);
        for (std::size_t k = 0; k < per_year[yi]; ++k) {
            const Field f = pick(spec.field_mix);
            const auto n_refs = spec.refs_min + uniform_below(rng, spec.refs_max - spec.refs_min + 1);
            chosen.clear();
            for (std::size_t r = 0; r < n_refs; ++r) {
                Field tf = f;
                if (!bernoulli(rng, spec.self_share[index_of(f)])) {
                    auto w = spec.field_mix;
                    w[index_of(f)] = 0.0;
                    tf = pick(w);
                }
                const std::size_t count = graph.candidate_count(tf, y);
                if (count == 0) continue;
                PaperId v;
                if (bernoulli(rng, spec.recent_bias)) {
                    std::size_t lo = graph.candidate_count(tf, y - spec.recent_window);
                    if (lo == count) lo = 0;
                    v = graph.field_papers(tf)[lo + uniform_below(rng, count - lo)];
                } else {
                    v = graph.preferential_sample(tf, y, rng);
                }
                if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) chosen.push_back(v);
            }
            const PaperId id = graph.add_paper(y, f);
            for (auto v : chosen) {
                graph.add_citation(id, v);
                edges.emplace_back("p" + std::to_string(id), "p" + std::to_string(v));
            }
            papers.push_back(CorpusPaper{"p" + std::to_string(id), y, f, ""});
        }
    }
    return make_corpus(std::move(papers), edges);
}

}  // namespace citeflow
