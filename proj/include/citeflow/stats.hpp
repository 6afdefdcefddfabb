#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "citeflow/corpus.hpp"
#include "citeflow/error.hpp"
#include "citeflow/field.hpp"
#include "citeflow/random.hpp"

namespace citeflow {

/// Probability over the three model fields, indexed by index_of(Field).
using FieldDistribution = std::array<double, 3>;

struct EmpiricalStats {
    /// Papers per (year, field) over the whole corpus.
    std::map<std::pair<Year, Field>, std::size_t> arrivals;
    /// Target-field distribution of warm-up citations, conditional on the
    /// citing paper's field. Absent when that field made no warm-up citation
    /// to a model field.
    std::array<std::optional<FieldDistribution>, 3> dest_field_dist{};
    /// Papers of each field published up to the end of the warm-up, by
    /// warm-up in-degree descending, ties by ascending id.
    std::array<std::vector<PaperId>, 3> top_cited{};
    /// Mean number of references over warm-up papers that cite anything.
    double mean_out_degree = 0.0;

    std::size_t arrivals_in(Year y, Field f) const {
        auto it = arrivals.find({y, f});
        return it == arrivals.end() ? 0 : it->second;
    }
};

inline EmpiricalStats compute_stats(const Corpus& corpus, YearRange warmup) {
    if (warmup.empty()) throw Error("compute_stats: empty warm-up range");
    EmpiricalStats stats;
    std::size_t warm_papers = 0;
    for (const auto& p : corpus.papers) {
        ++stats.arrivals[{p.year, p.field}];
        if (warmup.contains(p.year)) ++warm_papers;
    }
    if (warm_papers == 0) throw Error("compute_stats: no papers inside the warm-up range");

    std::array<std::array<std::size_t, 3>, 3> counts{};
    std::vector<std::size_t> in_deg(corpus.size(), 0);
    std::vector<std::size_t> out_deg(corpus.size(), 0);
    for (const auto& e : corpus.edges) {
        const auto& src = corpus.papers[e.src];
        const auto& dst = corpus.papers[e.dst];
        if (src.year > warmup.last) continue;
        ++in_deg[e.dst];
        if (!warmup.contains(src.year)) continue;
        ++out_deg[e.src];
        if (is_model_field(src.field) && is_model_field(dst.field)) {
            ++counts[index_of(src.field)][index_of(dst.field)];
        }
    }
    for (auto f : kModelFields) {
        const auto& row = counts[index_of(f)];
        const std::size_t total = row[0] + row[1] + row[2];
        if (total == 0) continue;
        FieldDistribution dist{};
        for (std::size_t j = 0; j < 3; ++j) dist[j] = static_cast<double>(row[j]) / static_cast<double>(total);
        stats.dest_field_dist[index_of(f)] = dist;
    }

    std::size_t citing = 0, refs = 0;
    for (std::size_t v = 0; v < corpus.size(); ++v) {
        const auto& p = corpus.papers[v];
        if (p.year > warmup.last) continue;
        if (out_deg[v] > 0) {
            ++citing;
            refs += out_deg[v];
        }
        if (is_model_field(p.field)) stats.top_cited[index_of(p.field)].push_back(static_cast<PaperId>(v));
    }
    stats.mean_out_degree = citing ? static_cast<double>(refs) / static_cast<double>(citing) : 0.0;
    for (auto& list : stats.top_cited) {
        std::stable_sort(list.begin(), list.end(),
                         [&](PaperId a, PaperId b) { return in_deg[a] > in_deg[b]; });
    }
    return stats;
}

struct SelfFieldShare {
    double self = 0.0;
    double non_self = 0.0;
    std::size_t edges = 0;
};

/// Per citing field, the share of citations whose target has the same field.
/// Fields without outgoing citations are absent.
inline std::map<Field, SelfFieldShare> self_field_proportions(const Corpus& corpus) {
    std::array<std::size_t, kNumFields> same{}, all{};
    for (const auto& e : corpus.edges) {
        const auto sf = corpus.papers[e.src].field;
        ++all[index_of(sf)];
        if (corpus.papers[e.dst].field == sf) ++same[index_of(sf)];
    }
    std::map<Field, SelfFieldShare> out;
    for (auto f : kModelFields) {
        const auto n = all[index_of(f)];
        if (n == 0) continue;
        const double s = static_cast<double>(same[index_of(f)]) / static_cast<double>(n);
        out[f] = SelfFieldShare{s, static_cast<double>(n - same[index_of(f)]) / static_cast<double>(n), n};
    }
    return out;
}

/// Draws the destination field for a citation made by a `src` paper.
/// One uniform01 draw.
template <RandomSource R>
Field sample_dest_field(Field src, const EmpiricalStats& stats, R& rng) {
    if (!is_model_field(src) || !stats.dest_field_dist[index_of(src)]) {
        throw Error("no destination-field distribution for " + std::string(label(src)));
    }
    const auto& dist = *stats.dest_field_dist[index_of(src)];
    const double u = uniform01(rng);
    double acc = 0.0;
    Field last = src;
    for (auto f : kModelFields) {
        const double p = dist[index_of(f)];
        if (p <= 0.0) continue;
        acc += p;
        last = f;
        if (u < acc) return f;
    }
    return last;
}

}  // namespace citeflow
