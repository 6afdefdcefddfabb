#pragma once

// Incrementally maintained cross-field citation pools used by the models
// that restrict out-field destinations to papers already reached by the
// incoming paper's field.

#include <array>
#include <cstdint>
#include <vector>

#include "citeflow/field.hpp"
#include "citeflow/graph.hpp"
#include "citeflow/weighted.hpp"

namespace citeflow {

class CitationPools {
public:
    /// cross(S, F): papers of field F cited by at least one paper of field S (S != F).
    const WeightedSet<PaperId>& cross(Field citing, Field cited) const {
        return sets_[slot(Kind::cross, citing, cited)];
    }

    /// reached(S, F): papers of field F referenced by some S paper that has
    /// itself received an in-field citation from S (S != F).
    const WeightedSet<PaperId>& reached(Field citing, Field cited) const {
        return sets_[slot(Kind::reached, citing, cited)];
    }

    static CitationPools from_graph(const CitationGraph& graph) {
        CitationPools pools;
        for (PaperId u = 0; u < graph.size(); ++u) pools.on_paper_added(graph, u);
        return pools;
    }

    /// Folds in the citations made by `u`, which must be the newest paper
    /// whose references have not yet been observed.
    void on_paper_added(const CitationGraph& graph, PaperId u) {
        if (graph.size() > memberships_.size()) {
            memberships_.resize(graph.size());
            expanded_.resize(graph.size(), 0);
        }
        const Field s = graph.field(u);
        for (auto v : graph.refs(u)) {
            refresh(graph, v);
            const Field f = graph.field(v);
            if (!is_model_field(s) || !is_model_field(f)) continue;
            if (f != s) {
                insert(slot(Kind::cross, s, f), graph, v);
            } else if (!expanded_[v]) {
                expanded_[v] = 1;
                for (auto r : graph.refs(v)) {
                    const Field rf = graph.field(r);
                    if (is_model_field(rf) && rf != s) insert(slot(Kind::reached, s, rf), graph, r);
                }
            }
        }
    }

private:
    enum class Kind : std::uint8_t { cross = 0, reached = 1 };

    static std::size_t slot(Kind k, Field citing, Field cited) {
        return static_cast<std::size_t>(k) * 9 + index_of(citing) * 3 + index_of(cited);
    }

    void insert(std::size_t s, const CitationGraph& graph, PaperId v) {
        if (sets_[s].insert(v, graph.in_degree(v) + 1)) memberships_[v].push_back(static_cast<std::uint8_t>(s));
    }

    void refresh(const CitationGraph& graph, PaperId v) {
        for (auto s : memberships_[v]) sets_[s].set_weight(v, graph.in_degree(v) + 1);
    }

    std::array<WeightedSet<PaperId>, 18> sets_{};
    std::vector<std::vector<std::uint8_t>> memberships_;
    std::vector<std::uint8_t> expanded_;
};

}  // namespace citeflow
