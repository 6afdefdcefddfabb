#pragma once

// Destination-selection strategies for an incoming paper's outgoing edges.
//
// Every strategy draws the field of each citation from the empirical
// conditional field distribution and then places it on a concrete paper:
//
//   PA     preferential attachment inside the drawn field
//   ICP    PA plus copying the same-field references of in-field picks
//   ACP    PA plus copying all references of every pick
//   RACP   ACP, but out-field picks come from papers the incoming field
//          has already cited (or that field's top-cited papers)
//   IIPRC  relay for in-field picks; out-field picks come from the
//          out-field references of this paper's in-field picks
//   OIPRC  IIPRC plus relay on the out-field picks
//   BIPRC  PA plus relay on every pick
//   CIPRC  in-field picks relay and copy (ICP rule), out-field picks as PA
//
// Selection never mutates the graph; the caller inserts the returned edges.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citeflow/error.hpp"
#include "citeflow/field.hpp"
#include "citeflow/graph.hpp"
#include "citeflow/pools.hpp"
#include "citeflow/random.hpp"
#include "citeflow/stats.hpp"

namespace citeflow {

enum class ModelKind : std::uint8_t { PA, ICP, ACP, RACP, IIPRC, OIPRC, BIPRC, CIPRC };

inline constexpr std::array<ModelKind, 8> kAllModels{ModelKind::PA,    ModelKind::ICP,   ModelKind::ACP,
                                                     ModelKind::RACP,  ModelKind::IIPRC, ModelKind::OIPRC,
                                                     ModelKind::BIPRC, ModelKind::CIPRC};

constexpr std::string_view name(ModelKind k) {
    switch (k) {
        case ModelKind::PA: return "PA";
        case ModelKind::ICP: return "ICP";
        case ModelKind::ACP: return "ACP";
        case ModelKind::RACP: return "RACP";
        case ModelKind::IIPRC: return "IIPRC";
        case ModelKind::OIPRC: return "OIPRC";
        case ModelKind::BIPRC: return "BIPRC";
        case ModelKind::CIPRC: return "CIPRC";
    }
    return "PA";
}

/// Case-insensitive model name.
inline std::optional<ModelKind> parse_model(std::string_view s) {
    std::string upper(s);
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (auto k : kAllModels) {
        if (name(k) == upper) return k;
    }
    return std::nullopt;
}

constexpr bool uses_relay(ModelKind k) {
    return k == ModelKind::IIPRC || k == ModelKind::OIPRC || k == ModelKind::BIPRC || k == ModelKind::CIPRC;
}
constexpr bool uses_copying(ModelKind k) {
    return k == ModelKind::ICP || k == ModelKind::ACP || k == ModelKind::RACP || k == ModelKind::CIPRC;
}

/// Where IIPRC/OIPRC look first for an out-field destination.
enum class OutfieldPool : std::uint8_t {
    per_paper,  // out-field references of this paper's own in-field picks
    global,     // out-field references of every in-field-cited paper so far
};

struct ModelParams {
    ModelKind kind = ModelKind::PA;
    std::size_t m = 8;
    double theta_in = 1.0;
    double lambda_in = 1.0;
    double theta_out = 1.0;
    double lambda_out = 1.0;
    std::size_t max_relay_depth = 100;
    std::size_t top_cited_k = 100;
    OutfieldPool outfield_pool = OutfieldPool::per_paper;

    void validate() const {
        if (m < 1) throw ConfigError("m", "must be >= 1");
        if (!(theta_in >= 0.0 && theta_in <= 1.0)) throw ConfigError("theta_in", "must lie in [0, 1]");
        if (!(theta_out >= 0.0 && theta_out <= 1.0)) throw ConfigError("theta_out", "must lie in [0, 1]");
        if (!(lambda_in >= 0.0) || !std::isfinite(lambda_in)) throw ConfigError("lambda_in", "must be >= 0");
        if (!(lambda_out >= 0.0) || !std::isfinite(lambda_out)) throw ConfigError("lambda_out", "must be >= 0");
        if (max_relay_depth < 1) throw ConfigError("max_relay_depth", "must be >= 1");
        if (top_cited_k < 1) throw ConfigError("top_cited_k", "must be >= 1");
    }

    /// Upper bound on sampling phases per incoming paper.
    std::size_t attempt_cap() const { return 50 * m; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct IncomingPaper {
    Field field = Field::CS;
    Year year = 0;
};

struct StepCounters {
    std::size_t relay_events = 0;     // relay hops taken
    std::size_t copy_events = 0;      // targets added by copying
    std::size_t fallback_events = 0;  // secondary pool used for an out-field pick
    std::size_t dropped_edges = 0;    // out-field slot with no candidate at all

    StepCounters& operator+=(const StepCounters& o) {
        relay_events += o.relay_events;
        copy_events += o.copy_events;
        fallback_events += o.fallback_events;
        dropped_edges += o.dropped_edges;
        return *this;
    }
};

struct StepResult {
    std::vector<PaperId> targets;
    StepCounters counters;
};

/// Read-only state a strategy consults.
struct ModelContext {
    const CitationGraph& graph;
    const EmpiricalStats& stats;
    const CitationPools& pools;
    const ModelParams& params;
};

enum class CopyMode : std::uint8_t { same_field_only, all_fields };

/// Up to `budget` references of `dest` in reference order; same_field_only
/// keeps those sharing dest's field.
inline std::vector<PaperId> copy_references(const CitationGraph& graph, PaperId dest, CopyMode mode,
                                            std::size_t budget) {
    std::vector<PaperId> out;
    const Field f = graph.field(dest);
    for (auto r : graph.refs(dest)) {
        if (out.size() >= budget) break;
        if (mode == CopyMode::same_field_only && graph.field(r) != f) continue;
        if (std::find(out.begin(), out.end(), r) != out.end()) continue;
        out.push_back(r);
    }
    return out;
}

struct RelayOutcome {
    PaperId target = 0;
    std::size_t hops = 0;
};

/// Walks from v0 towards younger citers while the current paper is judged
/// obsolete (probability 1 - exp(-lambda * age)) and the relay succeeds
/// (probability theta). Children are restricted to `constraint` (if set) and
/// to papers published no later than t_now, and chosen by in_degree + 1.
/// theta == 0 returns v0 without drawing.
template <RandomSource R>
RelayOutcome relay_walk(const CitationGraph& graph, PaperId v0, Year t_now, double theta, double lambda,
                        std::optional<Field> constraint, R& rng, std::size_t max_depth) {
    const Year y0 = graph.year(v0);
    if (t_now < y0) {
        throw Error("relay_walk: t_now " + std::to_string(t_now) + " precedes paper year " + std::to_string(y0));
    }
    RelayOutcome out{v0, 0};
    if (theta == 0.0) return out;
    std::vector<PaperId> kids;
    while (out.hops < max_depth) {
        const double age = static_cast<double>(t_now - graph.year(out.target));
        if (!bernoulli(rng, 1.0 - std::exp(-lambda * age))) break;
        if (!bernoulli(rng, theta)) break;
        kids.clear();
        for (auto c : graph.children(out.target)) {
            if (graph.year(c) > t_now) continue;
            if (constraint && graph.field(c) != *constraint) continue;
            kids.push_back(c);
        }
        if (kids.empty()) break;
        out.target = preferential_choice(graph, kids, rng);
        ++out.hops;
    }
    return out;
}

namespace detail {

class Selection {
public:
    explicit Selection(std::size_t m) : m_(m) { targets_.reserve(m); }

    bool full() const noexcept { return targets_.size() >= m_; }
    bool contains(PaperId v) const { return std::find(targets_.begin(), targets_.end(), v) != targets_.end(); }

    /// Adds v unless present or full; returns whether it was added.
    bool add(PaperId v) {
        if (full() || contains(v)) return false;
        targets_.push_back(v);
        return true;
    }

    const std::vector<PaperId>& targets() const noexcept { return targets_; }
    std::vector<PaperId> take() { return std::move(targets_); }

private:
    std::size_t m_;
    std::vector<PaperId> targets_;
};

template <RandomSource R>
RelayOutcome relay(const ModelContext& ctx, PaperId v, Year t_now, bool in_field, Field constraint, R& rng) {
    const auto& p = ctx.params;
    return relay_walk(ctx.graph, v, t_now, in_field ? p.theta_in : p.theta_out,
                      in_field ? p.lambda_in : p.lambda_out, constraint, rng, p.max_relay_depth);
}

/// Preferential pick from field f, or nullopt if f has no eligible paper.
template <RandomSource R>
std::optional<PaperId> sample_in_field(const ModelContext& ctx, Field f, Year year, R& rng) {
    if (ctx.graph.candidate_count(f, year) == 0) return std::nullopt;
    return ctx.graph.preferential_sample(f, year, rng);
}

template <RandomSource R>
std::optional<PaperId> sample_set(const ModelContext& ctx, const WeightedSet<PaperId>& set, Year year, R& rng) {
    if (set.empty()) return std::nullopt;
    const PaperId v = set.sample(rng);
    if (ctx.graph.year(v) > year) return std::nullopt;
    return v;
}

/// Appends copied references of `dest` until the selection is full.
inline void copy_into(const ModelContext& ctx, Selection& sel, PaperId dest, CopyMode mode, StepCounters& counters) {
    for (auto r : copy_references(ctx.graph, dest, mode, std::numeric_limits<std::size_t>::max())) {
        if (sel.full()) break;
        if (sel.add(r)) ++counters.copy_events;
    }
}

/// PA draw order: per attempt one field draw, then one node draw if the
/// field has candidates, then the relay (BIPRC only).
template <RandomSource R>
StepResult direct_step(const ModelContext& ctx, const IncomingPaper& in, R& rng, bool relay_all) {
    StepResult res;
    Selection sel(ctx.params.m);
    for (std::size_t attempt = 0; attempt < ctx.params.attempt_cap() && !sel.full(); ++attempt) {
        const Field f = sample_dest_field(in.field, ctx.stats, rng);
        auto v = sample_in_field(ctx, f, in.year, rng);
        if (!v) continue;
        if (relay_all) {
            const auto r = relay(ctx, *v, in.year, f == in.field, f, rng);
            res.counters.relay_events += r.hops;
            v = r.target;
        }
        sel.add(*v);
    }
    res.targets = sel.take();
    return res;
}

/// Alternating sampling and copying phases shared by ICP, ACP, RACP and CIPRC.
template <RandomSource R>
StepResult copying_step(const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    const auto kind = ctx.params.kind;
    StepResult res;
    Selection sel(ctx.params.m);
    for (std::size_t attempt = 0; attempt < ctx.params.attempt_cap() && !sel.full(); ++attempt) {
        const Field f = sample_dest_field(in.field, ctx.stats, rng);
        const bool in_field = f == in.field;
        std::optional<PaperId> v;
        if (kind == ModelKind::RACP && !in_field) {
            const auto& bucket = ctx.pools.cross(in.field, f);
            if (!bucket.empty()) {
                v = sample_set(ctx, bucket, in.year, rng);
            } else {
                const auto& top = ctx.stats.top_cited[index_of(f)];
                std::vector<PaperId> pool;
                for (std::size_t i = 0; i < top.size() && pool.size() < ctx.params.top_cited_k; ++i) {
                    if (ctx.graph.contains(top[i]) && ctx.graph.year(top[i]) <= in.year) pool.push_back(top[i]);
                }
                if (!pool.empty()) {
                    v = preferential_choice(ctx.graph, pool, rng);
                    ++res.counters.fallback_events;
                }
            }
        } else {
            v = sample_in_field(ctx, f, in.year, rng);
            if (v && kind == ModelKind::CIPRC && in_field) {
                const auto r = relay(ctx, *v, in.year, true, f, rng);
                res.counters.relay_events += r.hops;
                v = r.target;
            }
        }
        if (!v || !sel.add(*v)) continue;
        switch (kind) {
            case ModelKind::ICP:
            case ModelKind::CIPRC:
                if (in_field) copy_into(ctx, sel, *v, CopyMode::same_field_only, res.counters);
                break;
            case ModelKind::ACP:
            case ModelKind::RACP:
                copy_into(ctx, sel, *v, CopyMode::all_fields, res.counters);
                break;
            default:
                break;
        }
    }
    res.targets = sel.take();
    return res;
}

/// IIPRC and OIPRC. All m field draws happen first; in-field slots are
/// filled before out-field slots so that the latter can use the references
/// of this paper's in-field picks.
template <RandomSource R>
StepResult relay_pool_step(const ModelContext& ctx, const IncomingPaper& in, R& rng, bool relay_out) {
    const auto& params = ctx.params;
    StepResult res;
    Selection sel(params.m);
    std::vector<Field> slots(params.m);
    for (auto& f : slots) f = sample_dest_field(in.field, ctx.stats, rng);

    std::size_t attempts = 0;
    const std::size_t cap = params.attempt_cap();
    for (auto f : slots) {
        if (f != in.field) continue;
        while (attempts < cap) {
            ++attempts;
            auto v = sample_in_field(ctx, f, in.year, rng);
            if (!v) {
                attempts = cap;
                break;
            }
            const auto r = relay(ctx, *v, in.year, true, f, rng);
            res.counters.relay_events += r.hops;
            if (sel.add(r.target)) break;
        }
    }

    std::vector<PaperId> pool;
    for (auto f : slots) {
        if (f == in.field) continue;
        bool placed = false;
        bool dropped = false;
        while (!placed && attempts < cap) {
            ++attempts;
            std::optional<PaperId> v;
            if (params.outfield_pool == OutfieldPool::per_paper) {
                pool.clear();
                for (auto t : sel.targets()) {
                    if (ctx.graph.field(t) != in.field) continue;
                    for (auto r : ctx.graph.refs(t)) {
                        if (ctx.graph.field(r) == f && !sel.contains(r) &&
                            std::find(pool.begin(), pool.end(), r) == pool.end()) {
                            pool.push_back(r);
                        }
                    }
                }
                if (!pool.empty()) v = preferential_choice(ctx.graph, pool, rng);
            } else {
                v = sample_set(ctx, ctx.pools.reached(in.field, f), in.year, rng);
            }
            if (!v) {
                const auto& all = ctx.pools.cross(in.field, f);
                if (all.empty()) {
                    dropped = true;
                    break;
                }
                ++res.counters.fallback_events;
                v = sample_set(ctx, all, in.year, rng);
                if (!v) continue;
            }
            if (relay_out) {
                const auto r = relay(ctx, *v, in.year, false, f, rng);
                res.counters.relay_events += r.hops;
                v = r.target;
            }
            placed = sel.add(*v);
        }
        if (dropped) ++res.counters.dropped_edges;
    }
    res.targets = sel.take();
    return res;
}

}  // namespace detail

template <RandomSource R>
StepResult pa_step(const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    return detail::direct_step(ctx, in, rng, false);
}

template <RandomSource R>
StepResult biprc_step(const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    return detail::direct_step(ctx, in, rng, true);
}

template <RandomSource R>
StepResult iiprc_step(const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    return detail::relay_pool_step(ctx, in, rng, false);
}

template <RandomSource R>
StepResult oiprc_step(const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    return detail::relay_pool_step(ctx, in, rng, true);
}

namespace detail {

template <RandomSource R>
StepResult copying_as(ModelKind kind, const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    if (ctx.params.kind == kind) return copying_step(ctx, in, rng);
    ModelParams params = ctx.params;
    params.kind = kind;
    const ModelContext local{ctx.graph, ctx.stats, ctx.pools, params};
    return copying_step(local, in, rng);
}

}  // namespace detail

template <RandomSource R>
StepResult icp_step(const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    return detail::copying_as(ModelKind::ICP, ctx, in, rng);
}

template <RandomSource R>
StepResult acp_step(const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    return detail::copying_as(ModelKind::ACP, ctx, in, rng);
}

template <RandomSource R>
StepResult racp_step(const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    return detail::copying_as(ModelKind::RACP, ctx, in, rng);
}

template <RandomSource R>
StepResult ciprc_step(const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    return detail::copying_as(ModelKind::CIPRC, ctx, in, rng);
}

/// Chooses the targets of one incoming paper under ctx.params.kind.
template <RandomSource R>
StepResult select_targets(const ModelContext& ctx, const IncomingPaper& in, R& rng) {
    if (!is_model_field(in.field)) throw Error("incoming paper must belong to CS, MA or PHY");
    switch (ctx.params.kind) {
        case ModelKind::PA: return pa_step(ctx, in, rng);
        case ModelKind::BIPRC: return biprc_step(ctx, in, rng);
        case ModelKind::IIPRC: return iiprc_step(ctx, in, rng);
        case ModelKind::OIPRC: return oiprc_step(ctx, in, rng);
        case ModelKind::ICP: return icp_step(ctx, in, rng);
        case ModelKind::ACP: return acp_step(ctx, in, rng);
        case ModelKind::RACP: return racp_step(ctx, in, rng);
        case ModelKind::CIPRC: return ciprc_step(ctx, in, rng);
    }
    throw InvariantError("unknown model kind");
}

}  // namespace citeflow
