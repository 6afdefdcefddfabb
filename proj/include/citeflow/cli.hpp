#pragma once

// Batch workflows behind the citeflow executable. Each command reads its
// inputs, writes data files into an output directory together with a
// manifest.json, and reports progress on the diagnostic stream.
//
// Exit status: 0 ok, 1 usage or invalid input, 2 missing input,
// 3 internal invariant violation.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "citeflow/config.hpp"
#include "citeflow/corpus.hpp"
#include "citeflow/error.hpp"
#include "citeflow/graph_io.hpp"
#include "citeflow/models.hpp"
#include "citeflow/simulation.hpp"
#include "citeflow/stats.hpp"
#include "citeflow/synthetic.hpp"
#include "citeflow/tbs.hpp"

namespace citeflow::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

enum class ExitCode : int { ok = 0, usage = 1, missing_input = 2, invariant = 3 };

enum class Command { ingest, stats, simulate, tbs, compare, sweep, synth };

struct Args {
    std::string papers;
    std::string edges;
    std::string in;
    std::string out;
    std::string config;
    std::string graph;
    std::string bucketing;
    std::vector<std::string> sims;
    std::string emp;
    std::string grid;
    std::size_t min_refs = 5;
    unsigned threads = 1;
    // synth
    std::size_t synth_papers = 20000;
    std::uint64_t synth_seed = 1;
};

class MissingInput : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw MissingInput("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::ifstream open_in(const fs::path& p) {
    if (!fs::is_regular_file(p)) throw MissingInput("missing input file " + p.string());
    std::ifstream in(p, std::ios::binary);
    if (!in) throw MissingInput("cannot open " + p.string());
    return in;
}

inline std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    return out;
}

inline void require(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string("missing required option ") + flag);
}

inline void write_json(const fs::path& p, const json& doc) {
    auto out = open_out(p);
    out << doc.dump(2) << '\n';
}

inline Corpus load_corpus_files(const fs::path& papers, const fs::path& edges, std::ostream& err) {
    auto pin = open_in(papers);
    auto ein = open_in(edges);
    Corpus corpus = load_corpus(pin, ein);
    const auto& r = corpus.report;
    if (r.total() > 0) {
        err << "warning: dropped " << r.total() << " edge rows (" << r.unresolved << " unresolved, " << r.self
            << " self, " << r.duplicate << " duplicate, " << r.future << " future-dated)\n";
    }
    return corpus;
}

/// `start:width:end`, a JSON object file, or empty for the default.
inline Bucketing parse_bucketing(const std::string& spec) {
    Bucketing b;
    if (spec.empty()) return b;
    if (fs::is_regular_file(spec)) {
        RunConfig cfg;
        apply_config_key(cfg, "bucketing", json::parse(slurp(spec)));
        b = cfg.bucketing;
    } else {
        char c1 = 0, c2 = 0;
        std::istringstream ss(spec);
        if (!(ss >> b.start_year >> c1 >> b.width >> c2 >> b.end_year) || c1 != ':' || c2 != ':' || !ss.eof()) {
            throw UsageError("bucketing must be START:WIDTH:END or a JSON file, got '" + spec + "'");
        }
    }
    b.validate();
    return b;
}

inline Bucketing bucketing_from_manifest(const fs::path& dir) {
    const auto p = dir / "manifest.json";
    if (!fs::is_regular_file(p)) return Bucketing{};
    const auto doc = json::parse(slurp(p));
    if (!doc.contains("bucketing")) return Bucketing{};
    RunConfig cfg;
    apply_config_key(cfg, "bucketing", doc["bucketing"]);
    return cfg.bucketing;
}

/// Signatures stored in `dir` (signatures.csv), or computed from its graph.csv.
inline std::vector<Signature> signatures_from_dir(const fs::path& dir, const Bucketing& b) {
    if (fs::is_regular_file(dir / "signatures.csv")) {
        auto in = open_in(dir / "signatures.csv");
        return read_signatures_csv(in, b);
    }
    if (fs::is_regular_file(dir / "graph.csv")) {
        auto in = open_in(dir / "graph.csv");
        return all_signatures(read_graph_csv(in), b);
    }
    throw MissingInput("no signatures.csv or graph.csv in " + dir.string());
}

inline void write_signatures(const fs::path& dir, const std::vector<Signature>& sigs) {
    {
        auto out = open_out(dir / "signatures.csv");
        write_signatures_csv(sigs, out);
    }
    write_json(dir / "signatures.json", signatures_to_json(sigs));
}

inline json counters_to_json(const RunCounters& c) {
    return {{"relay_events", c.relay_events},   {"copy_events", c.copy_events},
            {"fallback_events", c.fallback_events}, {"dropped_edges", c.dropped_edges},
            {"short_papers", c.short_papers},   {"failed_steps", c.failed_steps},
            {"papers", c.papers},               {"edges", c.edges}};
}

inline RunConfig load_run_config(const fs::path& path) {
    const auto text = slurp(path);
    auto cfg = parse_config(std::string_view(text));
    const auto base = fs::absolute(path).parent_path();
    auto resolve = [&](std::string& p) {
        if (!p.empty() && fs::path(p).is_relative()) p = (base / p).lexically_normal().string();
    };
    resolve(cfg.papers);
    resolve(cfg.edges);
    return cfg;
}

/// Inputs shared by simulate and sweep: filtered corpus, statistics,
/// warm-up graph and empirical signatures.
struct Prepared {
    Corpus corpus;
    EmpiricalStats stats;
    CitationGraph warmup;
    std::vector<Signature> empirical;
};

inline Prepared prepare(const RunConfig& cfg, std::ostream& err) {
    if (cfg.papers.empty()) throw ConfigError("papers", "path required");
    if (cfg.edges.empty()) throw ConfigError("edges", "path required");
    auto corpus = filter_min_refs(load_corpus_files(cfg.papers, cfg.edges, err), cfg.min_refs);
    auto stats = compute_stats(corpus, cfg.warmup_range);
    const auto years = graph_years_for(corpus, cfg.warmup_range, cfg.sim_range);
    auto warmup = build_warmup(corpus, cfg.warmup_range, years);
    auto full = build_graph(corpus, year_span(corpus).last, years);
    err << "corpus: " << corpus.size() << " papers, " << corpus.edges.size() << " edges; warm-up: " << warmup.size()
        << " papers, " << warmup.edge_count() << " edges\n";
    auto empirical = all_signatures(full, cfg.bucketing);
    return Prepared{std::move(corpus), std::move(stats), std::move(warmup), std::move(empirical)};
}

inline std::string fmt(double x) { return format_double(x); }

inline void write_l1_table(const fs::path& path, const std::vector<std::string>& labels,
                           const std::vector<EvaluationTable>& tables) {
    auto out = open_out(path);
    std::vector<std::string> header{"citation"};
    header.insert(header.end(), labels.begin(), labels.end());
    csv::write_row(out, header);
    for (std::size_t k = 0; k < kCitationTypes.size(); ++k) {
        std::vector<std::string> row{kCitationTypes[k].name()};
        for (const auto& t : tables) row.push_back(fmt(t.l1[k]));
        csv::write_row(out, row);
    }
    std::vector<std::string> mean{"overall_mean"}, weighted{"overall_weighted"};
    for (const auto& t : tables) {
        mean.push_back(fmt(t.overall_mean));
        weighted.push_back(fmt(t.overall_weighted));
    }
    csv::write_row(out, mean);
    csv::write_row(out, weighted);
}

inline void print_model_rows(std::ostream& out, const std::vector<std::string>& labels,
                             const std::vector<EvaluationTable>& tables) {
    out << std::left << std::setw(12) << "model";
    for (const auto& t : kCitationTypes) out << std::setw(10) << t.name();
    out << std::setw(10) << "mean" << "weighted\n";
    out << std::fixed << std::setprecision(3);
    for (std::size_t i = 0; i < tables.size(); ++i) {
        out << std::setw(12) << labels[i];
        for (double v : tables[i].l1) out << std::setw(10) << v;
        out << std::setw(10) << tables[i].overall_mean << tables[i].overall_weighted << '\n';
    }
    out << std::defaultfloat;
}

// -- commands ---------------------------------------------------------------

inline void cmd_ingest(const Args& a, std::ostream&, std::ostream& err) {
    require(a.papers, "--papers");
    require(a.edges, "--edges");
    require(a.out, "--out");
    auto corpus = filter_min_refs(load_corpus_files(a.papers, a.edges, err), a.min_refs);
    const fs::path dir = a.out;
    fs::create_directories(dir);
    {
        auto pf = open_out(dir / "papers.csv");
        write_papers(corpus, pf);
        auto ef = open_out(dir / "edges.csv");
        write_edges(corpus, ef);
    }
    {
        const auto span = year_span(corpus);
        auto graph = build_graph(corpus, span.last, span.empty() ? YearRange{0, 0} : span);
        auto gf = open_out(dir / "graph.csv");
        write_graph_csv(graph, gf);
    }
    json manifest{{"papers", fs::absolute(a.papers).lexically_normal().string()},
                  {"edges", fs::absolute(a.edges).lexically_normal().string()},
                  {"min_refs", a.min_refs}};
    write_json(dir / "manifest.json", manifest);
    err << "ingested " << corpus.size() << " papers, " << corpus.edges.size() << " edges into " << dir.string()
        << '\n';
}

inline void cmd_stats(const Args& a, std::ostream& out, std::ostream& err) {
    require(a.in, "--in");
    const fs::path dir = a.in;
    auto corpus = load_corpus_files(dir / "papers.csv", dir / "edges.csv", err);
    out << "field,self,non_self,edges\n";
    for (const auto& [f, share] : self_field_proportions(corpus)) {
        out << label(f) << ',' << fmt(share.self) << ',' << fmt(share.non_self) << ',' << share.edges << '\n';
    }
}

inline void cmd_simulate(const Args& a, std::ostream&, std::ostream& err) {
    require(a.config, "--config");
    require(a.out, "--out");
    const auto cfg = load_run_config(a.config);
    auto prep = prepare(cfg, err);
    err << "simulating " << name(cfg.params.kind) << " with seed " << cfg.seed << '\n';
    auto result = run(prep.warmup, prep.stats, cfg.params, cfg.warmup_range, cfg.sim_range, cfg.seed);
    audit_graph(result.graph);
    const fs::path dir = a.out;
    fs::create_directories(dir);
    {
        auto gf = open_out(dir / "graph.csv");
        write_graph_csv(result.graph, gf);
    }
    const auto sigs = all_signatures(result.graph, cfg.bucketing);
    write_signatures(dir, sigs);
    write_json(dir / "manifest.json", to_manifest(cfg));
    write_json(dir / "counters.json", counters_to_json(result.run.counters));
    const auto table = evaluate(sigs, prep.empirical);
    err << name(cfg.params.kind) << ": " << result.run.counters.papers << " papers, " << result.run.counters.edges
        << " edges, overall L1 " << fmt(table.overall_mean) << '\n';
}

inline void cmd_tbs(const Args& a, std::ostream&, std::ostream& err) {
    require(a.graph, "--graph");
    require(a.out, "--out");
    fs::path gpath = a.graph;
    if (fs::is_directory(gpath)) gpath /= "graph.csv";
    const auto b = parse_bucketing(a.bucketing);
    auto in = open_in(gpath);
    const auto sigs = all_signatures(read_graph_csv(in), b);
    const fs::path dir = a.out;
    fs::create_directories(dir);
    write_signatures(dir, sigs);
    write_json(dir / "manifest.json", json{{"bucketing", to_json(b)}});
    std::size_t empty = 0;
    for (const auto& s : sigs) empty += s.empty() ? 1 : 0;
    err << "wrote " << sigs.size() << " signatures (" << empty << " empty) to " << dir.string() << '\n';
}

inline void cmd_compare(const Args& a, std::ostream& out, std::ostream&) {
    if (a.sims.empty()) throw UsageError("missing required option --sim");
    require(a.emp, "--emp");
    require(a.out, "--out");
    const fs::path emp_dir = a.emp;
    if (!fs::is_directory(emp_dir)) throw MissingInput("missing directory " + emp_dir.string());
    const auto b = bucketing_from_manifest(emp_dir);
    const auto empirical = signatures_from_dir(emp_dir, b);
    std::vector<std::string> labels;
    std::vector<EvaluationTable> tables;
    for (const auto& s : a.sims) {
        const fs::path dir = s;
        if (!fs::is_directory(dir)) throw MissingInput("missing directory " + dir.string());
        std::string lbl = dir.filename().string();
        if (fs::is_regular_file(dir / "manifest.json")) {
            const auto m = json::parse(slurp(dir / "manifest.json"));
            if (m.contains("model") && m["model"].is_string()) lbl = m["model"].get<std::string>();
        }
        const std::string base = lbl;
        for (int n = 2; std::find(labels.begin(), labels.end(), lbl) != labels.end(); ++n) {
            lbl = base + "#" + std::to_string(n);
        }
        labels.push_back(lbl);
        tables.push_back(evaluate(signatures_from_dir(dir, bucketing_from_manifest(dir)), empirical));
    }
    const fs::path dir = a.out;
    fs::create_directories(dir);
    write_l1_table(dir / "l1_table.csv", labels, tables);
    write_json(dir / "manifest.json", json{{"bucketing", to_json(b)}});
    print_model_rows(out, labels, tables);
}

/// Grid document: an object mapping parameter names to arrays of values
/// (cartesian product, last key varying fastest) or an array of objects.
inline std::vector<json> expand_grid(const json& grid) {
    static const std::vector<std::string> allowed{"model",      "m",          "theta_in",        "lambda_in",
                                                  "theta_out",  "lambda_out", "max_relay_depth", "top_cited_k",
                                                  "outfield_pool"};
    auto check = [&](const std::string& key) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(key, "not a model parameter; cannot appear in a grid");
        }
    };
    std::vector<json> points;
    if (grid.is_array()) {
        for (const auto& p : grid) {
            if (!p.is_object()) throw ConfigError("<grid>", "array entries must be objects");
            for (const auto& [k, v] : p.items()) check(k);
            points.push_back(p);
        }
    } else if (grid.is_object()) {
        points.push_back(json::object());
        for (const auto& [k, values] : grid.items()) {
            check(k);
            if (!values.is_array() || values.empty()) throw ConfigError(k, "expected a non-empty array of values");
            std::vector<json> next;
            for (const auto& p : points) {
                for (const auto& v : values) {
                    auto q = p;
                    q[k] = v;
                    next.push_back(std::move(q));
                }
            }
            points = std::move(next);
        }
    } else {
        throw ConfigError("<grid>", "expected an object or an array");
    }
    if (points.empty()) throw ConfigError("<grid>", "empty grid");
    return points;
}

inline void cmd_sweep(const Args& a, std::ostream& out, std::ostream& err) {
    require(a.config, "--config");
    require(a.grid, "--grid");
    require(a.out, "--out");
    const auto cfg = load_run_config(a.config);
    const auto grid_doc = json::parse(slurp(a.grid));
    std::vector<ModelParams> grid;
    std::vector<RunConfig> configs;
    for (const auto& point : expand_grid(grid_doc)) {
        RunConfig c = cfg;
        for (const auto& [k, v] : point.items()) apply_config_key(c, k, v);
        c.validate();
        c.seed = cfg.seed + configs.size();
        grid.push_back(c.params);
        configs.push_back(c);
    }
    auto prep = prepare(cfg, err);
    err << "sweeping " << grid.size() << " grid points\n";
    const auto rows = sweep(prep.warmup, prep.stats, grid, cfg.warmup_range, cfg.sim_range, cfg.seed, prep.empirical,
                            cfg.bucketing, a.threads);
    const fs::path dir = a.out;
    fs::create_directories(dir / "runs");
    write_json(dir / "manifest.json", to_manifest(cfg));
    std::vector<std::string> labels;
    std::vector<EvaluationTable> tables;
    auto summary = open_out(dir / "sweep.csv");
    std::vector<std::string> header{"index", "seed", "model", "m", "theta_in", "lambda_in", "theta_out", "lambda_out",
                                    "max_relay_depth", "top_cited_k", "outfield_pool"};
    for (const auto& t : kCitationTypes) header.push_back(t.name());
    header.insert(header.end(), {"overall_mean", "overall_weighted", "error"});
    csv::write_row(summary, header);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        std::ostringstream run_name;
        run_name << "run_" << std::setw(3) << std::setfill('0') << i;
        const auto run_dir = dir / "runs" / run_name.str();
        fs::create_directories(run_dir);
        write_json(run_dir / "manifest.json", to_manifest(configs[i]));
        write_json(run_dir / "counters.json", counters_to_json(row.counters));
        const auto& p = row.params;
        std::vector<std::string> cells{std::to_string(i),       std::to_string(row.seed),
                                       std::string(name(p.kind)), std::to_string(p.m),
                                       fmt(p.theta_in),         fmt(p.lambda_in),
                                       fmt(p.theta_out),        fmt(p.lambda_out),
                                       std::to_string(p.max_relay_depth), std::to_string(p.top_cited_k),
                                       std::string(to_string(p.outfield_pool))};
        if (row.table) {
            for (double v : row.table->l1) cells.push_back(fmt(v));
            cells.push_back(fmt(row.table->overall_mean));
            cells.push_back(fmt(row.table->overall_weighted));
            cells.emplace_back();
            labels.push_back(run_name.str());
            tables.push_back(*row.table);
        } else {
            cells.insert(cells.end(), kCitationTypes.size() + 2, "");
            cells.push_back(row.error);
            err << "warning: " << run_name.str() << " failed: " << row.error << '\n';
        }
        csv::write_row(summary, cells);
    }
    write_l1_table(dir / "l1_table.csv", labels, tables);
    print_model_rows(out, labels, tables);
}

inline void cmd_synth(const Args& a, std::ostream&, std::ostream& err) {
    require(a.out, "--out");
    SyntheticSpec spec;
    spec.papers = a.synth_papers;
    spec.seed = a.synth_seed;
    const auto corpus = make_synthetic_corpus(spec);
    const fs::path dir = a.out;
    fs::create_directories(dir);
    auto pf = open_out(dir / "papers.csv");
    write_papers(corpus, pf);
    auto ef = open_out(dir / "edges.csv");
    write_edges(corpus, ef);
    err << "wrote synthetic corpus: " << corpus.size() << " papers, " << corpus.edges.size() << " edges\n";
}

}  // namespace detail

inline int dispatch(Command command, const Args& args, std::ostream& out, std::ostream& err) {
    try {
        switch (command) {
            case Command::ingest: detail::cmd_ingest(args, out, err); break;
            case Command::stats: detail::cmd_stats(args, out, err); break;
            case Command::simulate: detail::cmd_simulate(args, out, err); break;
            case Command::tbs: detail::cmd_tbs(args, out, err); break;
            case Command::compare: detail::cmd_compare(args, out, err); break;
            case Command::sweep: detail::cmd_sweep(args, out, err); break;
            case Command::synth: detail::cmd_synth(args, out, err); break;
        }
        return static_cast<int>(ExitCode::ok);
    } catch (const MissingInput& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::missing_input);
    } catch (const InvariantError& e) {
        err << "invariant violation: " << e.what() << '\n';
        return static_cast<int>(ExitCode::invariant);
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::invariant);
    }
}

}  // namespace citeflow::cli
