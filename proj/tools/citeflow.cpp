#include <iostream>

#include <CLI11.hpp>

#include "citeflow/cli.hpp"

int main(int argc, char** argv) {
    using citeflow::cli::Command;
    CLI::App app{"citeflow: citation network growth simulator"};
    app.require_subcommand(1);
    citeflow::cli::Args a;

    auto* ingest = app.add_subcommand("ingest", "load and filter a corpus");
    ingest->add_option("--papers", a.papers, "papers CSV (id,year,field,subfield)")->required();
    ingest->add_option("--edges", a.edges, "edges CSV (src,dst)")->required();
    ingest->add_option("--out", a.out, "output directory")->required();
    ingest->add_option("--min-refs", a.min_refs, "drop references of papers citing fewer papers")
        ->capture_default_str();

    auto* stats = app.add_subcommand("stats", "self/non-self citation proportions per field");
    stats->add_option("--in", a.in, "directory written by ingest")->required();

    auto* simulate = app.add_subcommand("simulate", "run one model");
    simulate->add_option("--config", a.config, "JSON config")->required();
    simulate->add_option("--out", a.out, "output directory")->required();

    auto* tbs = app.add_subcommand("tbs", "temporal bucket signatures of a graph");
    tbs->add_option("--graph", a.graph, "graph.csv or a directory holding one")->required();
    tbs->add_option("--bucketing", a.bucketing, "START:WIDTH:END or JSON file");
    tbs->add_option("--out", a.out, "output directory")->required();

    auto* compare = app.add_subcommand("compare", "L1 table of simulated against empirical signatures");
    compare->add_option("--sim", a.sims, "simulation output directories")->required();
    compare->add_option("--emp", a.emp, "empirical signature or graph directory")->required();
    compare->add_option("--out", a.out, "output directory")->required();

    auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
    sweep->add_option("--config", a.config, "base JSON config")->required();
    sweep->add_option("--grid", a.grid, "JSON grid")->required();
    sweep->add_option("--out", a.out, "output directory")->required();
    sweep->add_option("--threads", a.threads, "worker threads")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "write a synthetic three-field corpus");
    synth->add_option("--papers", a.synth_papers, "paper count")->capture_default_str();
    synth->add_option("--seed", a.synth_seed, "generator seed")->capture_default_str();
    synth->add_option("--out", a.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    Command cmd = Command::ingest;
    if (*stats) cmd = Command::stats;
    else if (*simulate) cmd = Command::simulate;
    else if (*tbs) cmd = Command::tbs;
    else if (*compare) cmd = Command::compare;
    else if (*sweep) cmd = Command::sweep;
    else if (*synth) cmd = Command::synth;
    return citeflow::cli::dispatch(cmd, a, std::cout, std::cerr);
}
