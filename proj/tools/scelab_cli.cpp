// Command-line front end: sweeps, figure data, oracles and instance dumps.

#include "scelab/error.hpp"
#include "scelab/experiment.hpp"
#include "scelab/instance_io.hpp"
#include "scelab/oracles.hpp"
#include "scelab/reproduce.hpp"
#include "scelab/sampling.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

using namespace scelab;

namespace {

struct Common {
    std::uint64_t seed = 1;
    std::size_t replicates = 0;
    double step = 0.0;
    std::string out;
    std::string config;
    std::size_t tasks_k = 10;
};

void add_common(CLI::App* app, Common& c, bool with_step)
{
    app->add_option("--seed", c.seed, "Master seed");
    app->add_option("--replicates", c.replicates, "Replicates (sensitivity: iterations)");
    if (with_step) app->add_option("--step", c.step, "SCE grid step in percent");
    app->add_option("--out", c.out, "Output path (CSV; a manifest is written next to it)");
}

ExperimentConfig base_config(const Common& c)
{
    ExperimentConfig cfg;
    if (!c.config.empty()) cfg = ExperimentConfig::load(c.config);
    else cfg.iec = paper_base(c.tasks_k), cfg.tasks_k = c.tasks_k;
    cfg.seed = c.seed;
    if (c.replicates) cfg.replicates = cfg.iterations = c.replicates;
    if (c.step > 0.0) cfg.sce_step = c.step;
    return cfg;
}

void emit(ExperimentConfig cfg, const Common& c, const std::string& command)
{
    if (!c.out.empty()) {
        cfg.output = c.out;
        run_to_files(cfg, command);
        std::cout << "wrote " << cfg.output << " and " << manifest_path(cfg.output) << '\n';
    } else {
        write_csv(std::cout, run(cfg));
    }
}

void print_oracles(std::uint64_t seed, std::size_t replicates)
{
    const std::size_t reps = replicates ? replicates : 100000;
    std::printf("two-agent winner-take-all, %zu replicates\n", reps);
    std::printf("%6s %6s %12s %12s %9s %12s\n", "xi", "sigma", "closed_form", "simulated", "rel_err", "sensitivity");
    for (double xi : {0.4, 0.6, 0.8})
        for (double sigma : {0.0, 1.0, 2.0}) {
            const double exact = example1_payoff(xi, sigma);
            const auto sim = example1_simulate(xi, sigma, reps, Seed(seed).child("example1"));
            std::printf("%6.2f %6.2f %12.5f %12.5f %9.5f %12.5f\n", xi, sigma, exact, sim.total_payment,
                        std::abs(sim.total_payment - exact) / exact, example1_sensitivity(sigma));
        }
    std::printf("\nGaussian surrogate (xi = 0.6, 1000 agents, 1000 replicates)\n");
    std::printf("%6s %8s %12s %14s %10s\n", "beta", "noise", "mi", "delta*sigma_q", "residual");
    for (double beta : {0.5, 1.0, 2.0})
        for (double noise : {0.5, 1.0, 2.0}) {
            const auto t = theorem1_check({1.0, noise, beta}, 0.6, 1000, 1000, Seed(seed).child("theorem1"));
            std::printf("%6.2f %8.2f %12.5f %14.5f %10.5f\n", beta, noise, t.mi_estimate, t.delta_times_sigma_q,
                        t.residual);
        }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spot Check Equivalence laboratory"};
    app.require_subcommand(1);

    Common run_opts;
    auto* run_cmd = app.add_subcommand("run", "Run the sweep described by a config file");
    run_cmd->add_option("config", run_opts.config, "Config file")->required();
    run_cmd->add_option("--seed", run_opts.seed, "Override the master seed");
    run_cmd->add_option("--replicates", run_opts.replicates, "Override replicates and iterations");
    run_cmd->add_option("--step", run_opts.step, "Override the SCE grid step");
    run_cmd->add_option("--out", run_opts.out, "Override the output path");
    bool seed_given = false;
    run_cmd->callback([&] { seed_given = run_cmd->count("--seed") > 0; });

    std::string figure, scale = "desk";
    Common rep_opts;
    std::size_t seeds = 0;
    auto* rep_cmd = app.add_subcommand("reproduce", "Write plot data for a figure");
    rep_cmd->add_option("figure", figure, "mi_vs_payment | sensitivity_vs_payment | sce_vs_effort | sce_vs_tasks | convergence")
        ->required();
    rep_cmd->add_option("--scale", scale, "desk | paper");
    rep_cmd->add_option("--seeds", seeds, "Number of seeds averaged");
    add_common(rep_cmd, rep_opts, true);

    Common oracle_opts;
    auto* oracle_cmd = app.add_subcommand("oracle", "Closed forms next to their simulations");
    oracle_cmd->add_option("--seed", oracle_opts.seed, "Seed");
    oracle_cmd->add_option("--replicates", oracle_opts.replicates, "Replicates for the two-agent game");

    std::string mechanism, metric = "mi";
    double xi = 0.6;
    Common sce_opts, mi_opts, sens_opts;
    auto* sce_cmd = app.add_subcommand("sce", "Spot Check Equivalence of one mechanism");
    sce_cmd->add_option("mechanism", mechanism, "Mechanism id, e.g. oa, ca, fmi:kl, sc:50")->required();
    sce_cmd->add_option("--metric", metric, "mi | sensitivity");
    add_common(sce_cmd, sce_opts, true);
    auto* mi_cmd = app.add_subcommand("mi", "Measurement integrity of one mechanism");
    mi_cmd->add_option("mechanism", mechanism, "Mechanism id")->required();
    add_common(mi_cmd, mi_opts, false);
    auto* sens_cmd = app.add_subcommand("sensitivity", "Sensitivity proxy of one mechanism");
    sens_cmd->add_option("mechanism", mechanism, "Mechanism id")->required();
    add_common(sens_cmd, sens_opts, false);
    for (auto [cmd, opts] : {std::pair{sce_cmd, &sce_opts}, std::pair{mi_cmd, &mi_opts}, std::pair{sens_cmd, &sens_opts}}) {
        cmd->add_option("--xi", xi, "Target effort level");
        cmd->add_option("--config", opts->config, "Config file supplying the IEC");
        cmd->add_option("--tasks-k", opts->tasks_k, "paper-base multiplier (5k tasks per agent)");
    }

    Common dump_opts;
    auto* dump_cmd = app.add_subcommand("dump-instance", "Write one sampled instance as CSV");
    dump_cmd->add_option("--seed", dump_opts.seed, "Seed");
    dump_cmd->add_option("--xi", xi, "Effort level of every agent");
    dump_cmd->add_option("--config", dump_opts.config, "Config file supplying the IEC");
    dump_cmd->add_option("--tasks-k", dump_opts.tasks_k, "paper-base multiplier");
    dump_cmd->add_option("--out", dump_opts.out, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            auto cfg = ExperimentConfig::load(run_opts.config);
            if (seed_given) cfg.seed = run_opts.seed;
            if (run_opts.replicates) cfg.replicates = cfg.iterations = run_opts.replicates;
            if (run_opts.step > 0.0) cfg.sce_step = run_opts.step;
            if (!run_opts.out.empty()) cfg.output = run_opts.out;
            run_to_files(cfg);
            std::cout << "wrote " << cfg.output << " and " << manifest_path(cfg.output) << '\n';
        } else if (*rep_cmd) {
            ReproduceOptions o;
            o.scale = parse_scale(scale);
            o.seed = rep_opts.seed;
            o.replicates = rep_opts.replicates;
            o.seeds = seeds;
            if (rep_opts.step > 0.0) o.sce_step = rep_opts.step;
            const std::string dir = rep_opts.out.empty() ? "figures" : rep_opts.out;
            for (const auto& path : reproduce(parse_figure(figure), o, dir)) std::cout << "wrote " << path << '\n';
        } else if (*oracle_cmd) {
            print_oracles(oracle_opts.seed, oracle_opts.replicates);
        } else if (*sce_cmd || *mi_cmd || *sens_cmd) {
            const Common& c = *sce_cmd ? sce_opts : *mi_cmd ? mi_opts : sens_opts;
            auto cfg = base_config(c);
            cfg.mechanisms = {Measurement::parse(mechanism)};
            cfg.efforts = {xi};
            if (*sce_cmd) {
                if (metric != "mi" && metric != "sensitivity") throw ConfigError("--metric must be mi or sensitivity");
                cfg.metrics = {metric == "mi" ? CellMetric::sce_mi : CellMetric::sce_sensitivity};
            } else {
                cfg.metrics = {*mi_cmd ? CellMetric::mi : CellMetric::sensitivity};
            }
            emit(cfg, c, *sce_cmd ? "sce" : *mi_cmd ? "mi" : "sensitivity");
        } else if (*dump_cmd) {
            const auto cfg = base_config(dump_opts);
            const ReplicateSampler sampler(cfg.iec, Seed(dump_opts.seed));
            const auto inst = sampler.instance(0, EffortProfile::symmetric(cfg.iec.num_agents, xi));
            if (dump_opts.out.empty()) {
                write_instance_csv(std::cout, inst);
            } else {
                std::ofstream out(dump_opts.out);
                if (!out) throw Error("cannot write '" + dump_opts.out + "'");
                write_instance_csv(out, inst);
                ManifestInfo info;
                info.command = "dump-instance";
                info.started = info.finished = utc_timestamp();
                info.config_json = "{\"seed\":" + std::to_string(dump_opts.seed) + ",\"xi\":" + format_double(xi) +
                                   ",\"num_agents\":" + std::to_string(cfg.iec.num_agents) +
                                   ",\"num_tasks\":" + std::to_string(cfg.iec.num_tasks) + "}";
                info.outputs = {dump_opts.out};
                write_manifest(manifest_path(dump_opts.out), info);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
