#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "repsim/config.hpp"
#include "repsim/fuzzy.hpp"
#include "repsim/metrics.hpp"
#include "repsim/report.hpp"
#include "repsim/rng.hpp"
#include "repsim/world.hpp"

namespace {

using namespace repsim;

struct RunArgs {
    std::string config_path;
    uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir = ".";
    bool trace = false;
};

struct SweepArgs {
    std::string config_path;
    std::vector<int> counts;
    std::string out_dir = ".";
};

struct PropArgs {
    double alpha = 2.0;
    int phi = 0;
    double psi1 = 0.5;
    double psi2 = 0.5;
};

struct ApdArgs {
    double c = 0.0;
    double e = 0.0;
    double z = 0.0;
    double p = 0.0;
    bool p_given = false;
    int phi = 0;
    int hop = 0;
    double rep = 0.0;
    int count = 0;
    int limit = 5;
};

int cmd_run(const RunArgs& a) {
    sim::SimConfig cfg = sim::load_config(a.config_path);
    if (a.seed_given) cfg.seed = a.seed;

    std::vector<metrics::RunMetrics> per_run;
    uint64_t combined = sim::FNV_OFFSET;
    int64_t generated = 0;
    int64_t delivered = 0;
    int64_t allegations = 0;
    for (int r = 0; r < cfg.runs; ++r) {
        const uint64_t run_seed = derive_seed(cfg.seed, static_cast<uint64_t>(cfg.malicious_count),
                                              static_cast<uint64_t>(r));
        sim::World w(cfg, run_seed);
        if (a.trace) w.enable_trace();
        w.run();
        const sim::RunResult res = w.harvest();
        per_run.push_back(res.metrics);
        generated += res.tallies.generated;
        delivered += res.tallies.delivered;
        allegations += res.tallies.allegations;
        combined = sim::hash_line(combined, std::to_string(res.tallies.trace_hash));
        if (a.trace) {
            std::string text;
            for (const std::string& line : w.trace()) {
                text += line;
                text += '\n';
            }
            sim::write_file(a.out_dir + "/trace_" + std::to_string(r) + ".log", text);
        }
    }

    const metrics::RunMetrics agg = metrics::aggregate_metrics(per_run);
    const std::string csv_path = a.out_dir + "/run.csv";
    sim::write_file(csv_path, sim::run_csv(per_run, agg));

    std::printf("runs %d  malicious %d  generated %lld  delivered %lld  allegations %lld\n",
                cfg.runs, cfg.malicious_count, static_cast<long long>(generated),
                static_cast<long long>(delivered), static_cast<long long>(allegations));
    std::printf("mean selfish standing %.6f\n", agg.rep_efficiency);
    if (agg.detection_rate_pct) {
        std::printf("detection rate %.2f%%  (undetected %.2f%%)\n", *agg.detection_rate_pct,
                    *agg.undetected_pct);
    }
    std::printf("trace hash %llu\n", static_cast<unsigned long long>(combined));
    std::printf("wrote %s\n", csv_path.c_str());
    return 0;
}

int cmd_sweep(const SweepArgs& a) {
    const sim::SimConfig cfg = sim::load_config(a.config_path);
    const sim::SweepResult sweep = sim::run_sweep(cfg, a.counts);
    const std::string csv_path = a.out_dir + "/sweep.csv";
    sim::write_file(csv_path, sim::sweep_csv(sweep.rows));
    for (const metrics::RunMetrics& row : sweep.rows) {
        std::printf("malicious %d  mean selfish standing %.6f\n", row.malicious_count,
                    row.rep_efficiency);
    }
    std::printf("trace hash %llu\n", static_cast<unsigned long long>(sweep.trace_hash));
    std::printf("wrote %s\n", csv_path.c_str());
    return 0;
}

void print_report(const char* name, const metrics::PropositionReport& r) {
    std::printf("%s:\n", name);
    std::printf("  honest gain     %.6f\n", r.honest_gain);
    std::printf("  dishonest gain  %.6f\n", r.dishonest_gain);
    std::printf("  margin          %.6f  (closed form %.6f)\n", r.margin, r.closed_margin);
}

int cmd_check_props(const PropArgs& a) {
    const metrics::PropositionReport lb = metrics::link_break_gains(a.psi1, a.psi2, a.alpha, a.phi);
    const metrics::PropositionReport co = metrics::collusion_gains(a.alpha, a.phi);
    print_report("link-break backing game", lb);
    print_report("collusion request game", co);
    const bool honest_wins = lb.margin > 0.0 && co.margin > 0.0;
    std::printf("honesty is the better strategy: %s\n", honest_wins ? "yes" : "no");
    return honest_wins ? 0 : 1;
}

int cmd_apd_eval(const ApdArgs& a) {
    fuzzy::ApdInputs in{a.c, a.e, a.z, std::nullopt};
    if (a.p_given) in.path_fraction = a.p;
    const fuzzy::ApdBreakdown out =
        fuzzy::apd_update(a.rep, in, a.phi, a.hop, a.count, a.limit);
    std::printf("C %.6f -> %s\n", a.c, fuzzy::grade_name(out.comparative));
    std::printf("E %.6f -> %s\n", a.e, fuzzy::grade_name(out.expectation));
    std::printf("Z %.6f -> %s\n", a.z, fuzzy::grade_name(out.correctness));
    if (out.path_fraction) {
        std::printf("P %.6f -> %s\n", a.p, fuzzy::grade_name(*out.path_fraction));
    }
    std::printf("rho1 %s  rho2 %s  RAQ %s\n", fuzzy::grade_name(out.rho1),
                fuzzy::grade_name(out.rho2), fuzzy::grade_name(out.answer));
    std::printf("kappa %.6f\n", out.kappa);
    std::printf("score %.6f -> %.6f\n", a.rep, out.new_score);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"reputation-based cooperation simulator for mobile ad hoc networks"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "simulate one configuration and write run.csv");
    run->add_option("--config", run_args.config_path, "key=value configuration file")->required();
    CLI::Option* seed_opt = run->add_option("--seed", run_args.seed, "master seed override");
    run->add_option("--out", run_args.out_dir, "output directory")->capture_default_str();
    run->add_flag("--trace", run_args.trace, "write one trace_<run>.log per run");

    SweepArgs sweep_args;
    CLI::App* sweep =
        app.add_subcommand("sweep", "vary the attacker count and write sweep.csv");
    sweep->add_option("--config", sweep_args.config_path, "key=value configuration file")
        ->required();
    sweep->add_option("--malicious", sweep_args.counts, "attacker counts, e.g. 0,5,10")
        ->required()
        ->delimiter(',');
    sweep->add_option("--out", sweep_args.out_dir, "output directory")->capture_default_str();

    PropArgs prop_args;
    CLI::App* props =
        app.add_subcommand("check-props", "compare honest and dishonest payoffs");
    props->add_option("--alpha", prop_args.alpha, "reward base, above 1")->required();
    props->add_option("--phi", prop_args.phi, "network size")->required();
    props->add_option("--psi1", prop_args.psi1, "probability the story is checkable")
        ->capture_default_str();
    props->add_option("--psi2", prop_args.psi2, "probability the check succeeds")
        ->capture_default_str();

    ApdArgs apd_args;
    CLI::App* apd = app.add_subcommand("apd", "adaptive penalty decider");
    apd->require_subcommand(1);
    CLI::App* eval = apd->add_subcommand("eval", "grade crisp inputs and update a score");
    eval->add_option("--c", apd_args.c, "comparative reputation in [0,1)")->required();
    eval->add_option("--e", apd_args.e, "expectation in [0,1)")->required();
    eval->add_option("--z", apd_args.z, "correctness in [0,1]")->required();
    CLI::Option* p_opt = eval->add_option("--p", apd_args.p, "path fraction in [1/H,1]");
    eval->add_option("--phi", apd_args.phi, "network size")->required();
    eval->add_option("--hop", apd_args.hop, "hop limit H")->required();
    eval->add_option("--rep", apd_args.rep, "current score")->capture_default_str();
    eval->add_option("--count", apd_args.count, "suspicion count so far")->capture_default_str();
    eval->add_option("--limit", apd_args.limit, "suspicion limit M")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    run_args.seed_given = seed_opt->count() > 0;
    apd_args.p_given = p_opt->count() > 0;

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (props->parsed()) return cmd_check_props(prop_args);
        if (apd->parsed() && eval->parsed()) return cmd_apd_eval(apd_args);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
