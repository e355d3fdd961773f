// percolab command-line runner: every estimator as a subcommand, with
// reproducible seeds, JSON config files (flags override), CSV/JSONL outputs,
// and the built-in selftest.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "percolab/config.hpp"
#include "percolab/connectivity.hpp"
#include "percolab/domination.hpp"
#include "percolab/errors.hpp"
#include "percolab/iic.hpp"
#include "percolab/invasion.hpp"
#include "percolab/mc_stats.hpp"
#include "percolab/near_critical.hpp"
#include "percolab/report.hpp"
#include "percolab/selftest.hpp"

namespace {

using namespace percolab;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitUnresolved = 3;
constexpr int kExitSoundness = 4;

void write_output(const std::string& path, const std::string& body) {
    if (path == "-" || path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file '" + path + "'");
    out << body;
}

SeedSpec master_seed(const ExperimentConfig& cfg) {
    return SeedSpec{cfg.master_seed, 0, cfg.subcommand};
}

std::int64_t replicas_or(const ExperimentConfig& cfg, std::int64_t fallback) {
    return cfg.replicas.value_or(fallback);
}

int run_invade(const ExperimentConfig& cfg) {
    const int horizon = cfg.horizon.value_or(256);
    const std::int64_t steps = cfg.steps.value_or(10000);
    const WeightField field = sample_weights(BoxSpec{horizon}, master_seed(cfg));
    const InvasionState state = run_invasion(field, StopRule::steps(steps));
    write_output(cfg.output_path,
                 format_trace(state, parse_output_format(cfg.output_format), config_to_json(cfg)));
    std::cerr << "invade: " << state.step_count() << " steps, max norm "
              << state.max_invaded_norm() << (state.censored() ? ", censored at horizon" : "")
              << "\n";
    return kExitOk;
}

int run_crossing(const ExperimentConfig& cfg) {
    const int n = cfg.n.value_or(16);
    const double p = cfg.p.value_or(kCriticalP);
    const Estimate est = crossing_probability(p, n, replicas_or(cfg, 100000), master_seed(cfg),
                                              cfg.workers);
    write_output(cfg.output_path,
                 format_estimate(est, "crossing", parse_output_format(cfg.output_format),
                                 config_to_json(cfg)));
    return kExitOk;
}

int run_corrlen(const ExperimentConfig& cfg) {
    const auto n_list = parse_int_list(cfg.n_list.empty() ? "4,8,16,32" : cfg.n_list);
    PnSchedule schedule;
    schedule.probe_budget = replicas_or(cfg, 100000);
    const CorrelationTable table =
        divergence_table(n_list, cfg.epsilon.value_or(0.02), master_seed(cfg),
                         cfg.tolerance.value_or(2e-3), cfg.workers, schedule);
    write_output(cfg.output_path,
                 format_correlation_table(table, parse_output_format(cfg.output_format),
                                          config_to_json(cfg)));
    for (const int n : table.excluded) {
        std::cerr << "corrlen: warning: p_n unresolved at n=" << n << ", row excluded\n";
    }
    std::cerr << "corrlen: divergence statistic "
              << (table.divergence_increasing ? "strictly increasing" : "NOT strictly increasing")
              << " over " << table.rows.size() << " rows\n";
    return table.excluded.empty() ? kExitOk : kExitUnresolved;
}

int run_onearm(const ExperimentConfig& cfg) {
    const Estimate est = one_arm_probability(cfg.n.value_or(16), replicas_or(cfg, 100000),
                                             master_seed(cfg), cfg.workers);
    write_output(cfg.output_path,
                 format_estimate(est, "one_arm", parse_output_format(cfg.output_format),
                                 config_to_json(cfg)));
    return kExitOk;
}

int run_iic_nu(const ExperimentConfig& cfg) {
    const int n = cfg.n.value_or(1);
    const int N = cfg.big_n.value_or(std::max(16, 4 * n));
    const NuEstimate nu = nu_annulus_estimate(n, N, replicas_or(cfg, 100000), master_seed(cfg),
                                              cfg.workers);
    write_output(cfg.output_path,
                 format_nu_estimate(nu, parse_output_format(cfg.output_format),
                                    config_to_json(cfg)));
    if (nu.sandwich_flagged) {
        std::cerr << "iic-nu: warning: estimate left the sandwich beyond its CI\n";
    }
    return kExitOk;
}

int run_certificate(const ExperimentConfig& cfg) {
    const int n = cfg.n.value_or(2);
    double p;
    if (cfg.p) {
        p = *cfg.p;
    } else {
        const PnEstimate pn = estimate_pn(n, cfg.epsilon.value_or(0.02),
                                          cfg.tolerance.value_or(2e-3), master_seed(cfg),
                                          cfg.workers);
        if (pn.unresolved) throw unresolved_error("p_n estimate unresolved; pass --p explicitly");
        p = pn.p_hat;
        std::cerr << "certificate: using p = p_hat_" << n << " = " << p << "\n";
    }
    const std::int64_t cross_fields = cfg.steps.value_or(1000);  // qualifying fields to check
    const CertificateOutcome outcome = ipc_certificate_bound(
        n, p, replicas_or(cfg, 20000), master_seed(cfg), cfg.workers, cross_fields);
    write_output(cfg.output_path,
                 format_certificate(outcome, parse_output_format(cfg.output_format),
                                    config_to_json(cfg)));
    if (outcome.cross_check && outcome.cross_check->qualifying < cross_fields) {
        throw unresolved_error("cross-check gathered only " +
                               std::to_string(outcome.cross_check->qualifying) +
                               " qualifying fields of " + std::to_string(cross_fields));
    }
    return kExitOk;
}

int run_gap(const ExperimentConfig& cfg, bool box_variant) {
    const auto n_list = parse_int_list(cfg.n_list.empty() ? "4,8,16" : cfg.n_list);
    GapParams params;
    params.disc_replicas = replicas_or(cfg, 20000);
    params.pn_tolerance = cfg.tolerance.value_or(2e-3);
    if (!cfg.grid.empty()) params.extra_grid = parse_double_list(cfg.grid);
    const GapReport report =
        box_variant ? box_variant_gap(n_list, cfg.epsilon.value_or(0.02), master_seed(cfg),
                                      cfg.workers, params)
                    : gap_test(n_list, cfg.epsilon.value_or(0.02), master_seed(cfg),
                               cfg.workers, params);
    write_output(cfg.output_path,
                 format_gap_report(report, parse_output_format(cfg.output_format),
                                   config_to_json(cfg)));
    std::cerr << summarize_gap_report(report);
    return report.skipped.empty() ? kExitOk : kExitUnresolved;
}

int run_dsv(const ExperimentConfig& cfg) {
    const auto windows = parse_window_list(cfg.windows.empty() ? "2:4,4:8" : cfg.windows);
    const ClusterSource source = cfg.source == "iic" ? ClusterSource::iic : ClusterSource::ipc;
    if (!cfg.source.empty() && cfg.source != "iic" && cfg.source != "ipc") {
        throw config_error("source must be 'ipc' or 'iic'");
    }
    const DsvReport report =
        dsv_event_counter(source, windows, cfg.horizon.value_or(32), replicas_or(cfg, 1000),
                          master_seed(cfg), cfg.workers, cfg.steps.value_or(0));
    write_output(cfg.output_path,
                 format_dsv_report(report, parse_output_format(cfg.output_format),
                                   config_to_json(cfg)));
    if (report.horizon_too_small) {
        std::cerr << "dsv-count: warning: censoring rate " << report.censoring_rate
                  << " > 20%; horizon looks too small\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    ExperimentConfig cfg;

    // First pass: load the config file so flags can override its values.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                cfg = load_config(argv[i + 1]);
            } catch (const config_error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitConfig;
            }
        }
    }

    CLI::App app{"percolab: invasion percolation and incipient-infinite-cluster laboratory"};
    app.require_subcommand(0, 1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--seed", cfg.master_seed, "master seed");
    app.add_option("--workers", cfg.workers, "worker count (0 = machine parallelism)");
    app.add_option("--out", cfg.output_path, "output path ('-' = stdout)");
    app.add_option("--format", cfg.output_format, "output format: csv or jsonl");

    auto* invade = app.add_subcommand("invade", "grow one invasion cluster and export its trace");
    invade->add_option("--horizon", cfg.horizon, "horizon box radius");
    invade->add_option("--steps", cfg.steps, "number of invasion steps");

    auto* crossing = app.add_subcommand("crossing", "left-right crossing probability of [0,n]^2");
    crossing->add_option("--n", cfg.n, "box size");
    crossing->add_option("--p", cfg.p, "edge level");
    crossing->add_option("--replicas", cfg.replicas, "Monte Carlo replicas");

    auto* corrlen = app.add_subcommand("corrlen", "p_n and the divergence statistic (p_n-p_c)n^2");
    corrlen->add_option("--n-list", cfg.n_list, "comma-separated scales");
    corrlen->add_option("--epsilon", cfg.epsilon, "crossing level 1-epsilon");
    corrlen->add_option("--tolerance", cfg.tolerance, "bisection tolerance on p_n");
    corrlen->add_option("--replicas", cfg.replicas, "per-probe replica budget");

    auto* onearm = app.add_subcommand("onearm", "critical one-arm probability pi(n)");
    onearm->add_option("--n", cfg.n, "box radius");
    onearm->add_option("--replicas", cfg.replicas, "Monte Carlo replicas");

    auto* iic_nu = app.add_subcommand("iic-nu", "nu[all annulus edges open] with sandwich bounds");
    iic_nu->add_option("--n", cfg.n, "annulus scale (annulus is Ann(n,2n))");
    iic_nu->add_option("--N", cfg.big_n, "conditioning radius (>= 4n)");
    iic_nu->add_option("--replicas", cfg.replicas, "Monte Carlo replicas");

    auto* certificate = app.add_subcommand(
        "certificate", "certified lower bound p^{|Ann|} x disconnection, with invasion cross-check");
    certificate->add_option("--n", cfg.n, "annulus scale");
    certificate->add_option("--p", cfg.p, "certificate level (default: p_hat_n)");
    certificate->add_option("--epsilon", cfg.epsilon, "epsilon for the default p_hat_n");
    certificate->add_option("--tolerance", cfg.tolerance, "bisection tolerance for p_hat_n");
    certificate->add_option("--replicas", cfg.replicas, "disconnection replicas");
    certificate->add_option("--steps", cfg.steps, "qualifying fields for the cross-check");

    auto* gap = app.add_subcommand("gap", "IPC lower bound vs IIC upper bound per scale");
    gap->add_option("--n-list", cfg.n_list, "comma-separated scales");
    gap->add_option("--epsilon", cfg.epsilon, "epsilon defining p_n");
    gap->add_option("--tolerance", cfg.tolerance, "bisection tolerance on p_n");
    gap->add_option("--replicas", cfg.replicas, "disconnection replicas per grid point");
    gap->add_option("--grid", cfg.grid, "extra certificate levels (comma-separated)");

    auto* box_gap = app.add_subcommand("box-gap", "gap pipeline for the box events");
    box_gap->add_option("--n-list", cfg.n_list, "comma-separated scales");
    box_gap->add_option("--epsilon", cfg.epsilon, "epsilon defining p_n");
    box_gap->add_option("--tolerance", cfg.tolerance, "bisection tolerance on p_n");
    box_gap->add_option("--replicas", cfg.replicas, "disconnection replicas per grid point");
    box_gap->add_option("--grid", cfg.grid, "extra certificate levels (comma-separated)");

    auto* dsv = app.add_subcommand("dsv-count", "disconnecting-edge event frequencies per window");
    dsv->add_option("--source", cfg.source, "cluster source: ipc or iic");
    dsv->add_option("--windows", cfg.windows, "windows as inner:outer, comma-separated");
    dsv->add_option("--horizon", cfg.horizon, "horizon box radius (>= 2x largest window)");
    dsv->add_option("--replicas", cfg.replicas, "replicas");
    dsv->add_option("--steps", cfg.steps, "invasion step budget (ipc source)");

    auto* self = app.add_subcommand("selftest", "run the built-in oracle battery");
    (void)self;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    // Subcommand on the command line wins over the config file.
    for (const auto* sub :
         {invade, crossing, corrlen, onearm, iic_nu, certificate, gap, box_gap, dsv, self}) {
        if (sub->parsed()) cfg.subcommand = sub->get_name();
    }
    if (cfg.subcommand.empty()) {
        std::cerr << app.help();
        return kExitConfig;
    }

    try {
        set_default_workers(cfg.workers);
        if (cfg.subcommand == "invade") return run_invade(cfg);
        if (cfg.subcommand == "crossing") return run_crossing(cfg);
        if (cfg.subcommand == "corrlen") return run_corrlen(cfg);
        if (cfg.subcommand == "onearm") return run_onearm(cfg);
        if (cfg.subcommand == "iic-nu") return run_iic_nu(cfg);
        if (cfg.subcommand == "certificate") return run_certificate(cfg);
        if (cfg.subcommand == "gap") return run_gap(cfg, false);
        if (cfg.subcommand == "box-gap") return run_gap(cfg, true);
        if (cfg.subcommand == "dsv-count") return run_dsv(cfg);
        if (cfg.subcommand == "selftest") {
            return percolab::selftest(std::cout) == 0 ? kExitOk : kExitSoundness;
        }
        throw config_error("unknown subcommand '" + cfg.subcommand + "'");
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const unresolved_error& e) {
        std::cerr << "unresolved: " << e.what() << "\n";
        return kExitUnresolved;
    } catch (const soundness_error& e) {
        std::cerr << "SOUNDNESS FAILURE: " << e.what() << "\n";
        return kExitSoundness;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
