#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfc/error.hpp"
#include "mfc/harness.hpp"
#include "mfc/io.hpp"

namespace {

using namespace mfc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;

struct Common {
    std::string scenario;
    std::string ecosystem;
    bool eco_centric = false;
    bool mobile_centric = false;
    double tdag_max = 0;
    std::string dag;
    std::uint64_t dag_seed = 0;
    double ccr = 0;
    std::uint64_t seed = 0;
    std::string out_dir;
    int trials = 0;
    double a_max = 0;
    int i_max = 0;
    int ps = 0;
    double cf = 0;
    int g_max = -1;
    int mn = 0;
    bool pure_random_init = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--scenario", c.scenario, "Scenario JSON file; flags below override it");
    cmd->add_option("--ecosystem", c.ecosystem, "Ecosystem JSON file (default: built-in ecosystem)");
    auto* eco = cmd->add_flag("--eco-centric", c.eco_centric, "Count the energy of every node");
    cmd->add_flag("--mobile-centric", c.mobile_centric, "Count the Mobile energy only")->excludes(eco);
    cmd->add_option("--tdag-max", c.tdag_max, "Maximum DAG execution time (s)");
    cmd->add_option("--dag", c.dag, "DAG1..DAG4 or a DAG JSON file");
    cmd->add_option("--dag-seed", c.dag_seed, "Weight seed of built-in DAGs");
    cmd->add_option("--ccr", c.ccr, "Rescale the DAG to the 4.98 Mbit budget at this CCR");
    cmd->add_option("--seed", c.seed, "Base random seed");
    cmd->add_option("--out-dir", c.out_dir, "Directory for report files");
    cmd->add_option("--trials", c.trials, "Trials per configuration");
    cmd->add_option("--a-max", c.a_max, "RAP step-size clip a_max");
    cmd->add_option("--i-max", c.i_max, "RAP iterations");
    cmd->add_option("--ps", c.ps, "GA population size");
    cmd->add_option("--cf", c.cf, "GA crossover fraction");
    cmd->add_option("--g-max", c.g_max, "GA generations");
    cmd->add_option("--mn", c.mn, "GA mutations per individual (0: round((V-2)/2))");
    cmd->add_flag("--pure-random-init", c.pure_random_init, "Do not seed the GA with the preset allocations");
}

Scenario build_scenario(const Common& c, Scenario sc) {
    if (!c.scenario.empty()) sc = load_scenario(c.scenario);
    if (!c.ecosystem.empty()) {
        const double tmax = sc.eco.tdag_max();
        sc.eco = load_ecosystem(c.ecosystem);
        if (c.scenario.empty()) sc.eco.set_tdag_max(tmax);
    }
    if (c.eco_centric) sc.eco.service_model = ServiceModel::eco_centric();
    if (c.mobile_centric) sc.eco.service_model = ServiceModel::mobile_centric();
    if (c.tdag_max > 0) sc.eco.set_tdag_max(c.tdag_max);
    if (!c.dag.empty()) {
        try {
            sc.dag.builtin = parse_builtin_dag(c.dag);
        } catch (const ConfigError&) {
            sc.dag.builtin.reset();
            sc.dag.path = c.dag;
        }
    }
    if (c.dag_seed) sc.dag.seed = c.dag_seed;
    if (c.ccr > 0) sc.dag.ccr = c.ccr;
    if (c.seed) sc.base_seed = c.seed;
    if (c.trials > 0) sc.trials = c.trials;
    if (c.a_max > 0) sc.rap.a_max = c.a_max;
    if (c.i_max > 0) sc.rap.i_max = c.i_max;
    if (c.ps > 0) sc.ga.ps = c.ps;
    if (c.cf > 0) sc.ga.cf = c.cf;
    if (c.g_max >= 0) sc.ga.g_max = c.g_max;
    if (c.mn > 0) sc.ga.mn = c.mn;
    if (c.pure_random_init) sc.ga.pure_random_init = true;
    sc.ga.seed = sc.base_seed;
    validate_scenario(sc);
    return sc;
}

std::string fmt(double v, int precision = 4) {
    if (!std::isfinite(v)) return "inf";
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
}

void print_energy(const EnergyBreakdown& e) {
    std::cout << "E_TOT " << fmt(e.e_tot) << " J  E_CMP " << fmt(e.e_cmp) << " J  E_NET " << fmt(e.e_net)
              << " J  E_MOBILE " << fmt(e.e_mobile) << " J  T_DAG " << fmt(e.t_dag) << " s\n";
}

void print_resources(const Eigen::VectorXd& rs, const Ecosystem& eco) {
    for (int l = 0; l < rs.size(); ++l)
        std::cout << "  " << resource_name(eco, l) << " = " << fmt(rs(l) / 1e6, 3) << " Mbit/s\n";
}

void write_reports(const RunReport& r, const Ecosystem& eco, const std::string& dir) {
    if (dir.empty()) return;
    for (const auto& p : emit_report(r, eco, dir, ReportFormat::Json)) std::cout << "wrote " << p << "\n";
    for (const auto& p : emit_report(r, eco, dir, ReportFormat::Csv)) std::cout << "wrote " << p << "\n";
}

int cmd_validate(const Common& c) {
    const Scenario sc = build_scenario(c, Scenario{});
    const ApplicationDag dag = resolve_dag(sc.dag);
    const ValidationReport rep = validate_dag(dag);
    std::cout << "ecosystem: ok (Q = " << sc.eco.q << ")\n";
    std::cout << "dag: V = " << dag.size() << ", |E| = " << dag.edge_count() << ", CCR = " << fmt(ccr(dag), 3)
              << "\n";
    if (rep.ok) {
        std::cout << "dag: ok\n";
        return kExitOk;
    }
    for (const auto& v : rep.violations) std::cout << "violation " << v.property << ": " << v.detail << "\n";
    return kExitConfig;
}

int cmd_solve_rap(const Common& c, const std::string& alloc) {
    const Scenario sc = build_scenario(c, Scenario{});
    const ApplicationDag dag = resolve_dag(sc.dag);
    const TaskAllocation x = parse_allocation(alloc, dag.size(), sc.eco);
    const RapResult r = solve_rap(dag, sc.eco, x, sc.rap);
    std::cout << "x = " << format_allocation(x, sc.eco) << "\n";
    if (!r.feasible) {
        std::cout << "infeasible: T_DAG at maximum resources exceeds " << fmt(sc.eco.tdag_max()) << " s\n";
        return kExitInfeasible;
    }
    print_energy(r.energy);
    std::cout << "lambda " << fmt(r.lambda, 6) << "  iterations " << r.iterations << "\n";
    print_resources(r.rs, sc.eco);
    if (!c.out_dir.empty()) {
        RunReport rep;
        rep.kind = "rap";
        rep.trace = r.trace;
        TrialRecord t;
        t.strategy = "RAP";
        t.seed = sc.base_seed;
        t.x = x;
        t.rs = r.rs;
        t.energy = r.energy;
        t.lambda = r.lambda;
        t.feasible = r.feasible;
        t.rap_calls = 1;
        rep.trials.push_back(t);
        rep.aggregates = aggregate_trials(rep.trials);
        write_reports(rep, sc.eco, c.out_dir);
    }
    return kExitOk;
}

int cmd_solve(const Common& c, const std::string& strategy) {
    Scenario sc = build_scenario(c, Scenario{});
    sc.strategy = parse_strategy(strategy);
    const RunReport rep = run_bench(sc, {sc.strategy});
    bool any = false;
    for (const auto& t : rep.trials) {
        std::cout << t.strategy << " seed " << t.seed << ": ";
        if (!t.feasible) {
            std::cout << "infeasible\n";
            continue;
        }
        any = true;
        std::cout << "x = ";
        for (std::size_t i = 0; i < t.x.size(); ++i) std::cout << (i ? "," : "") << node_name(sc.eco, t.x[i]);
        std::cout << "  RAP calls " << t.rap_calls << "\n";
        print_energy(t.energy);
        print_resources(t.rs, sc.eco);
    }
    write_reports(rep, sc.eco, c.out_dir);
    return any ? kExitOk : kExitInfeasible;
}

int cmd_bench(const Common& c, const std::vector<std::string>& names) {
    const Scenario sc = build_scenario(c, Scenario{});
    std::vector<Strategy> strategies;
    if (names.empty())
        strategies = all_strategies();
    else
        for (const auto& n : names) strategies.push_back(parse_strategy(n));
    RunReport rep = run_bench(sc, strategies);
    double ref = 0;
    for (const auto& a : rep.aggregates)
        if (strategies[static_cast<std::size_t>(a.value)] == Strategy::Agtas) ref = a.mean_e_tot;
    std::printf("%-8s %9s %9s %9s %9s %s\n", "strategy", "E_TOT", "E_NET", "E_MOBILE", "ratio", "feasible");
    bool any = false;
    for (const auto& a : rep.aggregates) {
        const Strategy s = strategies[static_cast<std::size_t>(a.value)];
        any = any || a.feasible > 0;
        const std::string ratio = ref > 0 && std::isfinite(ref) ? fmt(a.mean_e_tot / ref, 3) : "-";
        std::printf("%-8s %9s %9s %9s %9s %d/%d\n", to_string(s).c_str(), fmt(a.mean_e_tot, 2).c_str(),
                    fmt(a.mean_e_net, 2).c_str(), fmt(a.mean_e_mobile, 2).c_str(), ratio.c_str(), a.feasible,
                    a.trials);
    }
    write_reports(rep, sc.eco, c.out_dir);
    return any ? kExitOk : kExitInfeasible;
}

int cmd_track(const Common& c) {
    const Scenario sc = build_scenario(c, default_tracking_scenario());
    const RunReport rep = run_tracking(sc);
    bool all_ok = true;
    std::printf("%6s %6s %-24s %8s %12s %12s %8s %9s\n", "start", "end", "allocation", "feasible", "lambda_peak",
                "lambda_end", "settle", "E_TOT");
    for (const auto& g : rep.regimes) {
        all_ok = all_ok && g.feasible;
        std::printf("%6d %6d %-24s %8s %12.4g %12.4g %8d %9s%s\n", g.start, g.end, g.allocation.c_str(),
                    g.feasible ? "yes" : "no", g.lambda_peak, g.lambda_final, g.settle_iterations,
                    fmt(g.e_tot_final).c_str(), g.lambda_vanished ? "" : "  [lambda does not vanish]");
    }
    write_reports(rep, sc.eco, c.out_dir);
    return all_ok ? kExitOk : kExitInfeasible;
}

std::vector<double> parse_values(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("bad sweep value '" + tok + "'");
        }
    }
    return out;
}

int cmd_sweep(const Common& c, const std::string& axis, const std::string& values, const std::string& strategy) {
    Scenario sc = build_scenario(c, Scenario{});
    if (!strategy.empty()) sc.strategy = parse_strategy(strategy);
    const RunReport rep = run_sweep(sc, axis, parse_values(values));
    std::printf("%-10s %7s %9s %9s %9s %9s %9s\n", axis.c_str(), "trials", "mean", "min", "max", "E_NET",
                "E_MOBILE");
    bool any = false;
    for (const auto& a : rep.aggregates) {
        any = any || a.feasible > 0;
        std::printf("%-10g %3d/%-3d %9s %9s %9s %9s %9s\n", a.value, a.feasible, a.trials,
                    fmt(a.mean_e_tot, 2).c_str(), fmt(a.min_e_tot, 2).c_str(), fmt(a.max_e_tot, 2).c_str(),
                    fmt(a.mean_e_net, 2).c_str(), fmt(a.mean_e_mobile, 2).c_str());
    }
    write_reports(rep, sc.eco, c.out_dir);
    return any ? kExitOk : kExitInfeasible;
}

int cmd_defaults(int q, const std::string& out) {
    const Ecosystem eco = default_ecosystem(q);
    if (out.empty()) {
        nlohmann::json j = eco;
        std::cout << j.dump(2) << "\n";
    } else {
        save_ecosystem(eco, out);
        std::cout << "wrote " << out << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint task and resource allocation for Mobile-Fog-Cloud DAG applications"};
    app.require_subcommand(1);

    Common c;
    std::string alloc = "fog", strategy = "A-GTA-S", axis, values, sweep_strategy, defaults_out;
    std::vector<std::string> bench_names;
    int q = 1;

    auto* validate = app.add_subcommand("validate", "Check a DAG and an ecosystem");
    add_common(validate, c);
    auto* rap = app.add_subcommand("solve-rap", "Resource allocation for a fixed task allocation");
    add_common(rap, c);
    rap->add_option("--x", alloc, "fog, cloud, mobile or a node list such as M,F1,C,M");
    auto* solve = app.add_subcommand("solve", "Joint task and resource allocation with one strategy");
    add_common(solve, c);
    solve->add_option("--strategy", strategy, "A-GTA-S, OTA-S, A-OF-S, A-OC-S, A-OM-S or A-ES-S");
    auto* bench = app.add_subcommand("bench", "All strategies side by side");
    add_common(bench, c);
    bench->add_option("--strategies", bench_names, "Subset of strategies")->delimiter(',');
    auto* track = app.add_subcommand("track", "Replay a timeline against the warm-started RAP");
    add_common(track, c);
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep");
    add_common(sweep, c);
    sweep->add_option("--axis", axis, "tdag_max, ccr, ps, cf or av_wifi")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required();
    sweep->add_option("--strategy", sweep_strategy, "Strategy (default: scenario strategy)");
    auto* defaults = app.add_subcommand("defaults", "Print or write the built-in ecosystem");
    defaults->add_option("--q", q, "Number of Fog nodes");
    defaults->add_option("--out", defaults_out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*validate) return cmd_validate(c);
        if (*rap) return cmd_solve_rap(c, alloc);
        if (*solve) return cmd_solve(c, strategy);
        if (*bench) return cmd_bench(c, bench_names);
        if (*track) return cmd_track(c);
        if (*sweep) return cmd_sweep(c, axis, values, sweep_strategy);
        if (*defaults) return cmd_defaults(q, defaults_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
