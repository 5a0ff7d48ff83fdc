#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfc/allocation.hpp"
#include "mfc/dag.hpp"
#include "mfc/platform.hpp"
#include "mfc/rap.hpp"
#include "mfc/tap.hpp"

namespace mfc {

enum class Strategy { Agtas, Otas, Fog, Cloud, Mobile, Aess };

// "A-GTA-S", "OTA-S", "A-OF-S", "A-OC-S", "A-OM-S", "A-ES-S".
std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& name);
const std::vector<Strategy>& all_strategies();

TapResult run_strategy(Strategy s, const ApplicationDag& dag, const Ecosystem& eco, const GaParams& ga,
                       const RapConfig& rap, long enumeration_cap = kDefaultEnumerationCap);

struct DagSpec {
    std::optional<BuiltinDag> builtin = BuiltinDag::Dag1;
    std::string path;          // used when builtin is empty
    std::uint64_t seed = 1;    // weight seed of builtin DAGs
    std::optional<double> ccr; // rescale to the fixed 4.98 Mbit budget at this CCR
};

ApplicationDag resolve_dag(const DagSpec& spec);

struct LinkRef {
    int from;
    int to;
    bool both_directions;
};

// "M-F1" names both directions, "M->F1" or "F1->M" a single one.
LinkRef parse_link(const std::string& spec, const Ecosystem& eco);

// Actions applied together before the given 1-based iteration.
struct TimelineEvent {
    int iteration = 1;
    std::vector<std::string> link_on;
    std::vector<std::string> link_off;
    std::optional<std::string> allocation;  // preset name or explicit list
    std::optional<double> tdag_max;
};

struct Scenario {
    DagSpec dag;
    Ecosystem eco = default_ecosystem(1);
    Strategy strategy = Strategy::Agtas;
    GaParams ga;
    RapConfig rap;
    std::string allocation = "fog";  // initial allocation for tracking
    std::vector<TimelineEvent> timeline;
    int iterations = 5000;  // tracking length
    int trials = 1;
    std::uint64_t base_seed = 1;
    std::optional<double> av_wifi;
};

void validate_scenario(const Scenario& sc);
Scenario scenario_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

// DAG1 at 0.3 s: cellular only with x_CLD, then WiFi with x_MOB, x_CLD,
// x_FOG and x_CLD, switching at iterations 1, 1000, 2000, 3000, 4000.
Scenario default_tracking_scenario();

struct TrialRecord {
    std::string axis;
    double value = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string strategy;
    TaskAllocation x;
    Eigen::VectorXd rs;
    EnergyBreakdown energy;
    double lambda = 0;
    bool feasible = false;
    long rap_calls = 0;
    bool wifi_on = true;
    double wifi_scale = 1;
};

struct Aggregate {
    double value = 0;
    int trials = 0;
    int feasible = 0;
    double mean_e_tot = 0, min_e_tot = 0, max_e_tot = 0;
    double mean_e_net = 0;
    double mean_e_mobile = 0;
};

struct RegimeRecord {
    int start = 0;  // first iteration of the regime
    int end = 0;    // last iteration
    std::string allocation;
    bool feasible = true;
    double lambda_peak = 0;
    double lambda_final = 0;
    int settle_iterations = 0;  // iterations until lambda <= tol * peak, -1 if never
    bool lambda_vanished = true;
    double e_tot_final = 0;
};

struct RunReport {
    std::string kind;  // "sweep", "availability", "tracking", "bench"
    std::string axis;
    std::vector<TrialRecord> trials;
    std::vector<Aggregate> aggregates;
    std::vector<RegimeRecord> regimes;
    std::vector<TracePoint> trace;
    std::vector<std::string> files;
};

inline constexpr double kLambdaVanishTol = 1e-3;

RunReport run_tracking(const Scenario& sc);

// One aggregate per value; axis is tdag_max, ccr, ps, cf or av_wifi.
RunReport run_sweep(const Scenario& base, const std::string& axis, const std::vector<double>& values);
RunReport run_availability(const Scenario& sc, int trials);

// Every listed strategy on the scenario, sc.trials times with seeds base_seed + t.
RunReport run_bench(const Scenario& sc, const std::vector<Strategy>& strategies);

// Per-trial WiFi state: off with probability 1 - av, else both directions
// scaled by one shared uniform draw.
struct WifiDraw {
    bool on;
    double scale;
};
WifiDraw draw_wifi(double av_wifi, std::uint64_t seed);
Ecosystem apply_wifi(const Ecosystem& eco, const WifiDraw& d);

// Aggregates recomputed from trial records, grouped by value in order of appearance.
std::vector<Aggregate> aggregate_trials(const std::vector<TrialRecord>& trials);

nlohmann::json report_to_json(const RunReport& r, const Ecosystem& eco);
RunReport report_from_json(const nlohmann::json& j, const Ecosystem& eco);

enum class ReportFormat { Csv, Json };

// Writes report.json or trials.csv / aggregates.csv / regimes.csv / trace.csv
// under dir and returns the written paths.
std::vector<std::string> emit_report(const RunReport& r, const Ecosystem& eco, const std::string& dir,
                                     ReportFormat format);

}  // namespace mfc
