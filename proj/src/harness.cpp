#include "mfc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>

#include "mfc/error.hpp"
#include "mfc/io.hpp"

namespace mfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_num(const json& j) { return j.is_null() ? kInf : j.get<double>(); }

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

std::string fixed(double v, int precision) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
}

std::string general(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string allocation_words(const TaskAllocation& x, const Ecosystem& eco) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ' ';
        s += node_name(eco, x[i]);
    }
    return s;
}

void set_wifi(Ecosystem& eco, const LinkRef& link, double r_max) {
    const int fog = link.from == kMobile ? link.to : link.from;
    if (link.both_directions || link.from == kMobile) eco.uplink[fog - 1].r_max = r_max;
    if (link.both_directions || link.to == kMobile) eco.downlink[fog - 1].r_max = r_max;
}

TrialRecord make_record(const std::string& axis, double value, int trial, std::uint64_t seed, Strategy s,
                        const TapResult& r) {
    TrialRecord rec;
    rec.axis = axis;
    rec.value = value;
    rec.trial = trial;
    rec.seed = seed;
    rec.strategy = to_string(s);
    rec.x = r.x_best;
    rec.rs = r.rs_best;
    rec.energy = r.energy;
    rec.lambda = r.lambda;
    rec.feasible = r.feasible;
    rec.rap_calls = r.rap_calls;
    return rec;
}

json energy_json(const EnergyBreakdown& e, const Ecosystem& eco) {
    json j = {{"e_tot", num(e.e_tot)}, {"e_cmp", num(e.e_cmp)}, {"e_net", num(e.e_net)},
              {"e_sr", num(e.e_sr)},   {"e_lr", num(e.e_lr)},   {"e_bh", num(e.e_bh)},
              {"e_mobile", num(e.e_mobile)}, {"t_dag", num(e.t_dag)}};
    json nodes = json::array();
    for (std::size_t n = 0; n < e.per_node.size(); ++n)
        nodes.push_back({{"node", node_name(eco, static_cast<int>(n))},
                         {"static", num(e.per_node[n].static_part)},
                         {"dynamic", num(e.per_node[n].dynamic_part)}});
    j["per_node"] = nodes;
    json conns = json::array();
    for (const auto& c : e.per_connection)
        conns.push_back({{"from", node_name(eco, c.from)}, {"to", node_name(eco, c.to)},
                         {"volume", num(c.volume)}, {"static", num(c.energy.static_part)},
                         {"dynamic", num(c.energy.dynamic_part)}});
    j["per_connection"] = conns;
    return j;
}

EnergyBreakdown energy_from_json(const json& j, const Ecosystem& eco) {
    EnergyBreakdown e;
    e.e_tot = get_num(j.at("e_tot"));
    e.e_cmp = get_num(j.at("e_cmp"));
    e.e_net = get_num(j.at("e_net"));
    e.e_sr = get_num(j.at("e_sr"));
    e.e_lr = get_num(j.at("e_lr"));
    e.e_bh = get_num(j.at("e_bh"));
    e.e_mobile = get_num(j.at("e_mobile"));
    e.t_dag = get_num(j.at("t_dag"));
    for (const auto& n : j.at("per_node"))
        e.per_node.push_back({get_num(n.at("static")), get_num(n.at("dynamic"))});
    for (const auto& c : j.at("per_connection"))
        e.per_connection.push_back({parse_node(eco, c.at("from").get<std::string>()),
                                    parse_node(eco, c.at("to").get<std::string>()), get_num(c.at("volume")),
                                    {get_num(c.at("static")), get_num(c.at("dynamic"))}});
    return e;
}

}  // namespace

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Agtas: return "A-GTA-S";
        case Strategy::Otas: return "OTA-S";
        case Strategy::Fog: return "A-OF-S";
        case Strategy::Cloud: return "A-OC-S";
        case Strategy::Mobile: return "A-OM-S";
        case Strategy::Aess: return "A-ES-S";
    }
    return "?";
}

const std::vector<Strategy>& all_strategies() {
    static const std::vector<Strategy> all{Strategy::Agtas, Strategy::Otas,   Strategy::Fog,
                                           Strategy::Cloud, Strategy::Mobile, Strategy::Aess};
    return all;
}

Strategy parse_strategy(const std::string& name) {
    for (Strategy s : all_strategies())
        if (to_string(s) == name) return s;
    throw ConfigError("unknown strategy '" + name + "'");
}

TapResult run_strategy(Strategy s, const ApplicationDag& dag, const Ecosystem& eco, const GaParams& ga,
                       const RapConfig& rap, long enumeration_cap) {
    switch (s) {
        case Strategy::Agtas: return solve_agtas(dag, eco, ga, rap);
        case Strategy::Otas: return solve_otas(dag, eco, ga);
        case Strategy::Fog: return solve_fixed(dag, eco, Preset::Fog, rap);
        case Strategy::Cloud: return solve_fixed(dag, eco, Preset::Cloud, rap);
        case Strategy::Mobile: return solve_fixed(dag, eco, Preset::Mobile, rap);
        case Strategy::Aess: return solve_aess(dag, eco, rap, enumeration_cap);
    }
    throw ConfigError("unknown strategy");
}

ApplicationDag resolve_dag(const DagSpec& spec) {
    ApplicationDag dag = spec.builtin ? builtin_dag(*spec.builtin, spec.seed) : load_dag(spec.path);
    if (spec.ccr) {
        const auto [ts, te] = totals_for_ccr(dag, kCcrSweepTotal, *spec.ccr);
        dag = scale_to_totals(dag, ts, te);
    }
    return dag;
}

LinkRef parse_link(const std::string& spec, const Ecosystem& eco) {
    LinkRef l{};
    std::string a, b;
    if (const auto p = spec.find("->"); p != std::string::npos) {
        a = spec.substr(0, p);
        b = spec.substr(p + 2);
        l.both_directions = false;
    } else if (const auto q = spec.find('-'); q != std::string::npos) {
        a = spec.substr(0, q);
        b = spec.substr(q + 1);
        l.both_directions = true;
    } else {
        throw ConfigError("link '" + spec + "' must look like M-F1 or M->F1");
    }
    l.from = parse_node(eco, a);
    l.to = parse_node(eco, b);
    const int other = l.from == kMobile ? l.to : l.from;
    if ((l.from != kMobile && l.to != kMobile) || other == kMobile)
        throw ConfigError("link '" + spec + "' must join M with a Fog node");
    if (other == eco.cloud()) throw ConfigError("link '" + spec + "': only WiFi (M-Fog) links can be switched");
    return l;
}

void validate_scenario(const Scenario& sc) {
    validate_ecosystem(sc.eco);
    validate_rap_config(sc.rap);
    if (sc.trials < 1) throw ConfigError("scenario: trials must be >= 1");
    if (sc.iterations < 1) throw ConfigError("scenario: iterations must be >= 1");
    if (sc.av_wifi && !(*sc.av_wifi >= 0 && *sc.av_wifi <= 1))
        throw ConfigError("scenario: av_wifi must lie in [0,1]");
    int last = 0;
    for (const auto& ev : sc.timeline) {
        if (ev.iteration <= last) throw ConfigError("scenario: event indices must be strictly increasing");
        if (ev.iteration > sc.iterations) throw ConfigError("scenario: event after the last iteration");
        last = ev.iteration;
        for (const auto& l : ev.link_on) parse_link(l, sc.eco);
        for (const auto& l : ev.link_off) parse_link(l, sc.eco);
        if (ev.tdag_max && !(*ev.tdag_max > 0)) throw ConfigError("scenario: tdag_max must be positive");
    }
}

Scenario scenario_from_json(const json& j, const std::string& base_dir) {
    try {
        require_keys(j, {"dag", "ecosystem", "service_model", "tdag_max", "strategy", "ga", "rap", "allocation",
                         "timeline", "iterations", "trials", "seed", "av_wifi"},
                     "scenario");
        Scenario sc;
        auto resolve = [&](const std::string& p) {
            const std::filesystem::path path(p);
            return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string();
        };
        if (j.contains("dag")) {
            const json& d = j.at("dag");
            require_keys(d, {"builtin", "file", "seed", "ccr"}, "scenario.dag");
            if (d.contains("file")) {
                sc.dag.builtin.reset();
                sc.dag.path = resolve(d.at("file").get<std::string>());
            } else if (d.contains("builtin")) {
                sc.dag.builtin = parse_builtin_dag(d.at("builtin").get<std::string>());
            }
            if (d.contains("seed")) sc.dag.seed = d.at("seed").get<std::uint64_t>();
            if (d.contains("ccr")) sc.dag.ccr = d.at("ccr").get<double>();
        }
        if (j.contains("ecosystem")) sc.eco = load_ecosystem(resolve(j.at("ecosystem").get<std::string>()));
        if (j.contains("service_model")) {
            const auto m = j.at("service_model").get<std::string>();
            if (m == "eco-centric")
                sc.eco.service_model = ServiceModel::eco_centric();
            else if (m == "mobile-centric")
                sc.eco.service_model = ServiceModel::mobile_centric();
            else
                throw ConfigError("scenario: service_model must be eco-centric or mobile-centric");
        }
        if (j.contains("tdag_max")) sc.eco.set_tdag_max(j.at("tdag_max").get<double>());
        if (j.contains("strategy")) sc.strategy = parse_strategy(j.at("strategy").get<std::string>());
        if (j.contains("ga")) {
            const json& g = j.at("ga");
            require_keys(g, {"ps", "cf", "g_max", "mn", "pure_random_init"}, "scenario.ga");
            if (g.contains("ps")) sc.ga.ps = g.at("ps").get<int>();
            if (g.contains("cf")) sc.ga.cf = g.at("cf").get<double>();
            if (g.contains("g_max")) sc.ga.g_max = g.at("g_max").get<int>();
            if (g.contains("mn")) sc.ga.mn = g.at("mn").get<int>();
            if (g.contains("pure_random_init")) sc.ga.pure_random_init = g.at("pure_random_init").get<bool>();
        }
        if (j.contains("rap")) {
            const json& r = j.at("rap");
            require_keys(r, {"i_max", "a_max", "r_exp", "floor_eps"}, "scenario.rap");
            if (r.contains("i_max")) sc.rap.i_max = r.at("i_max").get<int>();
            if (r.contains("a_max")) sc.rap.a_max = r.at("a_max").get<double>();
            if (r.contains("r_exp")) sc.rap.r_exp = r.at("r_exp").get<double>();
            if (r.contains("floor_eps")) sc.rap.floor_eps = r.at("floor_eps").get<double>();
        }
        if (j.contains("allocation")) sc.allocation = j.at("allocation").get<std::string>();
        if (j.contains("timeline")) {
            for (const json& e : j.at("timeline")) {
                require_keys(e, {"at", "link_on", "link_off", "allocation", "tdag_max"}, "scenario.timeline");
                TimelineEvent ev;
                ev.iteration = e.at("at").get<int>();
                if (e.contains("link_on")) ev.link_on = e.at("link_on").get<std::vector<std::string>>();
                if (e.contains("link_off")) ev.link_off = e.at("link_off").get<std::vector<std::string>>();
                if (e.contains("allocation")) ev.allocation = e.at("allocation").get<std::string>();
                if (e.contains("tdag_max")) ev.tdag_max = e.at("tdag_max").get<double>();
                sc.timeline.push_back(std::move(ev));
            }
        }
        if (j.contains("iterations")) sc.iterations = j.at("iterations").get<int>();
        if (j.contains("trials")) sc.trials = j.at("trials").get<int>();
        if (j.contains("seed")) sc.base_seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("av_wifi")) sc.av_wifi = j.at("av_wifi").get<double>();
        validate_scenario(sc);
        return sc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed scenario: ") + e.what());
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    } catch (const StructuralError& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    const auto dir = std::filesystem::path(path).parent_path().string();
    return scenario_from_json(read_json_file(path), dir.empty() ? "." : dir);
}

Scenario default_tracking_scenario() {
    Scenario sc;
    sc.dag.builtin = BuiltinDag::Dag1;
    sc.eco.set_tdag_max(0.3);
    sc.allocation = "cloud";
    sc.iterations = 5000;
    TimelineEvent e1;
    e1.iteration = 1;
    e1.link_off = {"M-F1"};
    e1.allocation = "cloud";
    TimelineEvent e2;
    e2.iteration = 1000;
    e2.link_on = {"M-F1"};
    e2.allocation = "mobile";
    TimelineEvent e3;
    e3.iteration = 2000;
    e3.allocation = "cloud";
    TimelineEvent e4;
    e4.iteration = 3000;
    e4.allocation = "fog";
    TimelineEvent e5;
    e5.iteration = 4000;
    e5.allocation = "cloud";
    sc.timeline = {e1, e2, e3, e4, e5};
    return sc;
}

RunReport run_tracking(const Scenario& sc) {
    validate_scenario(sc);
    const ApplicationDag dag = resolve_dag(sc.dag);
    Ecosystem eco = sc.eco;
    const Ecosystem original = sc.eco;
    std::string alloc = sc.allocation;

    std::vector<int> starts{1};
    for (const auto& ev : sc.timeline)
        if (ev.iteration > 1) starts.push_back(ev.iteration);

    RunReport rep;
    rep.kind = "tracking";
    std::optional<Eigen::VectorXd> warm;
    double warm_lambda = 0;
    std::size_t next_event = 0;
    for (std::size_t r = 0; r < starts.size(); ++r) {
        const int start = starts[r];
        const int end = r + 1 < starts.size() ? starts[r + 1] - 1 : sc.iterations;
        if (next_event < sc.timeline.size() && sc.timeline[next_event].iteration == start) {
            const auto& ev = sc.timeline[next_event++];
            for (const auto& l : ev.link_off) set_wifi(eco, parse_link(l, eco), 0.0);
            for (const auto& l : ev.link_on) {
                const LinkRef ref = parse_link(l, eco);
                const int fog = ref.from == kMobile ? ref.to : ref.from;
                if (ref.both_directions || ref.from == kMobile)
                    eco.uplink[fog - 1].r_max = original.uplink[fog - 1].r_max;
                if (ref.both_directions || ref.to == kMobile)
                    eco.downlink[fog - 1].r_max = original.downlink[fog - 1].r_max;
            }
            if (ev.allocation) alloc = *ev.allocation;
            if (ev.tdag_max) eco.set_tdag_max(*ev.tdag_max);
        }
        const TaskAllocation x = parse_allocation(alloc, dag.size(), eco);
        RapConfig cfg = sc.rap;
        cfg.i_max = end - start + 1;
        cfg.warm_rs = warm;
        cfg.warm_lambda = std::isfinite(warm_lambda) ? warm_lambda : 0.0;
        cfg.early_exit_tol = 0;
        cfg.record_trace = true;
        const RapResult res = solve_rap(dag, eco, x, cfg);

        RegimeRecord reg;
        reg.start = start;
        reg.end = end;
        reg.allocation = format_allocation(x, eco);
        reg.feasible = res.feasible;
        double peak = cfg.warm_lambda;
        for (const auto& p : res.trace) peak = std::max(peak, p.lambda);
        reg.lambda_peak = peak;
        reg.lambda_final = res.trace.empty() ? res.lambda : res.trace.back().lambda;
        int last_above = 0;
        for (const auto& p : res.trace)
            if (!(p.lambda <= kLambdaVanishTol * peak)) last_above = p.m;
        reg.settle_iterations = last_above;
        reg.lambda_vanished = res.feasible && reg.lambda_final <= kLambdaVanishTol * peak;
        if (!reg.lambda_vanished) reg.settle_iterations = -1;
        reg.e_tot_final = res.trace.empty() ? res.energy.e_tot : res.trace.back().e_tot;
        rep.regimes.push_back(reg);
        for (auto p : res.trace) {
            p.m += start - 1;
            rep.trace.push_back(p);
        }
        if (res.feasible) {
            warm = res.iterate;
            warm_lambda = res.lambda;
        } else {
            warm_lambda = 0;
        }
    }
    return rep;
}

WifiDraw draw_wifi(double av_wifi, std::uint64_t seed) {
    Rng rng(seed ^ 0x5bd1e9955bd1e995ULL);
    const double gate = uniform01(rng);
    const double scale = uniform01(rng);
    const bool on = gate < av_wifi;
    return {on, on ? scale : 0.0};
}

Ecosystem apply_wifi(const Ecosystem& eco, const WifiDraw& d) {
    Ecosystem e = eco;
    for (int l = 0; l < e.q; ++l) {
        e.uplink[l].r_max *= d.scale;
        e.downlink[l].r_max *= d.scale;
    }
    return e;
}

std::vector<Aggregate> aggregate_trials(const std::vector<TrialRecord>& trials) {
    std::vector<Aggregate> out;
    std::vector<std::vector<const TrialRecord*>> groups;
    for (const auto& t : trials) {
        auto it = std::find_if(out.begin(), out.end(), [&](const Aggregate& a) { return a.value == t.value; });
        if (it == out.end()) {
            out.push_back({});
            out.back().value = t.value;
            groups.emplace_back();
            it = out.end() - 1;
        }
        groups[it - out.begin()].push_back(&t);
    }
    for (std::size_t g = 0; g < out.size(); ++g) {
        Aggregate& a = out[g];
        a.trials = static_cast<int>(groups[g].size());
        a.min_e_tot = kInf;
        a.max_e_tot = -kInf;
        for (const TrialRecord* t : groups[g]) {
            if (!t->feasible) continue;
            ++a.feasible;
            a.mean_e_tot += t->energy.e_tot;
            a.mean_e_net += t->energy.e_net;
            a.mean_e_mobile += t->energy.e_mobile;
            a.min_e_tot = std::min(a.min_e_tot, t->energy.e_tot);
            a.max_e_tot = std::max(a.max_e_tot, t->energy.e_tot);
        }
        if (a.feasible == 0) {
            a.mean_e_tot = a.mean_e_net = a.mean_e_mobile = a.min_e_tot = a.max_e_tot = kInf;
        } else {
            a.mean_e_tot /= a.feasible;
            a.mean_e_net /= a.feasible;
            a.mean_e_mobile /= a.feasible;
        }
    }
    return out;
}

RunReport run_sweep(const Scenario& base, const std::string& axis, const std::vector<double>& values) {
    static const std::set<std::string> axes{"tdag_max", "ccr", "ps", "cf", "av_wifi"};
    if (!axes.count(axis)) throw ConfigError("unknown sweep axis '" + axis + "'");
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    validate_scenario(base);
    RunReport rep;
    rep.kind = axis == "av_wifi" ? "availability" : "sweep";
    rep.axis = axis;
    for (double v : values) {
        Scenario sc = base;
        if (axis == "tdag_max") sc.eco.set_tdag_max(v);
        if (axis == "ccr") sc.dag.ccr = v;
        if (axis == "ps") sc.ga.ps = static_cast<int>(std::lround(v));
        if (axis == "cf") sc.ga.cf = v;
        if (axis == "av_wifi") sc.av_wifi = v;
        validate_scenario(sc);
        const ApplicationDag dag = resolve_dag(sc.dag);
        for (int t = 0; t < sc.trials; ++t) {
            const std::uint64_t seed = sc.base_seed + static_cast<std::uint64_t>(t);
            GaParams ga = sc.ga;
            ga.seed = seed;
            WifiDraw wifi{true, 1.0};
            if (sc.av_wifi) wifi = draw_wifi(*sc.av_wifi, seed);
            const Ecosystem eco = sc.av_wifi ? apply_wifi(sc.eco, wifi) : sc.eco;
            const TapResult r = run_strategy(sc.strategy, dag, eco, ga, sc.rap);
            TrialRecord rec = make_record(axis, v, t, seed, sc.strategy, r);
            rec.wifi_on = wifi.on;
            rec.wifi_scale = wifi.scale;
            rep.trials.push_back(std::move(rec));
        }
    }
    rep.aggregates = aggregate_trials(rep.trials);
    return rep;
}

RunReport run_availability(const Scenario& sc, int trials) {
    if (!sc.av_wifi) throw ConfigError("availability run needs av_wifi");
    Scenario s = sc;
    s.trials = trials;
    return run_sweep(s, "av_wifi", {*sc.av_wifi});
}

RunReport run_bench(const Scenario& sc, const std::vector<Strategy>& strategies) {
    validate_scenario(sc);
    const ApplicationDag dag = resolve_dag(sc.dag);
    RunReport rep;
    rep.kind = "bench";
    rep.axis = "strategy";
    for (std::size_t k = 0; k < strategies.size(); ++k)
        for (int t = 0; t < sc.trials; ++t) {
            const std::uint64_t seed = sc.base_seed + static_cast<std::uint64_t>(t);
            GaParams ga = sc.ga;
            ga.seed = seed;
            const TapResult r = run_strategy(strategies[k], dag, sc.eco, ga, sc.rap);
            rep.trials.push_back(make_record("strategy", static_cast<double>(k), t, seed, strategies[k], r));
        }
    rep.aggregates = aggregate_trials(rep.trials);
    return rep;
}

json report_to_json(const RunReport& r, const Ecosystem& eco) {
    json j;
    j["kind"] = r.kind;
    j["axis"] = r.axis;
    json trials = json::array();
    for (const auto& t : r.trials) {
        json x = json::array();
        for (int n : t.x) x.push_back(node_name(eco, n));
        json rs = json::array();
        for (int l = 0; l < t.rs.size(); ++l) rs.push_back(num(t.rs(l)));
        trials.push_back({{"axis", t.axis},
                          {"value", t.value},
                          {"trial", t.trial},
                          {"seed", t.seed},
                          {"strategy", t.strategy},
                          {"x", x},
                          {"rs", rs},
                          {"energy", energy_json(t.energy, eco)},
                          {"lambda", num(t.lambda)},
                          {"feasible", t.feasible},
                          {"rap_calls", t.rap_calls},
                          {"wifi_on", t.wifi_on},
                          {"wifi_scale", t.wifi_scale}});
    }
    j["trials"] = trials;
    json aggs = json::array();
    for (const auto& a : r.aggregates)
        aggs.push_back({{"value", a.value},
                        {"trials", a.trials},
                        {"feasible", a.feasible},
                        {"mean_e_tot", num(a.mean_e_tot)},
                        {"min_e_tot", num(a.min_e_tot)},
                        {"max_e_tot", num(a.max_e_tot)},
                        {"mean_e_net", num(a.mean_e_net)},
                        {"mean_e_mobile", num(a.mean_e_mobile)}});
    j["aggregates"] = aggs;
    json regs = json::array();
    for (const auto& g : r.regimes)
        regs.push_back({{"start", g.start},
                        {"end", g.end},
                        {"allocation", g.allocation},
                        {"feasible", g.feasible},
                        {"lambda_peak", num(g.lambda_peak)},
                        {"lambda_final", num(g.lambda_final)},
                        {"settle_iterations", g.settle_iterations},
                        {"lambda_vanished", g.lambda_vanished},
                        {"e_tot_final", num(g.e_tot_final)}});
    j["regimes"] = regs;
    json trace = json::array();
    for (const auto& p : r.trace) trace.push_back({p.m, num(p.e_tot), num(p.e_net), num(p.lambda)});
    j["trace"] = trace;
    j["files"] = r.files;
    return j;
}

RunReport report_from_json(const json& j, const Ecosystem& eco) {
    try {
        RunReport r;
        r.kind = j.at("kind").get<std::string>();
        r.axis = j.at("axis").get<std::string>();
        for (const json& t : j.at("trials")) {
            TrialRecord rec;
            rec.axis = t.at("axis").get<std::string>();
            rec.value = t.at("value").get<double>();
            rec.trial = t.at("trial").get<int>();
            rec.seed = t.at("seed").get<std::uint64_t>();
            rec.strategy = t.at("strategy").get<std::string>();
            for (const json& n : t.at("x")) rec.x.push_back(parse_node(eco, n.get<std::string>()));
            const json& rs = t.at("rs");
            rec.rs.resize(static_cast<Eigen::Index>(rs.size()));
            for (std::size_t l = 0; l < rs.size(); ++l) rec.rs(static_cast<Eigen::Index>(l)) = get_num(rs[l]);
            rec.energy = energy_from_json(t.at("energy"), eco);
            rec.lambda = get_num(t.at("lambda"));
            rec.feasible = t.at("feasible").get<bool>();
            rec.rap_calls = t.at("rap_calls").get<long>();
            rec.wifi_on = t.at("wifi_on").get<bool>();
            rec.wifi_scale = t.at("wifi_scale").get<double>();
            r.trials.push_back(std::move(rec));
        }
        for (const json& a : j.at("aggregates")) {
            Aggregate g;
            g.value = a.at("value").get<double>();
            g.trials = a.at("trials").get<int>();
            g.feasible = a.at("feasible").get<int>();
            g.mean_e_tot = get_num(a.at("mean_e_tot"));
            g.min_e_tot = get_num(a.at("min_e_tot"));
            g.max_e_tot = get_num(a.at("max_e_tot"));
            g.mean_e_net = get_num(a.at("mean_e_net"));
            g.mean_e_mobile = get_num(a.at("mean_e_mobile"));
            r.aggregates.push_back(g);
        }
        for (const json& g : j.at("regimes")) {
            RegimeRecord reg;
            reg.start = g.at("start").get<int>();
            reg.end = g.at("end").get<int>();
            reg.allocation = g.at("allocation").get<std::string>();
            reg.feasible = g.at("feasible").get<bool>();
            reg.lambda_peak = get_num(g.at("lambda_peak"));
            reg.lambda_final = get_num(g.at("lambda_final"));
            reg.settle_iterations = g.at("settle_iterations").get<int>();
            reg.lambda_vanished = g.at("lambda_vanished").get<bool>();
            reg.e_tot_final = get_num(g.at("e_tot_final"));
            r.regimes.push_back(reg);
        }
        for (const json& p : j.at("trace"))
            r.trace.push_back({p[0].get<int>(), get_num(p[1]), get_num(p[2]), get_num(p[3])});
        r.files = j.at("files").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed report: ") + e.what());
    }
}

std::vector<std::string> emit_report(const RunReport& r, const Ecosystem& eco, const std::string& dir,
                                     ReportFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create '" + dir + "': " + ec.message());
    const auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
    std::vector<std::string> written;
    if (format == ReportFormat::Json) {
        RunReport copy = r;
        copy.files = {"report.json"};
        write_json_file(report_to_json(copy, eco), path("report.json"));
        written.push_back(path("report.json"));
        return written;
    }
    {
        std::string s = "axis,value,trial,seed,strategy,feasible,x,wifi_on,wifi_scale,lambda,rap_calls," +
                        energy_csv_header(eco) + "\n";
        for (const auto& t : r.trials)
            s += t.axis + "," + general(t.value) + "," + std::to_string(t.trial) + "," + std::to_string(t.seed) +
                 "," + t.strategy + "," + (t.feasible ? "1" : "0") + "," + allocation_words(t.x, eco) + "," +
                 (t.wifi_on ? "1" : "0") + "," + fixed(t.wifi_scale, 4) + "," + general(t.lambda) + "," +
                 std::to_string(t.rap_calls) + "," + energy_csv_row(t.energy) + "\n";
        write_text_file(s, path("trials.csv"));
        written.push_back(path("trials.csv"));
    }
    {
        std::string s = "value,trials,feasible,mean_e_tot,min_e_tot,max_e_tot,mean_e_net,mean_e_mobile\n";
        for (const auto& a : r.aggregates)
            s += general(a.value) + "," + std::to_string(a.trials) + "," + std::to_string(a.feasible) + "," +
                 fixed(a.mean_e_tot, 2) + "," + fixed(a.min_e_tot, 2) + "," + fixed(a.max_e_tot, 2) + "," +
                 fixed(a.mean_e_net, 2) + "," + fixed(a.mean_e_mobile, 2) + "\n";
        write_text_file(s, path("aggregates.csv"));
        written.push_back(path("aggregates.csv"));
    }
    if (!r.regimes.empty()) {
        std::string s =
            "start,end,allocation,feasible,lambda_peak,lambda_final,settle_iterations,lambda_vanished,e_tot_final\n";
        for (const auto& g : r.regimes) {
            std::string words = g.allocation;
            std::replace(words.begin(), words.end(), ',', ' ');
            s += std::to_string(g.start) + "," + std::to_string(g.end) + "," + words + "," +
                 (g.feasible ? "1" : "0") + "," + general(g.lambda_peak) + "," + general(g.lambda_final) + "," +
                 std::to_string(g.settle_iterations) + "," + (g.lambda_vanished ? "1" : "0") + "," +
                 fixed(g.e_tot_final, 2) + "\n";
        }
        write_text_file(s, path("regimes.csv"));
        written.push_back(path("regimes.csv"));
    }
    if (!r.trace.empty()) {
        std::string s = "m,e_tot,e_net,lambda\n";
        for (const auto& p : r.trace)
            s += std::to_string(p.m) + "," + general(p.e_tot) + "," + general(p.e_net) + "," + general(p.lambda) +
                 "\n";
        write_text_file(s, path("trace.csv"));
        written.push_back(path("trace.csv"));
    }
    return written;
}

}  // namespace mfc
