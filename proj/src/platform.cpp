#include "mfc/platform.hpp"

#include <cmath>
#include <fstream>

#include "mfc/error.hpp"
#include "mfc/io.hpp"

namespace mfc {

double BackhaulLinkSpec::r() const { return backhaul_throughput(mss, rtt, p_loss); }

int ServiceModel::theta(NodeKind kind) const {
    switch (kind) {
        case NodeKind::Mobile: return theta_m;
        case NodeKind::Fog: return theta_f;
        case NodeKind::Cloud: return theta_c;
    }
    return 0;
}

void Ecosystem::set_tdag_max(double seconds) {
    if (!(seconds > 0)) throw ParameterError("T_DAG^MAX must be positive");
    th_min = 1.0 / seconds;
}

std::pair<double, double> omega_coefficients(double rtt, double eta, double chi_tx, double chi_rx,
                                             double length_m, double alpha) {
    if (!(rtt > 0)) throw ParameterError("RTT must be positive");
    if (!(alpha > 2 && alpha <= 4)) throw ParameterError("path-loss exponent must lie in (2, 4]");
    const double scale = std::pow(rtt, eta) / (1.0 + std::pow(length_m, alpha));
    return {scale * chi_tx, scale * chi_rx};
}

void refresh_omegas(WirelessLinkSpec& link) {
    std::tie(link.omega_tx, link.omega_rx) =
        omega_coefficients(link.rtt, link.eta, link.chi_tx, link.chi_rx, link.length_m, link.alpha);
}

double backhaul_throughput(double mss, double rtt, double p_loss) {
    if (p_loss == 0) throw ParameterError("zero loss probability gives unbounded throughput");
    if (!(mss > 0) || !(rtt > 0) || !(p_loss > 0) || p_loss > 1)
        throw ParameterError("backhaul parameters out of range");
    return 1.22 * mss / (rtt * std::sqrt(p_loss));
}

double backhaul_dynamic_power(const BackhaulLinkSpec& link, const ServiceModel& sm) {
    return link.hops * link.p_hop * std::max(sm.theta_c, sm.theta_f);
}

Eigen::VectorXd max_resource_vector(const Ecosystem& eco) {
    Eigen::VectorXd rs(eco.rs_size());
    for (int n = 0; n < eco.node_count(); ++n) rs(n) = eco.nodes[n].f_max;
    for (int b = 0; b <= eco.q; ++b) {
        rs(eco.node_count() + 2 * b) = eco.uplink[b].r_max;
        rs(eco.node_count() + 2 * b + 1) = eco.downlink[b].r_max;
    }
    return rs;
}

int link_slot(const Ecosystem& eco, int from, int to) {
    if (from == to) throw StructuralError("a link needs two distinct nodes");
    if (from == kMobile) return eco.node_count() + 2 * (to - 1);
    if (to == kMobile) return eco.node_count() + 2 * (from - 1) + 1;
    return -1;
}

const WirelessLinkSpec& wireless_link(const Ecosystem& eco, int from, int to) {
    if (from == kMobile) return eco.uplink.at(to - 1);
    if (to == kMobile) return eco.downlink.at(from - 1);
    throw StructuralError("not a wireless link");
}

const BackhaulLinkSpec& backhaul_link(const Ecosystem& eco, int a, int b) {
    if (a > b) std::swap(a, b);
    for (const auto& l : eco.backhaul)
        if (l.a == a && l.b == b) return l;
    throw ConfigError("missing backhaul link " + node_name(eco, a) + "<->" + node_name(eco, b));
}

double link_nf(const Ecosystem& eco, int from, int to) {
    if (from == kMobile || to == kMobile) return wireless_link(eco, from, to).nf;
    return backhaul_link(eco, from, to).nf;
}

std::string node_name(const Ecosystem& eco, int node) {
    if (node == kMobile) return "M";
    if (node == eco.cloud()) return "C";
    return "F" + std::to_string(node);
}

int parse_node(const Ecosystem& eco, const std::string& name) {
    if (name == "M") return kMobile;
    if (name == "C") return eco.cloud();
    if (name == "F" && eco.q == 1) return 1;
    if (name.size() > 1 && name[0] == 'F') {
        try {
            const int l = std::stoi(name.substr(1));
            if (l >= 1 && l <= eco.q) return l;
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("unknown node '" + name + "'");
}

std::string resource_name(const Ecosystem& eco, int slot) {
    if (slot < eco.node_count()) return "f_" + node_name(eco, slot);
    const int b = (slot - eco.node_count()) / 2 + 1;
    const bool up = (slot - eco.node_count()) % 2 == 0;
    return up ? "R_M->" + node_name(eco, b) : "R_" + node_name(eco, b) + "->M";
}

void validate_ecosystem(const Ecosystem& eco) {
    auto require = [](bool cond, const std::string& what) {
        if (!cond) throw ConfigError("ecosystem: " + what);
    };
    require(eco.q >= 1, "at least one Fog node is required");
    require(static_cast<int>(eco.nodes.size()) == eco.node_count(), "node count must be q+2");
    require(static_cast<int>(eco.uplink.size()) == eco.q + 1 &&
                static_cast<int>(eco.downlink.size()) == eco.q + 1,
            "one uplink and one downlink per Fog/Cloud node");
    for (int n = 0; n < eco.node_count(); ++n) {
        const NodeSpec& s = eco.nodes[n];
        const NodeKind expect = n == kMobile ? NodeKind::Mobile
                                : n == eco.cloud() ? NodeKind::Cloud
                                                   : NodeKind::Fog;
        const std::string who = node_name(eco, n);
        require(s.kind == expect, who + " has the wrong kind");
        require(s.n >= 1, who + ": cores must be >= 1");
        require(s.f_max >= 0 && s.k >= 0, who + ": f_max and k must be non-negative");
        require(s.gamma >= 2, who + ": gamma must be >= 2");
        require(s.r >= 0 && s.r <= 1, who + ": r must lie in [0,1]");
        require(s.nc >= 1, who + ": nc must be >= 1");
        require(s.p_cpu_idle >= 0 && s.p_net_idle >= 0, who + ": idle powers must be non-negative");
    }
    for (const auto* dir : {&eco.uplink, &eco.downlink})
        for (const auto& l : *dir) {
            require(l.r_max >= 0 && l.nf >= 0, "wireless r_max and nf must be non-negative");
            require(l.xi_tx >= l.xi_rx && l.xi_rx >= 2, "wireless exponents need xi_tx >= xi_rx >= 2");
            require(l.omega_tx >= 0 && l.omega_rx >= 0, "wireless power coefficients must be non-negative");
        }
    for (int a = 1; a <= eco.cloud(); ++a)
        for (int b = a + 1; b <= eco.cloud(); ++b) {
            const auto& l = backhaul_link(eco, a, b);
            require(l.hops >= 1 && l.p_hop >= 0 && l.nf >= 0, "backhaul hops/power/nf out of range");
            require(l.mss > 0 && l.rtt > 0 && l.p_loss > 0 && l.p_loss <= 1, "backhaul TCP parameters out of range");
        }
    for (int t : {eco.service_model.theta_m, eco.service_model.theta_f, eco.service_model.theta_c})
        require(t == 0 || t == 1, "theta parameters must be binary");
    require(eco.th_min >= 0, "th_min must be non-negative");
}

namespace {

const char* to_cstr(ServiceDiscipline d) { return d == ServiceDiscipline::Seq ? "SEQ" : "WPS"; }
const char* to_cstr(SchedulingDiscipline d) { return d == SchedulingDiscipline::Sts ? "STS" : "PTS"; }
const char* to_cstr(NetworkTimeMode m) { return m == NetworkTimeMode::Sum ? "SUM" : "MAX"; }

template <class E>
E parse_enum(const std::string& s, const char* a, const char* b, E ea, E eb) {
    if (s == a) return ea;
    if (s == b) return eb;
    throw ConfigError("expected '" + std::string(a) + "' or '" + b + "', got '" + s + "'");
}

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

nlohmann::json wireless_json(const Ecosystem& eco, const WirelessLinkSpec& l, int from, int to) {
    return {{"from", node_name(eco, from)}, {"to", node_name(eco, to)}, {"r_max", l.r_max},
            {"nf", l.nf}, {"xi_tx", l.xi_tx}, {"xi_rx", l.xi_rx}, {"rtt", l.rtt}, {"eta", l.eta},
            {"chi_tx", l.chi_tx}, {"chi_rx", l.chi_rx}, {"length_m", l.length_m}, {"alpha", l.alpha},
            {"omega_tx", l.omega_tx}, {"omega_rx", l.omega_rx}};
}

}  // namespace

void to_json(nlohmann::json& j, const Ecosystem& eco) {
    j = nlohmann::json::object();
    j["q"] = eco.q;
    j["service_model"] = {{"theta_m", eco.service_model.theta_m},
                          {"theta_f", eco.service_model.theta_f},
                          {"theta_c", eco.service_model.theta_c}};
    j["service_discipline"] = to_cstr(eco.service_discipline);
    j["scheduling_discipline"] = to_cstr(eco.scheduling_discipline);
    j["network_time_mode"] = to_cstr(eco.network_time_mode);
    j["th_min"] = eco.th_min;
    auto nodes = nlohmann::json::array();
    for (int n = 0; n < eco.node_count(); ++n) {
        const NodeSpec& s = eco.nodes[n];
        nodes.push_back({{"id", node_name(eco, n)}, {"n", s.n}, {"f_max", s.f_max}, {"k", s.k},
                         {"gamma", s.gamma}, {"r", s.r}, {"nc", s.nc}, {"p_cpu_idle", s.p_cpu_idle},
                         {"p_net_idle", s.p_net_idle}});
    }
    j["nodes"] = nodes;
    auto wl = nlohmann::json::array();
    for (int b = 0; b <= eco.q; ++b) {
        wl.push_back(wireless_json(eco, eco.uplink[b], kMobile, b + 1));
        wl.push_back(wireless_json(eco, eco.downlink[b], b + 1, kMobile));
    }
    j["wireless"] = wl;
    auto bh = nlohmann::json::array();
    for (const auto& l : eco.backhaul)
        bh.push_back({{"between", {node_name(eco, l.a), node_name(eco, l.b)}}, {"hops", l.hops},
                      {"p_hop", l.p_hop}, {"mss", l.mss}, {"rtt", l.rtt}, {"p_loss", l.p_loss},
                      {"nf", l.nf}, {"r", l.r()}});
    j["backhaul"] = bh;
}

void from_json(const nlohmann::json& j, Ecosystem& eco) {
    try {
        Ecosystem e;
        e.q = j.at("q").get<int>();
        if (e.q < 1) throw ConfigError("ecosystem: q must be >= 1");
        if (j.contains("service_model")) {
            const auto& sm = j.at("service_model");
            e.service_model = {sm.at("theta_m").get<int>(), sm.at("theta_f").get<int>(),
                               sm.at("theta_c").get<int>()};
        }
        if (j.contains("service_discipline"))
            e.service_discipline = parse_enum(j.at("service_discipline").get<std::string>(), "SEQ", "WPS",
                                              ServiceDiscipline::Seq, ServiceDiscipline::Wps);
        if (j.contains("scheduling_discipline"))
            e.scheduling_discipline = parse_enum(j.at("scheduling_discipline").get<std::string>(), "STS",
                                                 "PTS", SchedulingDiscipline::Sts, SchedulingDiscipline::Pts);
        if (j.contains("network_time_mode"))
            e.network_time_mode = parse_enum(j.at("network_time_mode").get<std::string>(), "SUM", "MAX",
                                             NetworkTimeMode::Sum, NetworkTimeMode::Max);
        read_opt(j, "th_min", e.th_min);
        if (j.contains("tdag_max")) e.set_tdag_max(j.at("tdag_max").get<double>());

        e.nodes.assign(e.node_count(), NodeSpec{});
        std::vector<bool> seen(e.node_count(), false);
        for (const auto& jn : j.at("nodes")) {
            const int n = parse_node(e, jn.at("id").get<std::string>());
            NodeSpec& s = e.nodes[n];
            s.kind = n == kMobile ? NodeKind::Mobile : n == e.cloud() ? NodeKind::Cloud : NodeKind::Fog;
            read_opt(jn, "n", s.n);
            read_opt(jn, "f_max", s.f_max);
            read_opt(jn, "k", s.k);
            read_opt(jn, "gamma", s.gamma);
            read_opt(jn, "r", s.r);
            read_opt(jn, "nc", s.nc);
            read_opt(jn, "p_cpu_idle", s.p_cpu_idle);
            read_opt(jn, "p_net_idle", s.p_net_idle);
            seen[n] = true;
        }
        for (int n = 0; n < e.node_count(); ++n)
            if (!seen[n]) throw ConfigError("ecosystem: node " + node_name(e, n) + " is not described");

        e.uplink.assign(e.q + 1, WirelessLinkSpec{});
        e.downlink.assign(e.q + 1, WirelessLinkSpec{});
        for (const auto& jl : j.at("wireless")) {
            const int from = parse_node(e, jl.at("from").get<std::string>());
            const int to = parse_node(e, jl.at("to").get<std::string>());
            if ((from == kMobile) == (to == kMobile))
                throw ConfigError("ecosystem: wireless links join M with a Fog/Cloud node");
            WirelessLinkSpec& l = from == kMobile ? e.uplink[to - 1] : e.downlink[from - 1];
            read_opt(jl, "r_max", l.r_max);
            read_opt(jl, "nf", l.nf);
            read_opt(jl, "xi_tx", l.xi_tx);
            read_opt(jl, "xi_rx", l.xi_rx);
            read_opt(jl, "rtt", l.rtt);
            read_opt(jl, "eta", l.eta);
            read_opt(jl, "chi_tx", l.chi_tx);
            read_opt(jl, "chi_rx", l.chi_rx);
            read_opt(jl, "length_m", l.length_m);
            read_opt(jl, "alpha", l.alpha);
            refresh_omegas(l);
        }
        for (const auto& jb : j.at("backhaul")) {
            BackhaulLinkSpec l;
            const auto pair = jb.at("between");
            l.a = parse_node(e, pair.at(0).get<std::string>());
            l.b = parse_node(e, pair.at(1).get<std::string>());
            if (l.a == kMobile || l.b == kMobile || l.a == l.b)
                throw ConfigError("ecosystem: backhaul links join two distinct Fog/Cloud nodes");
            if (l.a > l.b) std::swap(l.a, l.b);
            read_opt(jb, "hops", l.hops);
            read_opt(jb, "p_hop", l.p_hop);
            read_opt(jb, "mss", l.mss);
            read_opt(jb, "rtt", l.rtt);
            read_opt(jb, "p_loss", l.p_loss);
            read_opt(jb, "nf", l.nf);
            e.backhaul.push_back(l);
        }
        validate_ecosystem(e);
        eco = std::move(e);
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("malformed ecosystem document: ") + ex.what());
    } catch (const ParameterError& ex) {
        throw ConfigError(std::string("ecosystem: ") + ex.what());
    }
}

Ecosystem load_ecosystem(const std::string& path) {
    return read_json_file(path).get<Ecosystem>();
}

void save_ecosystem(const Ecosystem& eco, const std::string& path) {
    write_json_file(nlohmann::json(eco), path);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

void write_json_file(const nlohmann::json& doc, const std::string& path) {
    write_text_file(doc.dump(2) + "\n", path);
}

}  // namespace mfc
