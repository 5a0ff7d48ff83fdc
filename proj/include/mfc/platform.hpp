#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mfc {

enum class NodeKind { Mobile, Fog, Cloud };
enum class ServiceDiscipline { Seq, Wps };
enum class SchedulingDiscipline { Sts, Pts };
enum class NetworkTimeMode { Sum, Max };

struct NodeSpec {
    NodeKind kind = NodeKind::Mobile;
    int n = 1;                // virtual cores
    double f_max = 0;         // bit/s per core; 0 forbids placement
    double k = 0;             // W/(bit/s)^gamma
    double gamma = 2;
    double r = 0;             // shared-power fraction
    double nc = 1;            // containers per server
    double p_cpu_idle = 0;    // W
    double p_net_idle = 0;    // W
};

// One direction of a Mobile <-> {Fog, Cloud} radio link.
struct WirelessLinkSpec {
    double r_max = 0;  // bit/s; 0 means the link is absent
    double nf = 0;
    double xi_tx = 2;
    double xi_rx = 2;
    double rtt = 0.01;  // s
    double eta = 0;
    double chi_tx = 0;
    double chi_rx = 0;
    double length_m = 0;
    double alpha = 3;
    double omega_tx = 0;  // derived from the raw inputs above
    double omega_rx = 0;
};

// Two-way wired/multi-hop link between members of {F1..FQ, C}.
struct BackhaulLinkSpec {
    int a = 1;  // node indices, a < b
    int b = 2;
    int hops = 1;
    double p_hop = 0;   // W per hop
    double mss = 0;     // bit
    double rtt = 0;     // s
    double p_loss = 1;
    double nf = 0;
    double r() const;   // bit/s
};

struct ServiceModel {
    int theta_m = 1;
    int theta_f = 1;
    int theta_c = 1;

    static ServiceModel eco_centric() { return {1, 1, 1}; }
    static ServiceModel mobile_centric() { return {1, 0, 0}; }
    int theta(NodeKind kind) const;
    bool operator==(const ServiceModel&) const = default;
};

// Node indices: 0 = M, 1..q = F1..Fq, q+1 = C. Resource vector layout:
// [f_M, f_F1..f_Fq, f_C, R_{M->F1}, R_{F1->M}, ..., R_{M->C}, R_{C->M}].
struct Ecosystem {
    int q = 1;
    std::vector<NodeSpec> nodes;
    std::vector<WirelessLinkSpec> uplink;    // M -> node b+1
    std::vector<WirelessLinkSpec> downlink;  // node b+1 -> M
    std::vector<BackhaulLinkSpec> backhaul;
    ServiceModel service_model;
    ServiceDiscipline service_discipline = ServiceDiscipline::Seq;
    SchedulingDiscipline scheduling_discipline = SchedulingDiscipline::Sts;
    NetworkTimeMode network_time_mode = NetworkTimeMode::Sum;
    double th_min = 1.0 / 0.3;  // app/s

    int node_count() const { return q + 2; }
    int cloud() const { return q + 1; }
    int rs_size() const { return 3 * q + 4; }
    int theta(int node) const { return service_model.theta(nodes[node].kind); }
    double tdag_max() const { return 1.0 / th_min; }
    void set_tdag_max(double seconds);
};

inline constexpr int kMobile = 0;

// Throws ConfigError describing the first inconsistency found.
void validate_ecosystem(const Ecosystem& eco);

std::pair<double, double> omega_coefficients(double rtt, double eta, double chi_tx, double chi_rx,
                                             double length_m, double alpha);
void refresh_omegas(WirelessLinkSpec& link);

double backhaul_throughput(double mss, double rtt, double p_loss);
double backhaul_dynamic_power(const BackhaulLinkSpec& link, const ServiceModel& sm);

Eigen::VectorXd max_resource_vector(const Ecosystem& eco);

// Resource-vector slot of the directed link from -> to, or -1 for backhaul.
int link_slot(const Ecosystem& eco, int from, int to);
const WirelessLinkSpec& wireless_link(const Ecosystem& eco, int from, int to);
const BackhaulLinkSpec& backhaul_link(const Ecosystem& eco, int a, int b);
double link_nf(const Ecosystem& eco, int from, int to);

std::string node_name(const Ecosystem& eco, int node);
int parse_node(const Ecosystem& eco, const std::string& name);
std::string resource_name(const Ecosystem& eco, int slot);

// Artifact default parameter set; see data/default_ecosystem.json.
Ecosystem default_ecosystem(int q = 1);

Ecosystem load_ecosystem(const std::string& path);
void save_ecosystem(const Ecosystem& eco, const std::string& path);

}  // namespace mfc
