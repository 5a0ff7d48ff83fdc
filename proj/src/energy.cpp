#include "mfc/energy.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "mfc/error.hpp"
#include "mfc/timing.hpp"

namespace mfc {

namespace {

template <class Scalar>
Scalar times_time(double coefficient, Scalar t) {
    return coefficient == 0 ? Scalar(0) : Scalar(coefficient) * t;
}

}  // namespace

template <class Scalar>
EnergyParts<Scalar> computing_energy(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                                     const Vector<Scalar>& rs, Scalar t_dag, int node) {
    bool hosts = false;
    for (int i = 0; i < dag.size(); ++i) hosts = hosts || x[i] == node;
    if (!hosts) return {};
    const NodeSpec& s = eco.nodes[node];
    EnergyParts<Scalar> e;
    e.static_part = times_time(s.p_cpu_idle / s.nc, t_dag);
    const Scalar f = rs(node);
    if (!(f > 0)) {
        e.dynamic_part = std::numeric_limits<Scalar>::infinity();
        return e;
    }
    const Scalar t_ser = node_total_service_time(dag, eco, x, rs, node);
    e.dynamic_part = Scalar(s.n * (1.0 - s.r) * s.k) * std::pow(f, Scalar(s.gamma)) * t_ser;
    return e;
}

template <class Scalar>
Scalar wireless_dynamic_power(const WirelessLinkSpec& link, Scalar r, int theta_src, int theta_dst) {
    if (!(r > 0)) return Scalar(0);
    return Scalar(theta_src * link.omega_tx) * std::pow(r, Scalar(link.xi_tx)) +
           Scalar(theta_dst * link.omega_rx) * std::pow(r, Scalar(link.xi_rx));
}

template <class Scalar>
Scalar wireless_dynamic_power(const Ecosystem& eco, int from, int to, Scalar r) {
    return wireless_dynamic_power(wireless_link(eco, from, to), r, eco.theta(from), eco.theta(to));
}

double connection_volume(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x, int from,
                         int to) {
    if (from == to) throw ParameterError("source and destination nodes coincide");
    double raw = 0;
    for (int i = 0; i < dag.size(); ++i) {
        if (x[i] != from) continue;
        for (int j = 0; j < dag.size(); ++j)
            if (dag.adjacency(i, j) != 0 && x[j] == to) raw += dag.edge_weights(i, j);
    }
    return raw == 0 ? 0.0 : (1.0 + link_nf(eco, from, to)) * raw;
}

template <class Scalar>
EnergyParts<Scalar> oneway_network_energy(const ApplicationDag& dag, const Ecosystem& eco,
                                          const TaskAllocation& x, const Vector<Scalar>& rs, Scalar t_dag,
                                          int from, int to) {
    const double vol = connection_volume(dag, eco, x, from, to);
    if (vol == 0) return {};
    EnergyParts<Scalar> e;
    e.static_part = times_time(eco.theta(from) * eco.nodes[from].p_net_idle +
                                   eco.theta(to) * eco.nodes[to].p_net_idle,
                               t_dag);
    const Scalar r = link_throughput(eco, rs, from, to);
    if (!(r > 0)) {
        e.dynamic_part = std::numeric_limits<Scalar>::infinity();
        return e;
    }
    const Scalar power = link_slot(eco, from, to) >= 0
                             ? wireless_dynamic_power(eco, from, to, r)
                             : Scalar(backhaul_dynamic_power(backhaul_link(eco, from, to), eco.service_model));
    e.dynamic_part = power == Scalar(0) ? Scalar(0) : power * Scalar(vol) / r;
    return e;
}

template <class Scalar>
BasicEnergyBreakdown<Scalar> total_energy_at(const ApplicationDag& dag, const Ecosystem& eco,
                                             const TaskAllocation& x, const Vector<Scalar>& rs, Scalar t_dag) {
    BasicEnergyBreakdown<Scalar> out;
    out.t_dag = t_dag;
    for (int n = 0; n < eco.node_count(); ++n) {
        const auto e = computing_energy(dag, eco, x, rs, t_dag, n);
        out.per_node.push_back(e);
        if (eco.theta(n) != 0) out.e_cmp += e.total();
    }
    out.e_mobile = out.per_node[kMobile].total();
    for (int from = 0; from < eco.node_count(); ++from) {
        for (int to = 0; to < eco.node_count(); ++to) {
            if (from == to) continue;
            const double vol = connection_volume(dag, eco, x, from, to);
            if (vol == 0) continue;
            const auto e = oneway_network_energy(dag, eco, x, rs, t_dag, from, to);
            out.per_connection.push_back({from, to, vol, e});
            if (from == kMobile || to == kMobile) {
                const int other = from == kMobile ? to : from;
                (other == eco.cloud() ? out.e_lr : out.e_sr) += e.total();
                // Mobile-side share: its radio dynamic term and its NIC idle power.
                const WirelessLinkSpec& link = wireless_link(eco, from, to);
                const Scalar r = link_throughput(eco, rs, from, to);
                const bool tx = from == kMobile;
                const Scalar p = wireless_dynamic_power(link, r, tx ? 1 : 0, tx ? 0 : 1);
                if (!(r > 0))
                    out.e_mobile = std::numeric_limits<Scalar>::infinity();
                else if (p > 0)
                    out.e_mobile += p * Scalar(vol) / r;
                out.e_mobile += times_time(eco.nodes[kMobile].p_net_idle, t_dag);
            } else {
                out.e_bh += e.total();
            }
        }
    }
    out.e_net = out.e_sr + out.e_lr + out.e_bh;
    out.e_tot = out.e_cmp + out.e_net;
    return out;
}

template <class Scalar>
BasicEnergyBreakdown<Scalar> total_energy(const ApplicationDag& dag, const Ecosystem& eco,
                                          const TaskAllocation& x, const Vector<Scalar>& rs) {
    return total_energy_at(dag, eco, x, rs, dag_execution_time(dag, eco, x, rs));
}

EnergyBreakdown infinite_energy(const Ecosystem& eco) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    EnergyBreakdown e;
    e.e_tot = e.e_cmp = e.e_net = e.e_sr = e.e_lr = e.e_bh = e.e_mobile = e.t_dag = inf;
    e.per_node.assign(eco.node_count(), EnergyParts<double>{inf, inf});
    return e;
}

std::string energy_csv_header(const Ecosystem& eco) {
    std::string h = "e_tot,e_cmp,e_net,e_sr,e_lr,e_bh,e_mobile,t_dag";
    for (int n = 0; n < eco.node_count(); ++n) {
        const std::string name = node_name(eco, n);
        h += "," + name + "_static," + name + "_dynamic";
    }
    return h;
}

std::string energy_csv_row(const EnergyBreakdown& e, int precision) {
    auto fmt = [precision](double v) {
        if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", precision, v);
        return std::string(buf);
    };
    std::string row = fmt(e.e_tot) + "," + fmt(e.e_cmp) + "," + fmt(e.e_net) + "," + fmt(e.e_sr) + "," +
                      fmt(e.e_lr) + "," + fmt(e.e_bh) + "," + fmt(e.e_mobile) + "," + fmt(e.t_dag);
    for (const auto& p : e.per_node) row += "," + fmt(p.static_part) + "," + fmt(p.dynamic_part);
    return row;
}

#define MFC_INSTANTIATE_ENERGY(S)                                                                          \
    template EnergyParts<S> computing_energy<S>(const ApplicationDag&, const Ecosystem&,                   \
                                                const TaskAllocation&, const Vector<S>&, S, int);          \
    template S wireless_dynamic_power<S>(const WirelessLinkSpec&, S, int, int);                            \
    template S wireless_dynamic_power<S>(const Ecosystem&, int, int, S);                                   \
    template EnergyParts<S> oneway_network_energy<S>(const ApplicationDag&, const Ecosystem&,              \
                                                     const TaskAllocation&, const Vector<S>&, S, int, int);\
    template BasicEnergyBreakdown<S> total_energy_at<S>(const ApplicationDag&, const Ecosystem&,           \
                                                        const TaskAllocation&, const Vector<S>&, S);       \
    template BasicEnergyBreakdown<S> total_energy<S>(const ApplicationDag&, const Ecosystem&,              \
                                                     const TaskAllocation&, const Vector<S>&);

MFC_INSTANTIATE_ENERGY(double)
MFC_INSTANTIATE_ENERGY(long double)

}  // namespace mfc
