#pragma once

#include <string>
#include <vector>

#include "mfc/allocation.hpp"
#include "mfc/dag.hpp"
#include "mfc/platform.hpp"

namespace mfc {

template <class Scalar>
struct EnergyParts {
    Scalar static_part{0};
    Scalar dynamic_part{0};
    Scalar total() const { return static_part + dynamic_part; }
};

template <class Scalar>
struct ConnectionEnergy {
    int from = 0;
    int to = 0;
    double volume = 0;  // bit, including the failure overhead
    EnergyParts<Scalar> energy;
};

// Joules. per_node is reported without theta gating; every other field is
// gated by the service model. e_mobile is gating-independent.
template <class Scalar>
struct BasicEnergyBreakdown {
    Scalar e_tot{0};
    Scalar e_cmp{0};
    Scalar e_net{0};
    Scalar e_sr{0};  // Mobile <-> Fog
    Scalar e_lr{0};  // Mobile <-> Cloud
    Scalar e_bh{0};  // Fog <-> Fog and Fog <-> Cloud
    Scalar e_mobile{0};
    Scalar t_dag{0};
    std::vector<EnergyParts<Scalar>> per_node;
    std::vector<ConnectionEnergy<Scalar>> per_connection;  // ordered pairs with traffic
};

using EnergyBreakdown = BasicEnergyBreakdown<double>;

template <class Scalar>
EnergyParts<Scalar> computing_energy(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                                     const Vector<Scalar>& rs, Scalar t_dag, int node);

template <class Scalar>
Scalar wireless_dynamic_power(const WirelessLinkSpec& link, Scalar r, int theta_src, int theta_dst);

// Power drawn on the directed wireless link from -> to at throughput r.
template <class Scalar>
Scalar wireless_dynamic_power(const Ecosystem& eco, int from, int to, Scalar r);

double connection_volume(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x, int from,
                         int to);

template <class Scalar>
EnergyParts<Scalar> oneway_network_energy(const ApplicationDag& dag, const Ecosystem& eco,
                                          const TaskAllocation& x, const Vector<Scalar>& rs, Scalar t_dag,
                                          int from, int to);

// Breakdown with static terms priced at the supplied DAG time.
template <class Scalar>
BasicEnergyBreakdown<Scalar> total_energy_at(const ApplicationDag& dag, const Ecosystem& eco,
                                             const TaskAllocation& x, const Vector<Scalar>& rs, Scalar t_dag);

// Breakdown at the exact DAG time.
template <class Scalar>
BasicEnergyBreakdown<Scalar> total_energy(const ApplicationDag& dag, const Ecosystem& eco,
                                          const TaskAllocation& x, const Vector<Scalar>& rs);

// Breakdown with every entry set to +infinity.
EnergyBreakdown infinite_energy(const Ecosystem& eco);

// Flat CSV: e_tot,e_cmp,e_net,e_sr,e_lr,e_bh,e_mobile,t_dag, then per node
// <name>_static,<name>_dynamic.
std::string energy_csv_header(const Ecosystem& eco);
std::string energy_csv_row(const EnergyBreakdown& e, int precision = 2);

}  // namespace mfc
