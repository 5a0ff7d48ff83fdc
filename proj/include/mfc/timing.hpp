#pragma once

#include "mfc/allocation.hpp"
#include "mfc/dag.hpp"
#include "mfc/platform.hpp"

namespace mfc {

inline constexpr double kDefaultSmoothing = 20.0;

// (sum b_l^r)^(1/r) over non-negative b, evaluated without overflow.
template <class Scalar>
Scalar smooth_max(const Vector<Scalar>& b, double r_exp);

// Throughput of the directed link from -> to under rs (backhaul links are fixed).
template <class Scalar>
Scalar link_throughput(const Ecosystem& eco, const Vector<Scalar>& rs, int from, int to);

// All functions below return +infinity when a needed resource is zero.
template <class Scalar>
Scalar task_service_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                         const Vector<Scalar>& rs, int i, int node);

template <class Scalar>
Scalar node_total_service_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                               const Vector<Scalar>& rs, int node);

double input_volume(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x, int i,
                    int from, int node);

template <class Scalar>
Scalar task_network_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                         const Vector<Scalar>& rs, int i, double r_exp = 0);

template <class Scalar>
Scalar task_execution_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                           const Vector<Scalar>& rs, int i, double r_exp = 0);

template <class Scalar>
Scalar dag_execution_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                          const Vector<Scalar>& rs);

// Every max is replaced by smooth_max with exponent r_exp.
template <class Scalar>
Scalar smoothed_dag_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                         const Vector<Scalar>& rs, double r_exp = kDefaultSmoothing);

struct TimeBoundTerms {
    double s_max;
    double w_in_max;
    double beta_min;
    double t_ser_max;
    double t_net_max;
    double bound;
};

// Allocation-free upper bound on T_DAG at RS^MAX.
TimeBoundTerms dag_time_bound_terms(const ApplicationDag& dag, const Ecosystem& eco);
double dag_time_upper_bound(const ApplicationDag& dag, const Ecosystem& eco);
bool jop_feasible_sufficient(const ApplicationDag& dag, const Ecosystem& eco);

}  // namespace mfc
