#include "mfc/timing.hpp"

#include <cmath>
#include <limits>

#include "mfc/error.hpp"

namespace mfc {

template <class Scalar>
Scalar smooth_max(const Vector<Scalar>& b, double r_exp) {
    if (b.size() == 0) return Scalar(0);
    const Scalar m = b.maxCoeff();
    if (!(m > 0) || std::isinf(static_cast<double>(m))) return m;
    Scalar sum(0);
    for (Eigen::Index l = 0; l < b.size(); ++l) sum += std::pow(b(l) / m, Scalar(r_exp));
    return m * std::pow(sum, Scalar(1.0 / r_exp));
}

template <class Scalar>
Scalar link_throughput(const Ecosystem& eco, const Vector<Scalar>& rs, int from, int to) {
    const int slot = link_slot(eco, from, to);
    return slot >= 0 ? rs(slot) : Scalar(backhaul_link(eco, from, to).r());
}

template <class Scalar>
Scalar task_service_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                         const Vector<Scalar>& rs, int i, int node) {
    if (x[i] != node) throw ParameterError("task is not hosted by the requested node");
    const Scalar capacity = Scalar(eco.nodes[node].n) * rs(node);
    if (!(capacity > 0)) return std::numeric_limits<Scalar>::infinity();
    Scalar share(1);
    if (eco.service_discipline == ServiceDiscipline::Wps) {
        double total = 0;
        for (int j = 0; j < dag.size(); ++j)
            if (x[j] == node) total += dag.priorities(j);
        share = Scalar(dag.priorities(i) / total);
    }
    return Scalar(dag.task_sizes(i)) / (share * capacity);
}

template <class Scalar>
Scalar node_total_service_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                               const Vector<Scalar>& rs, int node) {
    Scalar total(0);
    for (int i = 0; i < dag.size(); ++i) {
        if (x[i] != node) continue;
        const Scalar t = task_service_time(dag, eco, x, rs, i, node);
        if (eco.service_discipline == ServiceDiscipline::Seq)
            total += t;
        else
            total = std::max(total, t);
    }
    return total;
}

double input_volume(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x, int i,
                    int from, int node) {
    if (from == node) throw ParameterError("source and destination nodes coincide");
    double raw = 0;
    for (int j = 0; j < dag.size(); ++j)
        if (dag.adjacency(j, i) != 0 && x[j] == from) raw += dag.edge_weights(j, i);
    return raw == 0 ? 0.0 : (1.0 + link_nf(eco, from, node)) * raw;
}

template <class Scalar>
Scalar task_network_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                         const Vector<Scalar>& rs, int i, double r_exp) {
    const int node = x[i];
    Vector<Scalar> times(eco.node_count());
    int count = 0;
    for (int from = 0; from < eco.node_count(); ++from) {
        if (from == node) continue;
        const double v = input_volume(dag, eco, x, i, from, node);
        if (v == 0) continue;
        const Scalar r = link_throughput(eco, rs, from, node);
        times(count++) = r > 0 ? Scalar(v) / r : std::numeric_limits<Scalar>::infinity();
    }
    const auto used = times.head(count);
    if (eco.network_time_mode == NetworkTimeMode::Sum) return used.sum();
    if (count == 0) return Scalar(0);
    return r_exp > 0 ? smooth_max<Scalar>(used, r_exp) : used.maxCoeff();
}

template <class Scalar>
Scalar task_execution_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                           const Vector<Scalar>& rs, int i, double r_exp) {
    return task_service_time(dag, eco, x, rs, i, x[i]) + task_network_time(dag, eco, x, rs, i, r_exp);
}

namespace {

template <class Scalar>
Scalar combine(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
               const Vector<Scalar>& rs, double r_exp) {
    Vector<Scalar> exe(dag.size());
    for (int i = 0; i < dag.size(); ++i) exe(i) = task_execution_time(dag, eco, x, rs, i, r_exp);
    if (eco.scheduling_discipline == SchedulingDiscipline::Sts) return exe.sum();
    return r_exp > 0 ? smooth_max<Scalar>(exe, r_exp) : exe.maxCoeff();
}

}  // namespace

template <class Scalar>
Scalar dag_execution_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                          const Vector<Scalar>& rs) {
    return combine(dag, eco, x, rs, 0.0);
}

template <class Scalar>
Scalar smoothed_dag_time(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                         const Vector<Scalar>& rs, double r_exp) {
    if (!(r_exp >= 1)) throw ParameterError("smoothing exponent must be >= 1");
    return combine(dag, eco, x, rs, r_exp);
}

TimeBoundTerms dag_time_bound_terms(const ApplicationDag& dag, const Ecosystem& eco) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    TimeBoundTerms t{};
    t.s_max = dag.task_sizes.maxCoeff();
    t.w_in_max = 0;
    for (int i = 0; i < dag.size(); ++i)
        t.w_in_max = std::max(t.w_in_max, dag.adjacency.col(i).cast<double>().dot(dag.edge_weights.col(i)));
    t.beta_min = 1.0;
    if (eco.service_discipline == ServiceDiscipline::Wps)
        t.beta_min = dag.priorities.minCoeff() / dag.priorities.sum();

    double min_capacity = inf;
    for (const NodeSpec& n : eco.nodes) min_capacity = std::min(min_capacity, n.n * n.f_max);
    double min_rate = inf;
    double max_nf = 0;
    for (int b = 0; b <= eco.q; ++b) {
        min_rate = std::min({min_rate, eco.uplink[b].r_max, eco.downlink[b].r_max});
        max_nf = std::max({max_nf, eco.uplink[b].nf, eco.downlink[b].nf});
    }
    for (const auto& l : eco.backhaul) {
        min_rate = std::min(min_rate, l.r());
        max_nf = std::max(max_nf, l.nf);
    }
    t.t_ser_max = min_capacity > 0 ? t.s_max / (t.beta_min * min_capacity) : inf;
    if (t.w_in_max == 0)
        t.t_net_max = 0;
    else
        t.t_net_max = min_rate > 0 ? t.w_in_max * (1.0 + max_nf) / min_rate : inf;
    const double per_task = t.t_ser_max + t.t_net_max;
    t.bound = eco.scheduling_discipline == SchedulingDiscipline::Sts ? dag.size() * per_task : per_task;
    return t;
}

double dag_time_upper_bound(const ApplicationDag& dag, const Ecosystem& eco) {
    return dag_time_bound_terms(dag, eco).bound;
}

bool jop_feasible_sufficient(const ApplicationDag& dag, const Ecosystem& eco) {
    return eco.th_min * dag_time_upper_bound(dag, eco) <= 1.0;
}

#define MFC_INSTANTIATE_TIMING(S)                                                                          \
    template S smooth_max<S>(const Vector<S>&, double);                                                    \
    template S link_throughput<S>(const Ecosystem&, const Vector<S>&, int, int);                           \
    template S task_service_time<S>(const ApplicationDag&, const Ecosystem&, const TaskAllocation&,        \
                                    const Vector<S>&, int, int);                                           \
    template S node_total_service_time<S>(const ApplicationDag&, const Ecosystem&, const TaskAllocation&,  \
                                          const Vector<S>&, int);                                          \
    template S task_network_time<S>(const ApplicationDag&, const Ecosystem&, const TaskAllocation&,        \
                                    const Vector<S>&, int, double);                                        \
    template S task_execution_time<S>(const ApplicationDag&, const Ecosystem&, const TaskAllocation&,      \
                                      const Vector<S>&, int, double);                                      \
    template S dag_execution_time<S>(const ApplicationDag&, const Ecosystem&, const TaskAllocation&,       \
                                     const Vector<S>&);                                                    \
    template S smoothed_dag_time<S>(const ApplicationDag&, const Ecosystem&, const TaskAllocation&,        \
                                    const Vector<S>&, double);

MFC_INSTANTIATE_TIMING(double)
MFC_INSTANTIATE_TIMING(long double)

}  // namespace mfc
