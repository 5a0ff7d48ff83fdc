#include "mfc/model.hpp"

#include <cmath>
#include <limits>

#include "mfc/energy.hpp"
#include "mfc/error.hpp"
#include "mfc/timing.hpp"

namespace mfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pnorm(const double* b, int n, double r) {
    double m = 0;
    for (int l = 0; l < n; ++l) m = std::max(m, b[l]);
    if (!(m > 0) || std::isinf(m)) return m;
    double s = 0;
    for (int l = 0; l < n; ++l) s += std::pow(b[l] / m, r);
    return m * std::pow(s, 1.0 / r);
}

}  // namespace

AllocationModel::AllocationModel(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                                 double r_exp)
    : dim_(eco.rs_size()),
      th_min_(eco.th_min),
      r_exp_(r_exp),
      pts_(eco.scheduling_discipline == SchedulingDiscipline::Pts),
      max_net_(eco.network_time_mode == NetworkTimeMode::Max),
      active_(eco.rs_size(), false) {
    check_allocation(x, dag.size(), eco);
    if (eco.node_count() > 64) throw ParameterError("at most 62 Fog nodes are supported");
    const bool wps = eco.service_discipline == ServiceDiscipline::Wps;

    for (int n = 0; n < eco.node_count(); ++n) {
        double size_sum = 0, prio_sum = 0;
        for (int i = 0; i < dag.size(); ++i)
            if (x[i] == n) {
                size_sum += dag.task_sizes(i);
                prio_sum += dag.priorities(i);
            }
        if (prio_sum == 0) continue;
        active_[n] = true;
        const NodeSpec& s = eco.nodes[n];
        double workload = size_sum;  // n * f * T_N^SER
        if (wps) {
            workload = 0;
            for (int i = 0; i < dag.size(); ++i)
                if (x[i] == n) workload = std::max(workload, dag.task_sizes(i) * prio_sum / dag.priorities(i));
        }
        nodes_.push_back({n, eco.theta(n) * (1.0 - s.r) * s.k * workload, s.gamma - 1.0});
        static_cmp_ += eco.theta(n) * s.p_cpu_idle / s.nc;
    }
    for (int i = 0; i < dag.size(); ++i) {
        const int n = x[i];
        const NodeSpec& s = eco.nodes[n];
        double share = 1.0;
        if (wps) {
            double prio_sum = 0;
            for (int j = 0; j < dag.size(); ++j)
                if (x[j] == n) prio_sum += dag.priorities(j);
            share = dag.priorities(i) / prio_sum;
        }
        Task t{n, dag.task_sizes(i) / (share * s.n), {}};
        for (int from = 0; from < eco.node_count(); ++from) {
            if (from == n) continue;
            const double v = input_volume(dag, eco, x, i, from, n);
            if (v == 0) continue;
            const int slot = link_slot(eco, from, n);
            t.inputs.push_back({slot, slot >= 0 ? 0.0 : backhaul_link(eco, from, n).r(), v});
        }
        tasks_.push_back(std::move(t));
    }

    for (int from = 0; from < eco.node_count(); ++from)
        for (int to = 0; to < eco.node_count(); ++to) {
            if (from == to) continue;
            const double vol = connection_volume(dag, eco, x, from, to);
            if (vol == 0) continue;
            static_net_ += eco.theta(from) * eco.nodes[from].p_net_idle + eco.theta(to) * eco.nodes[to].p_net_idle;
            const int slot = link_slot(eco, from, to);
            if (slot >= 0) {
                active_[slot] = true;
                const WirelessLinkSpec& l = wireless_link(eco, from, to);
                links_.push_back({slot, vol, eco.theta(from) * l.omega_tx, l.xi_tx - 1.0, eco.theta(to) * l.omega_rx,
                                  l.xi_rx - 1.0, true});
            } else {
                const BackhaulLinkSpec& l = backhaul_link(eco, from, to);
                const double r = l.r();
                if (!(r > 0))
                    infeasible_structure_ = true;
                else
                    backhaul_dynamic_ += backhaul_dynamic_power(l, eco.service_model) * vol / r;
            }
        }
}

template <bool Smooth>
double AllocationModel::time_impl(const Eigen::VectorXd& rs, Eigen::VectorXd* exe) const {
    if (infeasible_structure_) return kInf;
    const int v = static_cast<int>(tasks_.size());
    double total = 0;
    double times[64];
    Eigen::VectorXd local;
    if (pts_ && exe == nullptr) {
        local.resize(v);
        exe = &local;
    }
    for (int i = 0; i < v; ++i) {
        const Task& t = tasks_[i];
        const double f = rs(t.node);
        double e = f > 0 ? t.c / f : kInf;
        double net = 0;
        int k = 0;
        for (const Input& in : t.inputs) {
            const double r = in.slot >= 0 ? rs(in.slot) : in.rate;
            const double tt = r > 0 ? in.volume / r : kInf;
            if (max_net_)
                times[k++] = tt;
            else
                net += tt;
        }
        if (max_net_ && k > 0) {
            if (Smooth) {
                net = pnorm(times, k, r_exp_);
            } else {
                for (int l = 0; l < k; ++l) net = std::max(net, times[l]);
            }
        }
        e += net;
        if (exe) (*exe)(i) = e;
        total += e;
    }
    if (!pts_) return total;
    if (Smooth) return pnorm(exe->data(), v, r_exp_);
    return exe->maxCoeff();
}

double AllocationModel::exact_time(const Eigen::VectorXd& rs) const { return time_impl<false>(rs, nullptr); }

double AllocationModel::smoothed_time(const Eigen::VectorXd& rs) const {
    return smoothing_needed() ? time_impl<true>(rs, nullptr) : time_impl<false>(rs, nullptr);
}

double AllocationModel::dynamic_energy(const Eigen::VectorXd& rs, bool network_only) const {
    double e = backhaul_dynamic_;
    if (!network_only)
        for (const NodeTerm& n : nodes_) {
            const double f = rs(n.node);
            if (!(f > 0)) return kInf;
            e += n.coef * std::pow(f, n.expo);
        }
    for (const LinkTerm& l : links_) {
        const double r = rs(l.slot);
        if (!(r > 0)) return kInf;
        e += l.volume * (l.c_tx * std::pow(r, l.e_tx) + l.c_rx * std::pow(r, l.e_rx));
    }
    return e;
}

double AllocationModel::energy_at(const Eigen::VectorXd& rs, double t) const {
    if (infeasible_structure_ || std::isinf(t)) return kInf;
    return (static_cmp_ + static_net_) * t + dynamic_energy(rs, false);
}

double AllocationModel::network_energy_at(const Eigen::VectorXd& rs, double t) const {
    if (infeasible_structure_ || std::isinf(t)) return kInf;
    return static_net_ * t + dynamic_energy(rs, true);
}

double AllocationModel::lagrangian(const Eigen::VectorXd& rs, double lambda) const {
    const double t = smoothed_time(rs);
    return energy_at(rs, t) + lambda * (th_min_ * t - 1.0);
}

double AllocationModel::gradient(const Eigen::VectorXd& rs, double lambda, Eigen::VectorXd& grad) const {
    grad.setZero(dim_ + 1);
    const int v = static_cast<int>(tasks_.size());
    Eigen::VectorXd exe(v);
    const bool smooth = smoothing_needed();
    const double t = smooth ? time_impl<true>(rs, &exe) : time_impl<false>(rs, &exe);

    Eigen::VectorXd gt = Eigen::VectorXd::Zero(dim_);
    double times[64];
    for (int i = 0; i < v; ++i) {
        const Task& task = tasks_[i];
        const double w = pts_ ? std::pow(exe(i) / t, r_exp_ - 1.0) : 1.0;
        const double f = rs(task.node);
        gt(task.node) -= w * task.c / (f * f);
        if (task.inputs.empty()) continue;
        double net = 0;
        if (max_net_) {
            int k = 0;
            for (const Input& in : task.inputs) times[k++] = in.volume / (in.slot >= 0 ? rs(in.slot) : in.rate);
            net = pnorm(times, k, r_exp_);
        }
        int k = 0;
        for (const Input& in : task.inputs) {
            const double tk = max_net_ ? times[k++] : 0.0;
            if (in.slot < 0) continue;
            const double r = rs(in.slot);
            const double chain = max_net_ ? std::pow(tk / net, r_exp_ - 1.0) : 1.0;
            gt(in.slot) -= w * chain * in.volume / (r * r);
        }
    }
    for (const NodeTerm& n : nodes_) {
        if (n.coef == 0) continue;
        grad(n.node) += n.coef * n.expo * std::pow(rs(n.node), n.expo - 1.0);
    }
    for (const LinkTerm& l : links_) {
        const double r = rs(l.slot);
        grad(l.slot) += l.volume * (l.c_tx * l.e_tx * std::pow(r, l.e_tx - 1.0) +
                                    l.c_rx * l.e_rx * std::pow(r, l.e_rx - 1.0));
    }
    grad.head(dim_) += (static_cmp_ + static_net_ + lambda * th_min_) * gt;
    grad(dim_) = th_min_ * t - 1.0;
    return t;
}

}  // namespace mfc
