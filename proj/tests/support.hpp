#pragma once

// Independent reference implementations used as test oracles. They work from
// edge lists and raw parameters and never call the library's timing, energy or
// model code.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "mfc/allocation.hpp"
#include "mfc/dag.hpp"
#include "mfc/platform.hpp"
#include "mfc/random.hpp"

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Resource layout written out by hand: frequencies first, then up/down pairs.
inline int uplink_slot(int q, int node) { return q + 2 + 2 * (node - 1); }
inline int downlink_slot(int q, int node) { return q + 3 + 2 * (node - 1); }

inline double backhaul_rate(const mfc::BackhaulLinkSpec& l) {
    return 1.22 * l.mss / (l.rtt * std::sqrt(l.p_loss));
}

inline const mfc::BackhaulLinkSpec& find_backhaul(const mfc::Ecosystem& eco, int a, int b) {
    for (const auto& l : eco.backhaul)
        if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return l;
    static mfc::BackhaulLinkSpec none;
    return none;
}

inline double rate(const mfc::Ecosystem& eco, const Eigen::VectorXd& rs, int from, int to) {
    if (from == 0) return rs(uplink_slot(eco.q, to));
    if (to == 0) return rs(downlink_slot(eco.q, from));
    return backhaul_rate(find_backhaul(eco, from, to));
}

inline double nf(const mfc::Ecosystem& eco, int from, int to) {
    if (from == 0) return eco.uplink[to - 1].nf;
    if (to == 0) return eco.downlink[from - 1].nf;
    return find_backhaul(eco, from, to).nf;
}

inline int theta(const mfc::Ecosystem& eco, int node) {
    if (node == 0) return eco.service_model.theta_m;
    if (node == eco.q + 1) return eco.service_model.theta_c;
    return eco.service_model.theta_f;
}

// Per-task execution times, exact maxima.
inline std::vector<double> task_times(const mfc::ApplicationDag& dag, const mfc::Ecosystem& eco,
                                      const mfc::TaskAllocation& x, const Eigen::VectorXd& rs) {
    const int v = dag.size();
    const int nodes = eco.q + 2;
    const auto edges = mfc::edge_list(dag);
    std::vector<double> out(v, 0.0);
    for (int i = 0; i < v; ++i) {
        const int n = x[i];
        const double cap = eco.nodes[n].n * rs(n);
        double share = 1.0;
        if (eco.service_discipline == mfc::ServiceDiscipline::Wps) {
            double tot = 0;
            for (int j = 0; j < v; ++j)
                if (x[j] == n) tot += dag.priorities(j);
            share = dag.priorities(i) / tot;
        }
        const double ser = cap > 0 ? dag.task_sizes(i) / (share * cap) : kInf;
        std::vector<double> raw(nodes, 0.0);
        for (const auto& e : edges)
            if (e.to == i && x[e.from] != n) raw[x[e.from]] += e.weight;
        double sum = 0, mx = 0;
        for (int src = 0; src < nodes; ++src) {
            if (raw[src] == 0) continue;
            const double r = rate(eco, rs, src, n);
            const double t = r > 0 ? raw[src] * (1 + nf(eco, src, n)) / r : kInf;
            sum += t;
            mx = std::max(mx, t);
        }
        out[i] = ser + (eco.network_time_mode == mfc::NetworkTimeMode::Sum ? sum : mx);
    }
    return out;
}

inline double dag_time(const mfc::ApplicationDag& dag, const mfc::Ecosystem& eco, const mfc::TaskAllocation& x,
                       const Eigen::VectorXd& rs) {
    const auto t = task_times(dag, eco, x, rs);
    double sum = 0, mx = 0;
    for (double e : t) {
        sum += e;
        mx = std::max(mx, e);
    }
    return eco.scheduling_discipline == mfc::SchedulingDiscipline::Sts ? sum : mx;
}

// Objective re-summed from the per-node and per-connection definitions.
inline double total_energy(const mfc::ApplicationDag& dag, const mfc::Ecosystem& eco,
                           const mfc::TaskAllocation& x, const Eigen::VectorXd& rs) {
    const double t = dag_time(dag, eco, x, rs);
    const int v = dag.size();
    const int nodes = eco.q + 2;
    double e = 0;
    for (int n = 0; n < nodes; ++n) {
        const auto& s = eco.nodes[n];
        double tser = 0;
        bool hosts = false;
        for (int i = 0; i < v; ++i) {
            if (x[i] != n) continue;
            hosts = true;
            double share = 1.0;
            if (eco.service_discipline == mfc::ServiceDiscipline::Wps) {
                double tot = 0;
                for (int j = 0; j < v; ++j)
                    if (x[j] == n) tot += dag.priorities(j);
                share = dag.priorities(i) / tot;
            }
            const double ti = dag.task_sizes(i) / (share * s.n * rs(n));
            tser = eco.service_discipline == mfc::ServiceDiscipline::Seq ? tser + ti : std::max(tser, ti);
        }
        if (!hosts) continue;
        e += theta(eco, n) * (s.p_cpu_idle / s.nc * t + s.n * (1 - s.r) * s.k * std::pow(rs(n), s.gamma) * tser);
    }
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(nodes, nodes);
    for (const auto& ed : mfc::edge_list(dag))
        if (x[ed.from] != x[ed.to]) raw(x[ed.from], x[ed.to]) += ed.weight;
    for (int a = 0; a < nodes; ++a)
        for (int b = 0; b < nodes; ++b) {
            if (a == b || raw(a, b) == 0) continue;
            const double vol = raw(a, b) * (1 + nf(eco, a, b));
            const double r = rate(eco, rs, a, b);
            double p;
            if (a == 0 || b == 0) {
                const auto& l = a == 0 ? eco.uplink[b - 1] : eco.downlink[a - 1];
                p = theta(eco, a) * l.omega_tx * std::pow(r, l.xi_tx) + theta(eco, b) * l.omega_rx * std::pow(r, l.xi_rx);
            } else {
                const auto& l = find_backhaul(eco, a, b);
                p = l.hops * l.p_hop * std::max(eco.service_model.theta_f, eco.service_model.theta_c);
            }
            e += (theta(eco, a) * eco.nodes[a].p_net_idle + theta(eco, b) * eco.nodes[b].p_net_idle) * t;
            e += p * vol / r;
        }
    return e;
}

// Exact minimum of the resource problem under SEQ + STS + SUM with every
// exponent equal to 2. There T = T0 + sum_l b_l / y_l and the objective is
// P T + sum_l a_l y_l + const, so y_l = sqrt((P + mu) b_l / a_l) clipped to
// the box, with mu >= 0 found by bisection on the deadline.
struct SeparableOptimum {
    double energy = kInf;
    double mu = 0;  // W, multiplier of the time constraint
    Eigen::VectorXd rs;
    bool feasible = false;
};

inline SeparableOptimum separable_optimum(const mfc::ApplicationDag& dag, const mfc::Ecosystem& eco,
                                          const mfc::TaskAllocation& x) {
    const int nodes = eco.q + 2;
    const int dim = 3 * eco.q + 4;
    const Eigen::VectorXd rmax = [&] {
        Eigen::VectorXd m(dim);
        for (int n = 0; n < nodes; ++n) m(n) = eco.nodes[n].f_max;
        for (int b = 1; b < nodes; ++b) {
            m(uplink_slot(eco.q, b)) = eco.uplink[b - 1].r_max;
            m(downlink_slot(eco.q, b)) = eco.downlink[b - 1].r_max;
        }
        return m;
    }();
    Eigen::VectorXd a = Eigen::VectorXd::Zero(dim), b = Eigen::VectorXd::Zero(dim);
    double p_static = 0, t0 = 0, e_const = 0;
    for (int n = 0; n < nodes; ++n) {
        double load = 0;
        for (int i = 0; i < dag.size(); ++i)
            if (x[i] == n) load += dag.task_sizes(i);
        if (load == 0) continue;
        const auto& s = eco.nodes[n];
        b(n) = load / s.n;
        a(n) = theta(eco, n) * (1 - s.r) * s.k * load;
        p_static += theta(eco, n) * s.p_cpu_idle / s.nc;
    }
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(nodes, nodes);
    for (const auto& ed : mfc::edge_list(dag))
        if (x[ed.from] != x[ed.to]) raw(x[ed.from], x[ed.to]) += ed.weight;
    for (int s = 0; s < nodes; ++s)
        for (int d = 0; d < nodes; ++d) {
            if (s == d || raw(s, d) == 0) continue;
            const double vol = raw(s, d) * (1 + nf(eco, s, d));
            p_static += theta(eco, s) * eco.nodes[s].p_net_idle + theta(eco, d) * eco.nodes[d].p_net_idle;
            if (s == 0 || d == 0) {
                const int slot = s == 0 ? uplink_slot(eco.q, d) : downlink_slot(eco.q, s);
                const auto& l = s == 0 ? eco.uplink[d - 1] : eco.downlink[s - 1];
                b(slot) = vol;
                a(slot) = (theta(eco, s) * l.omega_tx + theta(eco, d) * l.omega_rx) * vol;
            } else {
                const auto& l = find_backhaul(eco, s, d);
                const double r = backhaul_rate(l);
                t0 += vol / r;
                e_const += l.hops * l.p_hop * std::max(eco.service_model.theta_f, eco.service_model.theta_c) * vol / r;
            }
        }
    auto point = [&](double mu) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
        for (int l = 0; l < dim; ++l) {
            if (b(l) == 0) continue;
            y(l) = a(l) > 0 ? std::min(rmax(l), std::sqrt((p_static + mu) * b(l) / a(l))) : rmax(l);
        }
        return y;
    };
    auto time = [&](const Eigen::VectorXd& y) {
        double t = t0;
        for (int l = 0; l < dim; ++l)
            if (b(l) > 0) t += y(l) > 0 ? b(l) / y(l) : kInf;
        return t;
    };
    auto energy = [&](const Eigen::VectorXd& y) {
        const double t = time(y);
        double e = p_static * t + e_const;
        for (int l = 0; l < dim; ++l) e += a(l) * y(l);
        return e;
    };
    SeparableOptimum out;
    const double tmax = 1.0 / eco.th_min;
    if (time(point(1e300)) > tmax * (1 + 1e-12)) return out;
    double lo = 0, hi = 1;
    if (time(point(0)) > tmax) {
        while (time(point(hi)) > tmax) hi *= 2;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (time(point(mid)) > tmax ? lo : hi) = mid;
        }
        out.mu = hi;
    }
    out.rs = point(out.mu);
    out.energy = energy(out.rs);
    out.feasible = true;
    return out;
}

// Valid random DAG: a 1 -> ... -> V chain plus random forward edges.
inline mfc::ApplicationDag random_dag(int v, mfc::Rng& rng, double density = 0.3) {
    Eigen::VectorXd s(v), phi(v);
    for (int i = 0; i < v; ++i) {
        s(i) = 1e5 + 9e5 * mfc::uniform01(rng);
        phi(i) = 0.5 + mfc::uniform01(rng);
    }
    std::vector<mfc::Edge> edges;
    for (int i = 0; i < v; ++i)
        for (int j = i + 1; j < v; ++j)
            if (j == i + 1 || mfc::uniform01(rng) < density)
                edges.push_back({i, j, 5e4 + 4.5e5 * mfc::uniform01(rng)});
    return mfc::make_dag(s, edges, phi);
}

inline mfc::TaskAllocation random_x(int v, const mfc::Ecosystem& eco, mfc::Rng& rng) {
    mfc::TaskAllocation x(v, 0);
    for (int i = 1; i + 1 < v; ++i) x[i] = mfc::uniform_int(rng, 0, eco.q + 1);
    return x;
}

// Every entry drawn in [lo, 1] times its maximum.
inline Eigen::VectorXd random_rs(const mfc::Ecosystem& eco, mfc::Rng& rng, double lo = 0.2) {
    Eigen::VectorXd rs = mfc::max_resource_vector(eco);
    for (int l = 0; l < rs.size(); ++l) rs(l) *= lo + (1 - lo) * mfc::uniform01(rng);
    return rs;
}

inline double rel_err(double a, double b) {
    const double s = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / s;
}

// Largest component-wise error of g against fd, relative to the larger of the
// component and 1e-6 of the largest entry, with entries measured per unit of
// relative change in the variable.
inline double gradient_error(const Eigen::VectorXd& g, const Eigen::Matrix<long double, Eigen::Dynamic, 1>& fd,
                             const Eigen::VectorXd& rs, double lambda) {
    const int n = static_cast<int>(g.size());
    Eigen::VectorXd a(n), b(n);
    for (int l = 0; l < n; ++l) {
        const double s = l + 1 < n ? rs(l) : std::max(lambda, 1.0);
        a(l) = g(l) * s;
        b(l) = static_cast<double>(fd(l)) * s;
    }
    const double top = b.cwiseAbs().maxCoeff();
    double worst = 0;
    for (int l = 0; l < n; ++l)
        worst = std::max(worst, std::abs(a(l) - b(l)) / std::max(std::abs(b(l)), 1e-6 * top));
    return worst;
}

}  // namespace oracle
