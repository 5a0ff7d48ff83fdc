#pragma once

#include <vector>

#include "mfc/allocation.hpp"
#include "mfc/dag.hpp"
#include "mfc/platform.hpp"

namespace mfc {

// Pre-reduced form of (dag, eco, x) for repeated evaluation over rs.
//   E_TOT(rs) = P_static * T(rs) + sum_N a_N f_N^(gamma_N - 1) + sum_l v_l * w_l(R_l) + E_backhaul
// where T is the exact or smoothed DAG time.
class AllocationModel {
public:
    AllocationModel(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                    double r_exp = 20.0);

    int dimension() const { return dim_; }
    // Slots of rs that x actually uses.
    const std::vector<bool>& active() const { return active_; }
    bool smoothing_needed() const { return pts_ || max_net_; }
    double th_min() const { return th_min_; }

    double exact_time(const Eigen::VectorXd& rs) const;
    double smoothed_time(const Eigen::VectorXd& rs) const;

    // E_TOT with static terms priced at time t.
    double energy_at(const Eigen::VectorXd& rs, double t) const;
    double network_energy_at(const Eigen::VectorXd& rs, double t) const;
    double energy(const Eigen::VectorXd& rs) const { return energy_at(rs, exact_time(rs)); }

    double lagrangian(const Eigen::VectorXd& rs, double lambda) const;
    // Length dimension()+1; the last entry is dL/dlambda. Returns the smoothed time.
    double gradient(const Eigen::VectorXd& rs, double lambda, Eigen::VectorXd& grad) const;

private:
    struct Input {
        int slot;       // rs slot, or -1 for a fixed-rate backhaul link
        double rate;    // fixed rate when slot < 0
        double volume;  // bit
    };
    struct Task {
        int node;
        double c;  // service time = c / f_node
        std::vector<Input> inputs;
    };
    struct NodeTerm {
        int node;
        double coef;
        double expo;  // gamma - 1
    };
    struct LinkTerm {
        int slot;
        double volume;
        double c_tx, e_tx, c_rx, e_rx;  // power = c_tx R^e_tx + c_rx R^e_rx
        bool network;
    };

    template <bool Smooth>
    double time_impl(const Eigen::VectorXd& rs, Eigen::VectorXd* exe) const;
    double dynamic_energy(const Eigen::VectorXd& rs, bool network_only) const;

    int dim_ = 0;
    double th_min_ = 0;
    double r_exp_ = 20;
    bool pts_ = false;
    bool max_net_ = false;
    std::vector<bool> active_;
    std::vector<Task> tasks_;
    std::vector<NodeTerm> nodes_;
    std::vector<LinkTerm> links_;
    double static_cmp_ = 0;
    double static_net_ = 0;
    double backhaul_dynamic_ = 0;
    bool infeasible_structure_ = false;
};

}  // namespace mfc
