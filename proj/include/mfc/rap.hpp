#pragma once

#include <optional>
#include <vector>

#include "mfc/allocation.hpp"
#include "mfc/dag.hpp"
#include "mfc/energy.hpp"
#include "mfc/model.hpp"
#include "mfc/platform.hpp"

namespace mfc {

struct RapConfig {
    int i_max = 600;
    double a_max = 1e-7;
    double r_exp = 20;
    double floor_eps = 1e-3;              // fraction of each used resource's maximum
    std::optional<Eigen::VectorXd> warm_rs;
    double warm_lambda = 0;               // J
    double early_exit_tol = 0;            // projected-gradient tolerance; 0 disables
    bool record_trace = true;
};

void validate_rap_config(const RapConfig& cfg);

struct TracePoint {
    int m;
    double e_tot;
    double e_net;
    double lambda;
};

struct RapResult {
    Eigen::VectorXd rs;
    Eigen::VectorXd iterate;  // last primal iterate, before feasibility restoration
    EnergyBreakdown energy;
    double lambda = 0;
    double t_dag = 0;
    bool feasible = false;
    int iterations = 0;
    std::vector<TracePoint> trace;
};

bool rap_feasible(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x);

// E_TOT + lambda (TH T - 1) with every max smoothed and static energy priced
// at the smoothed time. Evaluated from the model definitions.
template <class Scalar>
Scalar lagrangian(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                  const Vector<Scalar>& rs, Scalar lambda, double r_exp = 20);

// Analytic gradient, length 3q+5 (the last entry is dL/dlambda). Used
// resources below the floor are raised to it and *clamped is set.
Eigen::VectorXd lagrangian_gradient(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                                    const Eigen::VectorXd& rs, double lambda, double r_exp = 20,
                                    double floor_eps = 1e-3, bool* clamped = nullptr);

// Central differences of lagrangian() with relative step h.
template <class Scalar>
Vector<Scalar> finite_difference_gradient(const ApplicationDag& dag, const Ecosystem& eco,
                                          const TaskAllocation& x, const Vector<Scalar>& rs, Scalar lambda,
                                          double h = 1e-4, double r_exp = 20);

struct StepSizes {
    Eigen::VectorXd psi;
    double xi;
};

// psi_l = max(a, min(a y_l^MAX, y_l^2)), xi = max(a, min(a max_l y_l^MAX, lambda^2)).
StepSizes step_sizes(int m, const Eigen::VectorXd& rs, double lambda, const Eigen::VectorXd& rs_max,
                     double a_max);

RapResult solve_rap(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                    const RapConfig& cfg = {});

// Norm of the gradient with components pointing out of the box removed,
// in units of the normalized problem solved by solve_rap.
double projected_gradient_norm(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                               const Eigen::VectorXd& rs, double lambda, const RapConfig& cfg = {});

}  // namespace mfc
