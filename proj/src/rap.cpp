#include "mfc/rap.hpp"

#include <cmath>
#include <limits>

#include "mfc/error.hpp"
#include "mfc/timing.hpp"

namespace mfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReferenceAmax = 1e-7;
constexpr double kPrimalGain = 0.5;
constexpr double kDualGain = 0.5;
constexpr double kFeasibilityTol = 1e-6;

Eigen::VectorXd active_max(const AllocationModel& model, const Ecosystem& eco) {
    Eigen::VectorXd y = max_resource_vector(eco);
    for (int l = 0; l < y.size(); ++l)
        if (!model.active()[l]) y(l) = 0;
    return y;
}

bool within_deadline(const AllocationModel& model, double t) {
    return model.th_min() * t - 1.0 <= kFeasibilityTol;
}

// Moves y toward y_max until the deadline holds; T is monotone along the segment.
Eigen::VectorXd restore_feasibility(const AllocationModel& model, const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& y_max) {
    if (within_deadline(model, model.exact_time(y))) return y;
    double lo = 0, hi = 1;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (within_deadline(model, model.exact_time(y + mid * (y_max - y))))
            hi = mid;
        else
            lo = mid;
    }
    return y + hi * (y_max - y);
}

RapResult infeasible_result(const Ecosystem& eco, const RapConfig& cfg) {
    RapResult res;
    res.rs = Eigen::VectorXd::Constant(eco.rs_size(), kInf);
    res.energy = infinite_energy(eco);
    res.lambda = kInf;
    res.t_dag = kInf;
    res.feasible = false;
    res.iterations = cfg.i_max;
    if (cfg.record_trace)
        for (int m = 1; m <= cfg.i_max; ++m) res.trace.push_back({m, kInf, kInf, kInf});
    return res;
}

}  // namespace

void validate_rap_config(const RapConfig& cfg) {
    if (cfg.i_max < 1) throw ParameterError("i_max must be >= 1");
    if (!(cfg.a_max > 0)) throw ParameterError("a_max must be positive");
    if (!(cfg.floor_eps > 0) || cfg.floor_eps >= 1) throw ParameterError("floor_eps must lie in (0,1)");
    if (!(cfg.r_exp >= 1)) throw ParameterError("r_exp must be >= 1");
    if (cfg.warm_lambda < 0) throw ParameterError("warm-start multiplier must be non-negative");
}

bool rap_feasible(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x) {
    const Eigen::VectorXd rs_max = max_resource_vector(eco);
    return eco.th_min * dag_execution_time(dag, eco, x, rs_max) - 1.0 <= 0.0;
}

template <class Scalar>
Scalar lagrangian(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                  const Vector<Scalar>& rs, Scalar lambda, double r_exp) {
    const Scalar t = smoothed_dag_time(dag, eco, x, rs, r_exp);
    return total_energy_at(dag, eco, x, rs, t).e_tot + lambda * (Scalar(eco.th_min) * t - Scalar(1));
}

Eigen::VectorXd lagrangian_gradient(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                                    const Eigen::VectorXd& rs, double lambda, double r_exp, double floor_eps,
                                    bool* clamped) {
    const AllocationModel model(dag, eco, x, r_exp);
    const Eigen::VectorXd rs_max = max_resource_vector(eco);
    Eigen::VectorXd y = rs;
    bool raised = false;
    for (int l = 0; l < y.size(); ++l)
        if (model.active()[l] && y(l) < floor_eps * rs_max(l)) {
            y(l) = floor_eps * rs_max(l);
            raised = true;
        }
    if (clamped) *clamped = raised;
    Eigen::VectorXd g;
    model.gradient(y, lambda, g);
    return g;
}

template <class Scalar>
Vector<Scalar> finite_difference_gradient(const ApplicationDag& dag, const Ecosystem& eco,
                                          const TaskAllocation& x, const Vector<Scalar>& rs, Scalar lambda,
                                          double h, double r_exp) {
    const int n = static_cast<int>(rs.size());
    Vector<Scalar> g(n + 1);
    for (int l = 0; l < n; ++l) {
        const Scalar step = Scalar(h) * (rs(l) != Scalar(0) ? std::abs(rs(l)) : Scalar(1));
        Vector<Scalar> up = rs, down = rs;
        up(l) += step;
        down(l) -= step;
        g(l) = (lagrangian<Scalar>(dag, eco, x, up, lambda, r_exp) -
                lagrangian<Scalar>(dag, eco, x, down, lambda, r_exp)) /
               (Scalar(2) * step);
    }
    const Scalar step = Scalar(h) * std::max(std::abs(lambda), Scalar(1));
    g(n) = (lagrangian<Scalar>(dag, eco, x, rs, lambda + step, r_exp) -
            lagrangian<Scalar>(dag, eco, x, rs, lambda - step, r_exp)) /
           (Scalar(2) * step);
    return g;
}

StepSizes step_sizes(int /*m*/, const Eigen::VectorXd& rs, double lambda, const Eigen::VectorXd& rs_max,
                     double a_max) {
    StepSizes s;
    s.psi.resize(rs.size());
    for (int l = 0; l < rs.size(); ++l)
        s.psi(l) = std::max(a_max, std::min(a_max * rs_max(l), rs(l) * rs(l)));
    const double y_top = rs_max.size() ? rs_max.maxCoeff() : 0.0;
    s.xi = std::max(a_max, std::min(a_max * y_top, lambda * lambda));
    return s;
}

RapResult solve_rap(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                    const RapConfig& cfg) {
    validate_rap_config(cfg);
    const AllocationModel model(dag, eco, x, cfg.r_exp);
    const Eigen::VectorXd y_max = active_max(model, eco);
    if (!(eco.th_min * model.exact_time(y_max) - 1.0 <= 0.0)) return infeasible_result(eco, cfg);

    const int dim = model.dimension();
    const auto& active = model.active();
    const double e_ref = model.energy(y_max);
    const double scale = e_ref > 0 && std::isfinite(e_ref) ? e_ref : 1.0;
    const double gain = cfg.a_max / kReferenceAmax;

    // Iterate on u = y / y_max and lambda / scale.
    Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
    for (int l = 0; l < dim; ++l) {
        if (!active[l]) continue;
        u(l) = 1.0;
        if (cfg.warm_rs && cfg.warm_rs->size() == dim) {
            const double w = (*cfg.warm_rs)(l) / y_max(l);
            if (std::isfinite(w) && w >= cfg.floor_eps) u(l) = std::min(w, 1.0);
        }
    }
    double mu = std::isfinite(cfg.warm_lambda) ? cfg.warm_lambda / scale : 0.0;

    RapResult res;
    res.feasible = true;
    Eigen::VectorXd grad;
    Eigen::VectorXd y = u.cwiseProduct(y_max);
    Eigen::VectorXd best_y = y_max;
    double best_e = model.energy(y_max);
    const double floor2 = cfg.floor_eps * cfg.floor_eps;
    int m = 0;
    for (m = 1; m <= cfg.i_max; ++m) {
        const double t_s = model.gradient(y, mu * scale, grad);
        if (!grad.allFinite()) throw ParameterError("non-finite Lagrangian gradient; check model exponents");
        double pg2 = 0;
        for (int l = 0; l < dim; ++l) {
            if (!active[l]) continue;
            const double gu = grad(l) * y_max(l) / scale;
            const double psi = gain * kPrimalGain * std::clamp(u(l) * u(l), floor2, 1.0);
            const double next = std::clamp(u(l) - psi * gu, cfg.floor_eps, 1.0);
            if (!((u(l) <= cfg.floor_eps && gu > 0) || (u(l) >= 1.0 && gu < 0))) pg2 += gu * gu;
            u(l) = next;
        }
        mu = std::max(0.0, mu + gain * kDualGain * (eco.th_min * t_s - 1.0));
        y = u.cwiseProduct(y_max);

        const double t = model.exact_time(y);
        const double e = model.energy_at(y, t);
        if (within_deadline(model, t) && e < best_e) {
            best_e = e;
            best_y = y;
        }
        if (cfg.record_trace) res.trace.push_back({m, e, model.network_energy_at(y, t), mu * scale});
        if (cfg.early_exit_tol > 0 && std::sqrt(pg2) < cfg.early_exit_tol) break;
    }
    res.iterations = std::min(m, cfg.i_max);
    res.iterate = y;

    const Eigen::VectorXd last = restore_feasibility(model, y, y_max);
    res.rs = model.energy(last) <= best_e ? last : best_y;
    res.lambda = mu * scale;
    res.t_dag = model.exact_time(res.rs);
    res.energy = total_energy(dag, eco, x, Eigen::VectorXd(res.rs));
    return res;
}

double projected_gradient_norm(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x,
                               const Eigen::VectorXd& rs, double lambda, const RapConfig& cfg) {
    const AllocationModel model(dag, eco, x, cfg.r_exp);
    const Eigen::VectorXd y_max = active_max(model, eco);
    const double e_ref = model.energy(y_max);
    const double scale = e_ref > 0 && std::isfinite(e_ref) ? e_ref : 1.0;
    Eigen::VectorXd grad;
    model.gradient(rs, lambda, grad);
    double s = 0;
    for (int l = 0; l < model.dimension(); ++l) {
        if (!model.active()[l]) continue;
        const double u = rs(l) / y_max(l);
        const double gu = grad(l) * y_max(l) / scale;
        const double tol = 1e-9;
        if (u <= cfg.floor_eps + tol && gu > 0) continue;
        if (u >= 1.0 - tol && gu < 0) continue;
        s += gu * gu;
    }
    return std::sqrt(s);
}

template double lagrangian<double>(const ApplicationDag&, const Ecosystem&, const TaskAllocation&,
                                   const Vector<double>&, double, double);
template long double lagrangian<long double>(const ApplicationDag&, const Ecosystem&, const TaskAllocation&,
                                             const Vector<long double>&, long double, double);
template Vector<double> finite_difference_gradient<double>(const ApplicationDag&, const Ecosystem&,
                                                           const TaskAllocation&, const Vector<double>&,
                                                           double, double, double);
template Vector<long double> finite_difference_gradient<long double>(const ApplicationDag&, const Ecosystem&,
                                                                     const TaskAllocation&,
                                                                     const Vector<long double>&, long double,
                                                                     double, double);

}  // namespace mfc
