#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mfc/allocation.hpp"
#include "mfc/dag.hpp"
#include "mfc/energy.hpp"
#include "mfc/random.hpp"
#include "mfc/rap.hpp"

namespace mfc {

struct GaParams {
    int ps = 20;
    double cf = 0.5;
    int g_max = 10;
    int mn = 0;  // 0 selects round((V-2)/2)
    std::uint64_t seed = 1;
    bool pure_random_init = false;
};

// Crossover population: round(cf*ps), lowered by one when odd.
int crossover_count(const GaParams& p);
int effective_mn(const GaParams& p, int v);
void validate_ga_params(const GaParams& p, int v);

struct TapResult {
    TaskAllocation x_best;
    Eigen::VectorXd rs_best;
    double e_best = 0;
    double lambda = 0;
    bool feasible = false;
    EnergyBreakdown energy;
    std::vector<double> generation_best;  // generation 0 is the initial population
    long rap_calls = 0;
};

TaskAllocation random_allocation(int v, const Ecosystem& eco, Rng& rng);

// Single-point crossover at a random cut I in [2, V-1] (1-based): c1 keeps the
// first I genes of p1 and takes the tail of p2.
std::pair<TaskAllocation, TaskAllocation> crossover(const TaskAllocation& p1, const TaskAllocation& p2, Rng& rng);
std::pair<TaskAllocation, TaskAllocation> crossover_at(const TaskAllocation& p1, const TaskAllocation& p2, int cut);

// mn independent position draws over [2, V-1], each given a uniform node.
TaskAllocation mutate(const TaskAllocation& x, int mn, const Ecosystem& eco, Rng& rng);

// 1 / E for a RAP-feasible allocation, 0 otherwise.
double fitness(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x, const RapConfig& cfg);

struct Pricing {
    double energy;
    Eigen::VectorXd rs;
    double lambda;
};
using Pricer = std::function<Pricing(const TaskAllocation&)>;

// Elitist genetic search over allocations priced by `price`.
TapResult run_genetic(int v, const Ecosystem& eco, const GaParams& params, const Pricer& price);

TapResult solve_agtas(const ApplicationDag& dag, const Ecosystem& eco, const GaParams& params,
                      const RapConfig& cfg = {});
// Same search, every allocation priced at RS^MAX.
TapResult solve_otas(const ApplicationDag& dag, const Ecosystem& eco, const GaParams& params);
TapResult solve_fixed(const ApplicationDag& dag, const Ecosystem& eco, Preset preset, const RapConfig& cfg = {});

inline constexpr long kDefaultEnumerationCap = 200000;

// Exhaustive search; throws ParameterError when (q+2)^(V-2) exceeds the cap.
TapResult solve_aess(const ApplicationDag& dag, const Ecosystem& eco, const RapConfig& cfg = {},
                     long cap = kDefaultEnumerationCap);
long aess_candidate_count(int v, const Ecosystem& eco);

// Runs fn(i) for i in [0, n) over the available hardware threads.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace mfc
