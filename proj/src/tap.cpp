#include "mfc/tap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "mfc/error.hpp"
#include "mfc/timing.hpp"

namespace mfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Individual {
    TaskAllocation x;
    Pricing price;
};

bool better(const Individual& a, const Individual& b) {
    if (a.price.energy != b.price.energy) return a.price.energy < b.price.energy;
    return a.x < b.x;
}

Pricing price_rap(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x, const RapConfig& cfg) {
    RapConfig c = cfg;
    c.record_trace = false;
    const RapResult r = solve_rap(dag, eco, x, c);
    return {r.feasible ? r.energy.e_tot : kInf, r.rs, r.lambda};
}

std::vector<Pricing> price_all(const std::vector<TaskAllocation>& xs, const Pricer& price) {
    std::vector<Pricing> out(xs.size());
    parallel_for(static_cast<int>(xs.size()), [&](int i) { out[i] = price(xs[i]); });
    return out;
}

TapResult finish(const ApplicationDag& dag, const Ecosystem& eco, TapResult res) {
    res.feasible = std::isfinite(res.e_best);
    if (res.feasible)
        res.energy = total_energy(dag, eco, res.x_best, Eigen::VectorXd(res.rs_best));
    else
        res.energy = infinite_energy(eco);
    return res;
}

}  // namespace

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int threads = std::min<int>(n, static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

int crossover_count(const GaParams& p) {
    int cross = static_cast<int>(std::lround(p.cf * p.ps));
    if (cross % 2 != 0) --cross;
    return std::clamp(cross, 0, p.ps - p.ps % 2);
}

int effective_mn(const GaParams& p, int v) {
    if (p.mn > 0) return p.mn;
    return std::max(1, static_cast<int>(std::lround((v - 2) / 2.0)));
}

void validate_ga_params(const GaParams& p, int v) {
    if (p.ps < 2) throw ParameterError("population size must be >= 2");
    if (!(p.cf > 0) || p.cf > 1) throw ParameterError("crossover fraction must lie in (0,1]");
    if (p.g_max < 0) throw ParameterError("generation count must be non-negative");
    if (v > 2) {
        const int mn = effective_mn(p, v);
        if (mn < 1 || mn > v - 2) throw ParameterError("mutation count must lie in [1, V-2]");
    }
}

TaskAllocation random_allocation(int v, const Ecosystem& eco, Rng& rng) {
    if (v < 2) throw ParameterError("a DAG needs at least two tasks");
    TaskAllocation x(v, kMobile);
    for (int i = 1; i < v - 1; ++i) x[i] = uniform_int(rng, 0, eco.node_count() - 1);
    return x;
}

std::pair<TaskAllocation, TaskAllocation> crossover_at(const TaskAllocation& p1, const TaskAllocation& p2,
                                                       int cut) {
    if (p1.size() != p2.size()) throw ParameterError("parents differ in length");
    TaskAllocation c1 = p1, c2 = p2;
    for (std::size_t i = static_cast<std::size_t>(cut); i < p1.size(); ++i) {
        c1[i] = p2[i];
        c2[i] = p1[i];
    }
    return {c1, c2};
}

std::pair<TaskAllocation, TaskAllocation> crossover(const TaskAllocation& p1, const TaskAllocation& p2, Rng& rng) {
    const int v = static_cast<int>(p1.size());
    if (v < 3) return {p1, p2};
    return crossover_at(p1, p2, uniform_int(rng, 2, v - 1));
}

TaskAllocation mutate(const TaskAllocation& x, int mn, const Ecosystem& eco, Rng& rng) {
    const int v = static_cast<int>(x.size());
    TaskAllocation y = x;
    if (v < 3) return y;
    if (mn < 1 || mn > v - 2) throw ParameterError("mutation count must lie in [1, V-2]");
    for (int k = 0; k < mn; ++k) {
        const int pos = uniform_int(rng, 2, v - 1) - 1;
        y[pos] = uniform_int(rng, 0, eco.node_count() - 1);
    }
    return y;
}

double fitness(const ApplicationDag& dag, const Ecosystem& eco, const TaskAllocation& x, const RapConfig& cfg) {
    const double e = price_rap(dag, eco, x, cfg).energy;
    return std::isfinite(e) && e > 0 ? 1.0 / e : 0.0;
}

TapResult run_genetic(int v, const Ecosystem& eco, const GaParams& params, const Pricer& price) {
    validate_ga_params(params, v);
    Rng rng(params.seed);
    const int ps = params.ps;
    const int cross = crossover_count(params);
    const int mn = effective_mn(params, v);

    std::vector<TaskAllocation> init;
    if (!params.pure_random_init)
        for (Preset p : {Preset::Fog, Preset::Cloud, Preset::Mobile})
            if (static_cast<int>(init.size()) < ps) init.push_back(preset_allocation(p, v, eco));
    while (static_cast<int>(init.size()) < ps) init.push_back(random_allocation(v, eco, rng));

    TapResult res;
    std::vector<Individual> pop;
    {
        const auto prices = price_all(init, price);
        res.rap_calls += ps;
        for (int i = 0; i < ps; ++i) pop.push_back({init[i], prices[i]});
    }
    std::sort(pop.begin(), pop.end(), better);
    Individual best = pop.front();
    res.generation_best.push_back(best.price.energy);

    for (int g = 1; g <= params.g_max; ++g) {
        std::vector<TaskAllocation> offspring;
        for (int k = 0; k + 1 < cross; k += 2) {
            auto [c1, c2] = crossover(pop[k].x, pop[k + 1].x, rng);
            offspring.push_back(std::move(c1));
            offspring.push_back(std::move(c2));
        }
        for (int k = cross; k < ps; ++k) offspring.push_back(mutate(pop[k].x, mn, eco, rng));
        const auto prices = price_all(offspring, price);
        res.rap_calls += static_cast<long>(offspring.size());

        std::vector<Individual> pool(pop.begin(), pop.begin() + cross);
        for (std::size_t i = 0; i < offspring.size(); ++i) pool.push_back({offspring[i], prices[i]});
        std::sort(pool.begin(), pool.end(), better);
        pool.resize(ps);
        pop = std::move(pool);
        if (better(pop.front(), best)) best = pop.front();
        res.generation_best.push_back(best.price.energy);
    }
    res.x_best = best.x;
    res.rs_best = best.price.rs;
    res.e_best = best.price.energy;
    res.lambda = best.price.lambda;
    return res;
}

TapResult solve_agtas(const ApplicationDag& dag, const Ecosystem& eco, const GaParams& params,
                      const RapConfig& cfg) {
    TapResult r = run_genetic(dag.size(), eco, params,
                              [&](const TaskAllocation& x) { return price_rap(dag, eco, x, cfg); });
    return finish(dag, eco, std::move(r));
}

TapResult solve_otas(const ApplicationDag& dag, const Ecosystem& eco, const GaParams& params) {
    const Eigen::VectorXd rs_max = max_resource_vector(eco);
    TapResult r = run_genetic(dag.size(), eco, params, [&](const TaskAllocation& x) -> Pricing {
        const double t = dag_execution_time(dag, eco, x, rs_max);
        if (!(eco.th_min * t - 1.0 <= 0.0)) return {kInf, rs_max, 0.0};
        return {total_energy(dag, eco, x, rs_max).e_tot, rs_max, 0.0};
    });
    return finish(dag, eco, std::move(r));
}

TapResult solve_fixed(const ApplicationDag& dag, const Ecosystem& eco, Preset preset, const RapConfig& cfg) {
    TapResult r;
    r.x_best = preset_allocation(preset, dag.size(), eco);
    const Pricing p = price_rap(dag, eco, r.x_best, cfg);
    r.rs_best = p.rs;
    r.e_best = p.energy;
    r.lambda = p.lambda;
    r.rap_calls = 1;
    r.generation_best.push_back(p.energy);
    return finish(dag, eco, std::move(r));
}

long aess_candidate_count(int v, const Ecosystem& eco) {
    double count = std::pow(static_cast<double>(eco.node_count()), std::max(0, v - 2));
    return count > 9e18 ? std::numeric_limits<long>::max() : static_cast<long>(count);
}

TapResult solve_aess(const ApplicationDag& dag, const Ecosystem& eco, const RapConfig& cfg, long cap) {
    const int v = dag.size();
    const long count = aess_candidate_count(v, eco);
    if (count > cap)
        throw ParameterError("exhaustive search needs " + std::to_string(count) + " candidates, cap is " +
                             std::to_string(cap));
    std::vector<TaskAllocation> xs;
    xs.reserve(count);
    TaskAllocation x(v, kMobile);
    for (long c = 0; c < count; ++c) {
        xs.push_back(x);
        for (int i = v - 2; i >= 1; --i) {  // odometer over interior genes
            if (++x[i] < eco.node_count()) break;
            x[i] = 0;
        }
    }
    const auto prices = price_all(xs, [&](const TaskAllocation& y) { return price_rap(dag, eco, y, cfg); });
    TapResult r;
    r.rap_calls = count;
    r.e_best = kInf;
    r.x_best = xs.front();
    r.rs_best = prices.front().rs;
    for (long c = 0; c < count; ++c)
        if (prices[c].energy < r.e_best) {
            r.e_best = prices[c].energy;
            r.x_best = xs[c];
            r.rs_best = prices[c].rs;
            r.lambda = prices[c].lambda;
        }
    r.generation_best.push_back(r.e_best);
    return finish(dag, eco, std::move(r));
}

}  // namespace mfc
