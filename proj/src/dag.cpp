#include "mfc/dag.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>

#include "json.hpp"
#include "mfc/error.hpp"
#include "mfc/io.hpp"
#include "mfc/random.hpp"

namespace mfc {

double ApplicationDag::total_edge_weight() const {
    return adjacency.cast<double>().cwiseProduct(edge_weights).sum();
}

ApplicationDag make_dag(const Eigen::VectorXd& task_sizes, const std::vector<Edge>& edges,
                        const Eigen::VectorXd& priorities) {
    const int v = static_cast<int>(task_sizes.size());
    ApplicationDag dag;
    dag.task_sizes = task_sizes;
    dag.adjacency = Eigen::MatrixXi::Zero(v, v);
    dag.edge_weights = Eigen::MatrixXd::Zero(v, v);
    dag.priorities = priorities.size() == 0 ? Eigen::VectorXd::Ones(v) : priorities;
    if (dag.priorities.size() != v) throw StructuralError("priorities length differs from task count");
    for (const Edge& e : edges) {
        if (e.from < 0 || e.from >= v || e.to < 0 || e.to >= v)
            throw StructuralError("edge endpoint out of range");
        if (dag.adjacency(e.from, e.to) != 0) throw StructuralError("duplicate edge");
        dag.adjacency(e.from, e.to) = 1;
        dag.edge_weights(e.from, e.to) = e.weight;
    }
    return dag;
}

std::vector<Edge> edge_list(const ApplicationDag& dag) {
    std::vector<Edge> out;
    for (int i = 0; i < dag.size(); ++i)
        for (int j = 0; j < dag.size(); ++j)
            if (dag.adjacency(i, j) != 0) out.push_back({i, j, dag.edge_weights(i, j)});
    return out;
}

bool ValidationReport::has(const std::string& property) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.property == property; });
}

namespace {

std::vector<bool> reachable(const Eigen::MatrixXi& a, int start, bool forward) {
    const int v = static_cast<int>(a.rows());
    std::vector<bool> seen(v, false);
    std::queue<int> todo;
    seen[start] = true;
    todo.push(start);
    while (!todo.empty()) {
        const int u = todo.front();
        todo.pop();
        for (int w = 0; w < v; ++w) {
            const int link = forward ? a(u, w) : a(w, u);
            if (link != 0 && !seen[w]) {
                seen[w] = true;
                todo.push(w);
            }
        }
    }
    return seen;
}

bool acyclic(const Eigen::MatrixXi& a) {
    const int v = static_cast<int>(a.rows());
    std::vector<int> indeg(v, 0);
    for (int j = 0; j < v; ++j)
        for (int i = 0; i < v; ++i) indeg[j] += a(i, j) != 0;
    std::queue<int> ready;
    for (int i = 0; i < v; ++i)
        if (indeg[i] == 0) ready.push(i);
    int visited = 0;
    while (!ready.empty()) {
        const int u = ready.front();
        ready.pop();
        ++visited;
        for (int w = 0; w < v; ++w)
            if (a(u, w) != 0 && --indeg[w] == 0) ready.push(w);
    }
    return visited == v;
}

}  // namespace

ValidationReport validate_dag(const ApplicationDag& dag) {
    const int v = dag.size();
    if (v < 2) throw StructuralError("a DAG needs at least two tasks");
    if (dag.adjacency.rows() != v || dag.adjacency.cols() != v || dag.edge_weights.rows() != v ||
        dag.edge_weights.cols() != v || dag.priorities.size() != v)
        throw StructuralError("matrix dimensions do not match the task count");

    ValidationReport rep;
    auto fail = [&](std::string prop, std::string detail) {
        rep.violations.push_back({std::move(prop), std::move(detail)});
    };
    const auto& a = dag.adjacency;
    const auto task = [](int i) { return "task " + std::to_string(i + 1); };

    for (int i = 0; i < v; ++i) {
        if (!(dag.task_sizes(i) > 0)) fail("task-size", task(i) + " has non-positive size");
        if (!(dag.priorities(i) > 0)) fail("priority", task(i) + " has non-positive priority");
        for (int j = 0; j < v; ++j) {
            if (a(i, j) != 0 && a(i, j) != 1) fail("adjacency-binary", "entry not in {0,1}");
            if (dag.edge_weights(i, j) < 0) fail("edge-weight", "negative edge weight");
            if (a(i, j) == 0 && dag.edge_weights(i, j) != 0)
                fail("edge-weight", "weight on a missing edge");
        }
    }
    if (!acyclic(a)) fail("acyclicity", "the graph contains a directed cycle");
    if (a.col(0).sum() != 0) fail("source-in-degree", "task 1 has incoming edges");
    if (a.row(v - 1).sum() != 0) fail("sink-out-degree", "task V has outgoing edges");

    const auto from_source = reachable(a, 0, true);
    const auto to_sink = reachable(a, v - 1, false);
    for (int i = 1; i < v - 1; ++i) {
        if (a.col(i).sum() < 1) fail("in-degree", task(i) + " has no parent");
        if (a.row(i).sum() < 1) fail("out-degree", task(i) + " has no child");
        if (!from_source[i]) fail("path-from-source", task(i) + " is unreachable from task 1");
        if (!to_sink[i]) fail("path-to-sink", task(i) + " does not reach task V");
    }
    rep.ok = rep.violations.empty();
    return rep;
}

Eigen::VectorXd cpu_workload(const ApplicationDag& dag, double processing_density) {
    if (!(processing_density > 0)) throw ParameterError("processing density must be positive");
    return processing_density * dag.task_sizes;
}

double ccr(const ApplicationDag& dag) {
    const int edges = dag.edge_count();
    const double edge_total = dag.total_edge_weight();
    if (edges == 0 || !(edge_total > 0)) throw ParameterError("CCR is undefined without weighted edges");
    return (dag.total_task_size() / dag.size()) / (edge_total / edges);
}

ApplicationDag scale_to_totals(const ApplicationDag& dag, double task_total, double edge_total) {
    if (!(task_total > 0) || !(edge_total > 0)) throw ParameterError("target totals must be positive");
    const double s = dag.total_task_size();
    const double d = dag.total_edge_weight();
    if (!(s > 0) || !(d > 0)) throw ParameterError("cannot rescale a DAG with zero totals");
    ApplicationDag out = dag;
    out.task_sizes *= task_total / s;
    out.edge_weights *= edge_total / d;
    return out;
}

std::pair<double, double> totals_for_ccr(const ApplicationDag& dag, double grand_total, double target_ccr) {
    if (!(grand_total > 0) || !(target_ccr > 0)) throw ParameterError("totals and CCR must be positive");
    const int edges = dag.edge_count();
    if (edges == 0) throw ParameterError("CCR is undefined without edges");
    const double edge_total = grand_total / (1.0 + target_ccr * dag.size() / edges);
    return {grand_total - edge_total, edge_total};
}

BuiltinDag parse_builtin_dag(const std::string& name) {
    std::string n;
    for (char c : name) n += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (n == "DAG1") return BuiltinDag::Dag1;
    if (n == "DAG2") return BuiltinDag::Dag2;
    if (n == "DAG3") return BuiltinDag::Dag3;
    if (n == "DAG4") return BuiltinDag::Dag4;
    throw ConfigError("unknown builtin DAG '" + name + "'");
}

std::string to_string(BuiltinDag id) {
    switch (id) {
        case BuiltinDag::Dag1: return "DAG1";
        case BuiltinDag::Dag2: return "DAG2";
        case BuiltinDag::Dag3: return "DAG3";
        case BuiltinDag::Dag4: return "DAG4";
    }
    return "?";
}

namespace {

struct Topology {
    int v;
    std::vector<std::pair<int, int>> edges;  // 1-based
};

Topology topology(BuiltinDag id) {
    switch (id) {
        case BuiltinDag::Dag1:  // mesh
            return {9, {{1, 2}, {1, 3}, {1, 4}, {2, 5}, {3, 5}, {3, 6}, {4, 6}, {4, 7},
                        {5, 8}, {6, 8}, {7, 8}, {8, 9}}};
        case BuiltinDag::Dag2:  // tree: one parent per intermediate task
            return {9, {{1, 2}, {2, 3}, {2, 4}, {3, 5}, {3, 6}, {4, 7}, {5, 8},
                        {6, 9}, {7, 9}, {8, 9}}};
        case BuiltinDag::Dag3:  // hybrid
            return {9, {{1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 5}, {3, 6}, {4, 7},
                        {5, 7}, {5, 8}, {6, 8}, {7, 9}, {8, 9}}};
        case BuiltinDag::Dag4:  // fork (2-4), parallel (5-8), tree (9-14)
            return {15, {{1, 2}, {2, 3}, {2, 4}, {3, 15}, {4, 15},
                         {1, 5}, {1, 6}, {5, 7}, {5, 8}, {6, 8}, {7, 15}, {8, 15},
                         {1, 9}, {9, 10}, {9, 11}, {10, 12}, {10, 13}, {11, 14},
                         {12, 15}, {13, 15}, {14, 15}}};
    }
    throw ConfigError("unknown builtin DAG");
}

}  // namespace

ApplicationDag builtin_topology(BuiltinDag id) {
    const Topology t = topology(id);
    std::vector<Edge> edges;
    for (auto [i, j] : t.edges) edges.push_back({i - 1, j - 1, 1.0});
    return make_dag(Eigen::VectorXd::Ones(t.v), edges);
}

ApplicationDag builtin_dag(BuiltinDag id, std::uint64_t seed) {
    const Topology t = topology(id);
    Rng rng(seed);
    // Raw weights before rescaling: source and sink uniform on [0.1, 0.3], the
    // other tasks and all edges uniform on [0.5, 1.5].
    Eigen::VectorXd sizes(t.v);
    for (int i = 0; i < t.v; ++i) {
        const bool endpoint = i == 0 || i == t.v - 1;
        sizes(i) = endpoint ? 0.1 + 0.2 * uniform01(rng) : 0.5 + uniform01(rng);
    }
    std::vector<Edge> edges;
    for (auto [i, j] : t.edges) edges.push_back({i - 1, j - 1, 0.5 + uniform01(rng)});
    const ApplicationDag raw = make_dag(sizes, edges);
    if (id == BuiltinDag::Dag4) {
        const auto [ts, te] = totals_for_ccr(raw, kCcrSweepTotal, 2.0);
        return scale_to_totals(raw, ts, te);
    }
    return scale_to_totals(raw, kDagTaskTotal, kDagEdgeTotal);
}

void to_json(nlohmann::json& j, const ApplicationDag& dag) {
    j = nlohmann::json::object();
    j["tasks"] = std::vector<double>(dag.task_sizes.data(), dag.task_sizes.data() + dag.size());
    auto edges = nlohmann::json::array();
    for (const Edge& e : edge_list(dag)) edges.push_back({e.from + 1, e.to + 1, e.weight});
    j["edges"] = edges;
    j["priorities"] = std::vector<double>(dag.priorities.data(), dag.priorities.data() + dag.size());
}

void from_json(const nlohmann::json& j, ApplicationDag& dag) {
    try {
        const auto tasks = j.at("tasks").get<std::vector<double>>();
        Eigen::VectorXd sizes = Eigen::Map<const Eigen::VectorXd>(tasks.data(), tasks.size());
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) throw ConfigError("each edge must be [i, j, weight_bit]");
            edges.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1, e[2].get<double>()});
        }
        Eigen::VectorXd prio;
        if (j.contains("priorities")) {
            const auto p = j.at("priorities").get<std::vector<double>>();
            prio = Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
        }
        dag = make_dag(sizes, edges, prio);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed DAG document: ") + e.what());
    }
}

ApplicationDag load_dag(const std::string& path) {
    return read_json_file(path).get<ApplicationDag>();
}

void save_dag(const ApplicationDag& dag, const std::string& path) {
    write_json_file(nlohmann::json(dag), path);
}

}  // namespace mfc
