#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mfc {

// Weighted task graph. Tasks are indexed 0..V-1 in code and 1..V in files.
struct ApplicationDag {
    Eigen::MatrixXi adjacency;     // a_ij in {0,1}
    Eigen::MatrixXd edge_weights;  // d_ij [bit], zero where a_ij = 0
    Eigen::VectorXd task_sizes;    // s_i [bit]
    Eigen::VectorXd priorities;    // phi_i, used by weighted processor sharing

    int size() const { return static_cast<int>(task_sizes.size()); }
    int edge_count() const { return adjacency.sum(); }
    double total_task_size() const { return task_sizes.sum(); }
    double total_edge_weight() const;
};

struct Edge {
    int from;  // 0-based
    int to;    // 0-based
    double weight;
};

// Builds a DAG from sizes and an edge list; priorities default to ones.
ApplicationDag make_dag(const Eigen::VectorXd& task_sizes, const std::vector<Edge>& edges,
                        const Eigen::VectorXd& priorities = Eigen::VectorXd());

std::vector<Edge> edge_list(const ApplicationDag& dag);

struct Violation {
    std::string property;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;

    bool has(const std::string& property) const;
};

// Reports every violated structural property. Throws StructuralError on
// inconsistent dimensions only.
ValidationReport validate_dag(const ApplicationDag& dag);

Eigen::VectorXd cpu_workload(const ApplicationDag& dag, double processing_density);

double ccr(const ApplicationDag& dag);

ApplicationDag scale_to_totals(const ApplicationDag& dag, double task_total, double edge_total);

// Task and edge totals that realize a target CCR with a fixed overall sum.
std::pair<double, double> totals_for_ccr(const ApplicationDag& dag, double grand_total, double target_ccr);

enum class BuiltinDag { Dag1, Dag2, Dag3, Dag4 };

BuiltinDag parse_builtin_dag(const std::string& name);
std::string to_string(BuiltinDag id);

// Captioned topologies with seed-deterministic weights, rescaled to the
// default totals (3.32/1.66 Mbit for DAG1-3, 4.98 Mbit at CCR 2 for DAG4).
ApplicationDag builtin_dag(BuiltinDag id, std::uint64_t seed);

// Topology only: all weights 1.
ApplicationDag builtin_topology(BuiltinDag id);

inline constexpr double kDagTaskTotal = 3.32e6;
inline constexpr double kDagEdgeTotal = 1.66e6;
inline constexpr double kCcrSweepTotal = 4.98e6;

ApplicationDag load_dag(const std::string& path);
void save_dag(const ApplicationDag& dag, const std::string& path);

}  // namespace mfc
