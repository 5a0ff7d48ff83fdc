#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "mfc/dag.hpp"
#include "mfc/error.hpp"
#include "support.hpp"

using namespace mfc;

namespace {

ApplicationDag two_node() {
    Eigen::VectorXd s(2);
    s << 1e3, 1e3;
    return make_dag(s, {{0, 1, 1e3}});
}

// Reachability by Floyd-Warshall closure.
Eigen::MatrixXi closure(const Eigen::MatrixXi& a) {
    const int v = static_cast<int>(a.rows());
    Eigen::MatrixXi r = a;
    for (int k = 0; k < v; ++k)
        for (int i = 0; i < v; ++i)
            for (int j = 0; j < v; ++j)
                if (r(i, k) && r(k, j)) r(i, j) = 1;
    return r;
}

}  // namespace

TEST_SUITE("dag") {

TEST_CASE("minimal two-task graph is valid") {
    const auto rep = validate_dag(two_node());
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
}

TEST_CASE("back edge is reported as a cycle") {
    ApplicationDag d = builtin_dag(BuiltinDag::Dag1, 1);
    d.adjacency(d.size() - 1, 0) = 1;
    d.edge_weights(d.size() - 1, 0) = 1e3;
    const auto rep = validate_dag(d);
    CHECK_FALSE(rep.ok);
    CHECK(rep.has("acyclicity"));
}

TEST_CASE("isolated intermediate task violates degree and path properties") {
    Eigen::VectorXd s = Eigen::VectorXd::Constant(4, 1e3);
    const auto d = make_dag(s, {{0, 1, 1.0}, {1, 3, 1.0}});
    const auto rep = validate_dag(d);
    CHECK_FALSE(rep.ok);
    CHECK(rep.has("in-degree"));
    CHECK(rep.has("out-degree"));
    CHECK(rep.has("path-to-sink"));
    CHECK(rep.has("path-from-source"));
    CHECK_FALSE(rep.has("acyclicity"));
}

TEST_CASE("path properties agree with a transitive-closure oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int v = uniform_int(rng, 3, 9);
        Eigen::VectorXd s = Eigen::VectorXd::Constant(v, 1e3);
        std::vector<Edge> edges;
        for (int i = 0; i < v; ++i)
            for (int j = i + 1; j < v; ++j)
                if (uniform01(rng) < 0.3) edges.push_back({i, j, 1.0});
        const auto d = make_dag(s, edges);
        const Eigen::MatrixXi r = closure(d.adjacency);
        const auto rep = validate_dag(d);
        bool sink_bad = false, source_bad = false, in_bad = false, out_bad = false;
        for (int i = 1; i + 1 < v; ++i) {
            sink_bad |= r(i, v - 1) == 0;
            source_bad |= r(0, i) == 0;
            in_bad |= d.adjacency.col(i).sum() == 0;
            out_bad |= d.adjacency.row(i).sum() == 0;
        }
        CHECK(rep.has("path-to-sink") == sink_bad);
        CHECK(rep.has("path-from-source") == source_bad);
        CHECK(rep.has("in-degree") == in_bad);
        CHECK(rep.has("out-degree") == out_bad);
        CHECK_FALSE(rep.has("acyclicity"));
        CHECK(rep.ok == rep.violations.empty());
    }
}

TEST_CASE("weights and sizes are checked") {
    ApplicationDag d = two_node();
    d.edge_weights(1, 0) = 5;
    d.task_sizes(0) = 0;
    const auto rep = validate_dag(d);
    CHECK(rep.has("edge-weight"));
    CHECK(rep.has("task-size"));
}

TEST_CASE("dimension mismatch is a structural error") {
    ApplicationDag d = two_node();
    d.edge_weights = Eigen::MatrixXd::Zero(3, 3);
    CHECK_THROWS_AS(validate_dag(d), StructuralError);
    Eigen::VectorXd one(1);
    one << 1.0;
    CHECK_THROWS_AS(validate_dag(make_dag(one, {})), StructuralError);
}

TEST_CASE("cpu workload scales sizes by the processing density") {
    Eigen::VectorXd s(2);
    s << 1000, 3000;
    const auto d = make_dag(s, {{0, 1, 1.0}});
    CHECK(cpu_workload(d, 200)(0) == doctest::Approx(200000));
    CHECK(cpu_workload(d, 1) == d.task_sizes);
    s << 2000, 3000;
    const auto w = cpu_workload(make_dag(s, {{0, 1, 1.0}}), 33000);
    CHECK(w(0) == doctest::Approx(66e6));
    CHECK(w(1) == doctest::Approx(99e6));
    CHECK_THROWS_AS(cpu_workload(d, 0), ParameterError);
}

TEST_CASE("ccr of the mesh graph follows from its totals") {
    const auto d = builtin_dag(BuiltinDag::Dag1, 1);
    CHECK(d.edge_count() == 12);
    CHECK(ccr(d) == doctest::Approx((3.32e6 / 9) / (1.66e6 / 12)));
    CHECK(ccr(d) == doctest::Approx(2.667).epsilon(1e-3));
}

TEST_CASE("ccr is one for equal sizes and weights with V = |E|") {
    Eigen::VectorXd s = Eigen::VectorXd::Constant(3, 7.0);
    const auto d = make_dag(s, {{0, 1, 7.0}, {1, 2, 7.0}, {0, 2, 7.0}});
    CHECK(ccr(d) == doctest::Approx(1.0));
}

TEST_CASE("ccr scales linearly with the task total") {
    const auto d = builtin_dag(BuiltinDag::Dag3, 4);
    const auto a = scale_to_totals(d, 1e6, 2e6);
    const auto b = scale_to_totals(d, 4e6, 2e6);
    CHECK(ccr(b) == doctest::Approx(4 * ccr(a)));
}

TEST_CASE("ccr without edges is rejected") {
    Eigen::VectorXd s = Eigen::VectorXd::Constant(2, 1.0);
    CHECK_THROWS_AS(ccr(make_dag(s, {})), ParameterError);
}

TEST_CASE("scale_to_totals") {
    const auto d = builtin_dag(BuiltinDag::Dag2, 3);
    const auto same = scale_to_totals(d, d.total_task_size(), d.total_edge_weight());
    CHECK((same.task_sizes - d.task_sizes).cwiseAbs().maxCoeff() <= 1e-9 * d.task_sizes.maxCoeff());
    CHECK((same.edge_weights - d.edge_weights).cwiseAbs().maxCoeff() <= 1e-9 * d.edge_weights.maxCoeff());

    const auto s = scale_to_totals(d, 3.32e6, 1.66e6);
    CHECK(s.total_task_size() == doctest::Approx(3.32e6).epsilon(1e-12));
    CHECK(s.total_edge_weight() == doctest::Approx(1.66e6).epsilon(1e-12));
    CHECK(s.adjacency == d.adjacency);
    for (int i = 0; i < d.size(); ++i)
        for (int j = 0; j < d.size(); ++j)
            CHECK(s.task_sizes(i) / s.task_sizes(j) == doctest::Approx(d.task_sizes(i) / d.task_sizes(j)));

    const auto [ts, te] = totals_for_ccr(d, kCcrSweepTotal, 0.5);
    CHECK(ts + te == doctest::Approx(kCcrSweepTotal));
    CHECK(ccr(scale_to_totals(d, ts, te)) == doctest::Approx(0.5));

    ApplicationDag z = d;
    z.edge_weights.setZero();
    CHECK_THROWS_AS(scale_to_totals(z, 1, 1), ParameterError);
    CHECK_THROWS_AS(scale_to_totals(d, 0, 1), ParameterError);
}

TEST_CASE("built-in graphs") {
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
        const auto d4 = builtin_dag(BuiltinDag::Dag4, seed);
        CHECK(d4.size() == 15);
        CHECK(d4.edge_count() == 21);
        CHECK(ccr(d4) == doctest::Approx(2.0));
        CHECK(d4.total_task_size() + d4.total_edge_weight() == doctest::Approx(kCcrSweepTotal));
        for (auto id : {BuiltinDag::Dag1, BuiltinDag::Dag2, BuiltinDag::Dag3}) {
            const auto d = builtin_dag(id, seed);
            CHECK(d.size() == 9);
            CHECK(d.total_task_size() == doctest::Approx(kDagTaskTotal));
            CHECK(d.total_edge_weight() == doctest::Approx(kDagEdgeTotal));
        }
    }
}

TEST_CASE("built-in graphs are valid for every id and seed") {
    for (auto id : {BuiltinDag::Dag1, BuiltinDag::Dag2, BuiltinDag::Dag3, BuiltinDag::Dag4})
        for (std::uint64_t seed = 1; seed <= 25; ++seed) CHECK(validate_dag(builtin_dag(id, seed)).ok);
}

TEST_CASE("built-in graphs are seed-deterministic") {
    const auto a = builtin_dag(BuiltinDag::Dag1, 5), b = builtin_dag(BuiltinDag::Dag1, 5);
    CHECK(a.task_sizes == b.task_sizes);
    CHECK(a.edge_weights == b.edge_weights);
    CHECK(a.adjacency == b.adjacency);
    const auto c = builtin_dag(BuiltinDag::Dag1, 6);
    CHECK(c.task_sizes != a.task_sizes);
    CHECK(c.adjacency == a.adjacency);
}

TEST_CASE("tree graph gives every intermediate task one parent") {
    const auto d = builtin_dag(BuiltinDag::Dag2, 1);
    for (int i = 1; i + 1 < d.size(); ++i) CHECK(d.adjacency.col(i).sum() == 1);
}

TEST_CASE("the radio-navigation graph shares root and sink") {
    const auto d = builtin_topology(BuiltinDag::Dag4);
    CHECK(d.adjacency.col(0).sum() == 0);
    CHECK(d.adjacency.row(14).sum() == 0);
    CHECK(d.adjacency.row(0).sum() >= 3);
    CHECK(d.adjacency.col(14).sum() >= 3);
}

TEST_CASE("builtin names") {
    CHECK(parse_builtin_dag("DAG3") == BuiltinDag::Dag3);
    CHECK(to_string(BuiltinDag::Dag4) == "DAG4");
    CHECK_THROWS_AS(parse_builtin_dag("DAG9"), ConfigError);
}

TEST_CASE("file round trip is bit-exact") {
    const auto path = std::filesystem::temp_directory_path() / "mfc_dag_roundtrip.json";
    Rng rng(3);
    for (int t = 0; t < 5; ++t) {
        const auto d = oracle::random_dag(7 + t, rng);
        save_dag(d, path.string());
        const auto back = load_dag(path.string());
        CHECK(back.adjacency == d.adjacency);
        CHECK(back.edge_weights == d.edge_weights);
        CHECK(back.task_sizes == d.task_sizes);
        CHECK(back.priorities == d.priorities);
    }
    std::filesystem::remove(path);
}

TEST_CASE("malformed graph documents are rejected") {
    const auto path = std::filesystem::temp_directory_path() / "mfc_dag_bad.json";
    std::ofstream(path) << R"({"tasks": [1, 2], "edges": [[1, 2]]})";
    CHECK_THROWS_AS(load_dag(path.string()), ConfigError);
    std::filesystem::remove(path);
}

}
