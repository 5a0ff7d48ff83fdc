#include <cmath>

#include "doctest.h"
#include "mfc/energy.hpp"
#include "mfc/timing.hpp"
#include "support.hpp"

using namespace mfc;

namespace {

ApplicationDag line_dag(const std::vector<double>& sizes, double edge) {
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(sizes.data(), static_cast<Eigen::Index>(sizes.size()));
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < static_cast<int>(sizes.size()); ++i) edges.push_back({i, i + 1, edge});
    return make_dag(s, edges);
}

Ecosystem random_disciplines(Ecosystem eco, Rng& rng) {
    eco.service_discipline = uniform01(rng) < 0.5 ? ServiceDiscipline::Seq : ServiceDiscipline::Wps;
    eco.scheduling_discipline = uniform01(rng) < 0.5 ? SchedulingDiscipline::Sts : SchedulingDiscipline::Pts;
    eco.network_time_mode = uniform01(rng) < 0.5 ? NetworkTimeMode::Sum : NetworkTimeMode::Max;
    eco.service_model = uniform01(rng) < 0.5 ? ServiceModel::eco_centric() : ServiceModel::mobile_centric();
    return eco;
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("computing energy") {
    Ecosystem eco = default_ecosystem(1);
    NodeSpec& fog = eco.nodes[1];
    fog.n = 2;
    fog.r = 0;
    fog.k = 1e-12;
    fog.gamma = 2;
    fog.f_max = 1e6;
    const auto dag = line_dag({1e5, 6e6, 1e5}, 1e3);
    const TaskAllocation x{0, 1, 0};
    const Eigen::VectorXd rs = max_resource_vector(eco);
    CHECK(node_total_service_time(dag, eco, x, rs, 1) == doctest::Approx(3.0));
    const auto e = computing_energy(dag, eco, x, rs, 10.0, 1);
    CHECK(e.dynamic_part == doctest::Approx(6.0));
    CHECK(e.static_part == doctest::Approx(fog.p_cpu_idle / fog.nc * 10.0));

    const auto none = computing_energy(dag, eco, x, rs, 10.0, eco.cloud());
    CHECK(none.static_part == 0.0);
    CHECK(none.dynamic_part == 0.0);

    Eigen::VectorXd fast = rs;
    fast(1) *= 2;
    CHECK(computing_energy(dag, eco, x, fast, 10.0, 1).dynamic_part == doctest::Approx(12.0));
    fog.gamma = 3;
    CHECK(computing_energy(dag, eco, x, fast, 10.0, 1).dynamic_part ==
          doctest::Approx(4 * computing_energy(dag, eco, x, rs, 10.0, 1).dynamic_part));
}

TEST_CASE("wireless dynamic power") {
    WirelessLinkSpec l;
    l.omega_tx = l.omega_rx = 1e-14;
    l.xi_tx = l.xi_rx = 2;
    CHECK(wireless_dynamic_power(l, 0.0, 1, 1) == 0.0);
    CHECK(wireless_dynamic_power(l, 1e6, 1, 1) == doctest::Approx(2e-2));
    CHECK(wireless_dynamic_power(l, 1e6, 0, 1) == doctest::Approx(1e-2));

    Ecosystem eco = default_ecosystem(1);
    eco.service_model = ServiceModel::mobile_centric();
    const auto& down = eco.downlink[0];
    CHECK(wireless_dynamic_power(eco, 1, kMobile, 1e6) ==
          doctest::Approx(down.omega_rx * std::pow(1e6, down.xi_rx)));
}

TEST_CASE("connection volume") {
    Ecosystem eco = default_ecosystem(1);
    eco.uplink[0].nf = 0;
    const auto dag = line_dag({1e5, 1e5, 1e5}, 2e5);
    CHECK(connection_volume(dag, eco, TaskAllocation{0, 0, 0}, 0, 1) == 0.0);
    CHECK(connection_volume(dag, eco, TaskAllocation{0, 1, 1}, 0, 1) == doctest::Approx(2e5));
}

TEST_CASE("connection volumes conserve the crossing edge weight") {
    Rng rng(41);
    const auto dag = builtin_dag(BuiltinDag::Dag1, 1);
    for (int t = 0; t < 100; ++t) {
        const Ecosystem eco = default_ecosystem(1 + t % 3);
        const auto x = oracle::random_x(dag.size(), eco, rng);
        double raw = 0;
        for (int a = 0; a < eco.node_count(); ++a)
            for (int b = 0; b < eco.node_count(); ++b)
                if (a != b) raw += connection_volume(dag, eco, x, a, b) / (1 + link_nf(eco, a, b));
        double crossing = 0;
        for (const auto& e : edge_list(dag))
            if (x[e.from] != x[e.to]) crossing += e.weight;
        CHECK(raw == doctest::Approx(crossing).epsilon(1e-12));
    }
}

TEST_CASE("one-way backhaul energy") {
    Ecosystem eco = default_ecosystem(1);
    auto& bh = eco.backhaul[0];
    bh.hops = 3;
    bh.p_hop = 2;
    bh.nf = 0;
    bh.rtt = 0.04;
    bh.p_loss = 1;
    bh.mss = 3.70e6 * 0.04 / 1.22;
    CHECK(bh.r() == doctest::Approx(3.70e6));
    const auto dag = line_dag({1e5, 1e5, 1e5, 1e5}, 1e6);
    const TaskAllocation x{0, 1, 2, 0};
    const Eigen::VectorXd rs = max_resource_vector(eco);
    const auto e = oneway_network_energy(dag, eco, x, rs, 0.0, 1, eco.cloud());
    CHECK(e.dynamic_part == doctest::Approx(6.0 / 3.7));
    CHECK(e.dynamic_part == doctest::Approx(1.62).epsilon(1e-2));
    CHECK(e.static_part == 0.0);
    const auto none = oneway_network_energy(dag, eco, x, rs, 1.0, eco.cloud(), 1);
    CHECK(none.total() == 0.0);

    const auto br = total_energy(dag, eco, x, rs);
    double two_way = 0;
    for (const auto& c : br.per_connection)
        if (c.from != kMobile && c.to != kMobile) two_way += c.energy.total();
    CHECK(br.e_bh == doctest::Approx(two_way));
}

TEST_CASE("traffic over an absent link costs infinite energy") {
    Ecosystem eco = default_ecosystem(1);
    const auto dag = builtin_dag(BuiltinDag::Dag1, 1);
    const auto x = preset_allocation(Preset::Fog, dag.size(), eco);
    Eigen::VectorXd rs = max_resource_vector(eco);
    rs(link_slot(eco, kMobile, 1)) = 0;
    CHECK(std::isinf(total_energy(dag, eco, x, rs).e_tot));
}

TEST_CASE("mobile-centric all-mobile placement only prices the mobile") {
    Ecosystem eco = default_ecosystem(1);
    eco.service_model = ServiceModel::mobile_centric();
    const auto dag = builtin_dag(BuiltinDag::Dag2, 1);
    const auto x = preset_allocation(Preset::Mobile, dag.size(), eco);
    const auto e = total_energy(dag, eco, x, max_resource_vector(eco));
    CHECK(e.e_net == 0.0);
    CHECK(e.e_tot == doctest::Approx(e.per_node[kMobile].total()));
    CHECK(e.per_connection.empty());
}

TEST_CASE("gated nodes are still reported per node") {
    Ecosystem eco = default_ecosystem(1);
    eco.service_model = ServiceModel::mobile_centric();
    const auto dag = builtin_dag(BuiltinDag::Dag1, 1);
    const auto x = preset_allocation(Preset::Fog, dag.size(), eco);
    const auto e = total_energy(dag, eco, x, max_resource_vector(eco));
    CHECK(e.per_node[1].total() > 0);
    CHECK(e.e_cmp == doctest::Approx(e.per_node[kMobile].total()));
}

TEST_CASE("breakdown reconciles with an independent re-summation") {
    Rng rng(43);
    for (int t = 0; t < 1000; ++t) {
        const Ecosystem eco = random_disciplines(default_ecosystem(1 + t % 3), rng);
        const int v = 3 + t % 8;
        const auto dag = oracle::random_dag(v, rng);
        const auto x = oracle::random_x(v, eco, rng);
        const Eigen::VectorXd rs = oracle::random_rs(eco, rng);
        const auto e = total_energy(dag, eco, x, rs);
        CHECK(oracle::rel_err(e.e_tot, oracle::total_energy(dag, eco, x, rs)) < 1e-9);
        CHECK(oracle::rel_err(e.e_tot, e.e_cmp + e.e_net) < 1e-12);
        CHECK(oracle::rel_err(e.e_net, e.e_sr + e.e_lr + e.e_bh) < 1e-12);
        double parts = 0;
        for (int n = 0; n < eco.node_count(); ++n)
            if (eco.theta(n)) parts += e.per_node[n].total();
        for (const auto& c : e.per_connection) parts += c.energy.total();
        CHECK(oracle::rel_err(e.e_tot, parts) < 1e-9);
        CHECK(e.e_mobile >= e.per_node[kMobile].total());
    }
}

TEST_CASE("eco-centric energy dominates mobile-centric energy") {
    Rng rng(47);
    for (int t = 0; t < 200; ++t) {
        Ecosystem eco = default_ecosystem(2);
        const auto dag = oracle::random_dag(8, rng);
        const auto x = oracle::random_x(8, eco, rng);
        const Eigen::VectorXd rs = oracle::random_rs(eco, rng);
        const double full = total_energy(dag, eco, x, rs).e_tot;
        eco.service_model = ServiceModel::mobile_centric();
        const auto mob = total_energy(dag, eco, x, rs);
        CHECK(full >= mob.e_tot);
        eco.service_model = ServiceModel::eco_centric();
        CHECK(total_energy(dag, eco, x, rs).e_mobile == doctest::Approx(mob.e_mobile));
    }
}

TEST_CASE("idle links carry no static energy") {
    Ecosystem eco = default_ecosystem(1);
    const auto dag = builtin_dag(BuiltinDag::Dag1, 1);
    const auto x = preset_allocation(Preset::Fog, dag.size(), eco);
    const Eigen::VectorXd rs = max_resource_vector(eco);
    CHECK(rs(link_slot(eco, kMobile, eco.cloud())) > 0);
    const auto e = oneway_network_energy(dag, eco, x, rs, 1.0, kMobile, eco.cloud());
    CHECK(e.static_part == 0.0);
    CHECK(total_energy(dag, eco, x, rs).e_lr == 0.0);
}

TEST_CASE("energy is convex along segments") {
    Rng rng(53);
    for (int t = 0; t < 300; ++t) {
        const Ecosystem eco = random_disciplines(default_ecosystem(1), rng);
        const auto dag = oracle::random_dag(9, rng);
        const auto x = oracle::random_x(9, eco, rng);
        const Eigen::VectorXd a = oracle::random_rs(eco, rng, 0.05), b = oracle::random_rs(eco, rng, 0.05);
        const double w = uniform01(rng);
        const double mid = total_energy(dag, eco, x, Eigen::VectorXd(w * a + (1 - w) * b)).e_tot;
        const double chord = w * total_energy(dag, eco, x, a).e_tot + (1 - w) * total_energy(dag, eco, x, b).e_tot;
        CHECK(mid <= chord + 1e-9);
    }
}

TEST_CASE("csv row layout") {
    const Ecosystem eco = default_ecosystem(2);
    const auto dag = builtin_dag(BuiltinDag::Dag1, 1);
    const auto e = total_energy(dag, eco, preset_allocation(Preset::Fog, 9, eco), max_resource_vector(eco));
    const auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    CHECK(count(energy_csv_header(eco)) == count(energy_csv_row(e)));
    CHECK(count(energy_csv_header(eco)) == 7 + 2 * eco.node_count());
    CHECK(energy_csv_row(infinite_energy(eco)).find("inf") != std::string::npos);
}

}
