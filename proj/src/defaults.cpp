#include <cmath>

#include "mfc/platform.hpp"

namespace mfc {

namespace {

// chi such that the power coefficient equals omega for the given geometry.
double chi_for(double omega, double rtt, double eta, double length_m, double alpha) {
    return omega * (1.0 + std::pow(length_m, alpha)) / std::pow(rtt, eta);
}

WirelessLinkSpec radio(double r_max, double nf, double xi_tx, double xi_rx, double omega_tx, double omega_rx,
                       double rtt, double eta, double length_m, double alpha) {
    WirelessLinkSpec l;
    l.r_max = r_max;
    l.nf = nf;
    l.xi_tx = xi_tx;
    l.xi_rx = xi_rx;
    l.rtt = rtt;
    l.eta = eta;
    l.length_m = length_m;
    l.alpha = alpha;
    l.chi_tx = chi_for(omega_tx, rtt, eta, length_m, alpha);
    l.chi_rx = chi_for(omega_rx, rtt, eta, length_m, alpha);
    refresh_omegas(l);
    return l;
}

}  // namespace

Ecosystem default_ecosystem(int q) {
    Ecosystem eco;
    eco.q = q;
    eco.service_model = ServiceModel::eco_centric();
    eco.th_min = 1.0 / 0.3;

    NodeSpec mobile{NodeKind::Mobile, 1, 12e6, 4.6e-14, 2.0, 0.1, 1, 8.0, 0.5};
    NodeSpec fog{NodeKind::Fog, 32, 20e6, 6.4e-15, 2.0, 0.1, 32, 64.0, 1.0};
    NodeSpec cloud{NodeKind::Cloud, 64, 20e6, 4e-15, 2.0, 0.1, 64, 256.0, 2.0};
    eco.nodes.push_back(mobile);
    for (int l = 0; l < q; ++l) eco.nodes.push_back(fog);
    eco.nodes.push_back(cloud);

    // WiFi towards the Fog nodes, cellular towards the Cloud.
    const WirelessLinkSpec wifi_up = radio(20e6, 0.05, 2.0, 2.0, 4.5e-14, 2.85e-14, 0.01, 0.5, 20.0, 2.5);
    const WirelessLinkSpec wifi_down = radio(20e6, 0.05, 2.0, 2.0, 4.5e-14, 2.85e-14, 0.01, 0.5, 20.0, 2.5);
    const WirelessLinkSpec cell_up = radio(10e6, 0.1, 2.0, 2.0, 1.2e-13, 0.8e-13, 0.05, 0.5, 500.0, 3.0);
    const WirelessLinkSpec cell_down = radio(10e6, 0.1, 2.0, 2.0, 1.2e-13, 0.8e-13, 0.05, 0.5, 500.0, 3.0);
    for (int l = 0; l < q; ++l) {
        eco.uplink.push_back(wifi_up);
        eco.downlink.push_back(wifi_down);
    }
    eco.uplink.push_back(cell_up);
    eco.downlink.push_back(cell_down);

    for (int a = 1; a <= eco.cloud(); ++a)
        for (int b = a + 1; b <= eco.cloud(); ++b) {
            BackhaulLinkSpec l;
            l.a = a;
            l.b = b;
            l.hops = 3;
            l.p_hop = 2.0;
            l.mss = 12000;
            l.rtt = 0.0396;
            l.p_loss = 0.002;
            l.nf = 0.05;
            eco.backhaul.push_back(l);
        }
    return eco;
}

}  // namespace mfc
