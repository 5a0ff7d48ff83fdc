#include "mfc/allocation.hpp"

#include <sstream>

#include "mfc/error.hpp"

namespace mfc {

void check_allocation(const TaskAllocation& x, int v, const Ecosystem& eco) {
    if (static_cast<int>(x.size()) != v) throw ParameterError("allocation length differs from task count");
    if (x.front() != kMobile || x.back() != kMobile)
        throw ParameterError("first and last tasks must run on the Mobile device");
    for (int n : x)
        if (n < 0 || n >= eco.node_count()) throw ParameterError("allocation entry outside the node set");
}

TaskAllocation preset_allocation(Preset preset, int v, const Ecosystem& eco) {
    const int inner = preset == Preset::Fog ? 1 : preset == Preset::Cloud ? eco.cloud() : kMobile;
    TaskAllocation x(v, inner);
    x.front() = kMobile;
    x.back() = kMobile;
    return x;
}

TaskAllocation parse_allocation(const std::string& spec, int v, const Ecosystem& eco) {
    if (spec == "fog") return preset_allocation(Preset::Fog, v, eco);
    if (spec == "cloud") return preset_allocation(Preset::Cloud, v, eco);
    if (spec == "mobile") return preset_allocation(Preset::Mobile, v, eco);
    TaskAllocation x;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) x.push_back(parse_node(eco, tok));
    try {
        check_allocation(x, v, eco);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("allocation '") + spec + "': " + e.what());
    }
    return x;
}

std::string format_allocation(const TaskAllocation& x, const Ecosystem& eco) {
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out += ',';
        out += node_name(eco, x[i]);
    }
    return out;
}

}  // namespace mfc
