#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mfc/platform.hpp"

namespace mfc {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// x_i is the node index hosting task i (0 = M).
using TaskAllocation = std::vector<int>;
using ResourceAllocation = Eigen::VectorXd;

enum class Preset { Fog, Cloud, Mobile };

// Throws ParameterError unless x has length V, endpoints on M and entries in A.
void check_allocation(const TaskAllocation& x, int v, const Ecosystem& eco);

// [M,F1,...,F1,M], [M,C,...,C,M] and [M,...,M].
TaskAllocation preset_allocation(Preset preset, int v, const Ecosystem& eco);

// Accepts "fog", "cloud", "mobile" or a comma list of node names such as "M,F1,C,M".
TaskAllocation parse_allocation(const std::string& spec, int v, const Ecosystem& eco);
std::string format_allocation(const TaskAllocation& x, const Ecosystem& eco);

}  // namespace mfc
