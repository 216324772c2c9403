#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace campaign {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

} // namespace campaign
