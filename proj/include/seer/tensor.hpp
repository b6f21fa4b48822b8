#pragma once

#include <Eigen/Dense>

namespace seer {

// Row-major so that one row is one token; y = x W^T + b throughout.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVec = Eigen::Matrix<double, 1, Eigen::Dynamic>;

}  // namespace seer
