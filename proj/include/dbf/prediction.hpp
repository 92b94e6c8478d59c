#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dbf/common.hpp"

namespace dbf {

// A horizon of predicted (or ground-truth) 2D poses with per-frame,
// per-landmark validity.
struct Prediction2D {
    std::vector<Eigen::MatrixX2d> poses;                       // H of L x 2
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> valid;  // H x L

    int horizon() const { return static_cast<int>(poses.size()); }
    int landmarks() const { return poses.empty() ? 0 : static_cast<int>(poses[0].rows()); }
};

}  // namespace dbf
