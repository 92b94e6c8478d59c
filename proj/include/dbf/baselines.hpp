#pragma once

#include "dbf/prediction.hpp"
#include "dbf/skeleton.hpp"

namespace dbf {

// The four analytic baselines. All of them predict from the tail of an
// observed sequence and preserve the last observed frame's validity mask for
// every predicted frame. Parts absent at the last observed frame yield
// invalid (zero-filled) predictions.

// Propagates the last observed pose for all H frames.
Prediction2D zero_velocity(const SkeletonSequence& obs, int horizon, const SkeletonConfig& cfg);

// Per part group: v = mean over the part's landmarks of pose(T) - pose(T-1),
// applied every predicted frame. Requires >= 2 observed frames.
Prediction2D linear_prop(const SkeletonSequence& obs, int horizon, const SkeletonConfig& cfg);

// Regression to the observed mean at the last predicted frame.
// per_landmark=false: one rigid translation per part group; true: one
// velocity per landmark (frame H hits the per-landmark observed mean).
// Means are taken over frames where the part is valid.
Prediction2D rto_mean(const SkeletonSequence& obs, int horizon, bool per_landmark,
                      const SkeletonConfig& cfg);

}  // namespace dbf
