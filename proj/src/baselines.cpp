#include "dbf/baselines.hpp"

namespace dbf {

namespace {

struct ObsTail {
    Eigen::MatrixX2d last_pose;
    Eigen::Array<bool, Eigen::Dynamic, 1> last_valid;
    Eigen::Array<bool, Eigen::Dynamic, 1> last_present;
};

ObsTail tail_of(const SkeletonSequence& obs, const SkeletonConfig& cfg) {
    if (obs.frames.empty()) throw DataError("baseline: empty observation");
    const Frame& last = obs.frames.back();
    return {global_pose_2d(last, cfg), landmark_validity(last, cfg), landmark_presence(last, cfg)};
}

Prediction2D constant_velocity_prediction(const ObsTail& tail, const Eigen::MatrixX2d& velocity,
                                          int horizon) {
    if (horizon < 1) throw DataError("baseline: horizon must be >= 1");
    Prediction2D pred;
    pred.poses.reserve(horizon);
    Eigen::MatrixX2d cur = tail.last_pose;
    for (int k = 0; k < horizon; ++k) {
        cur += velocity;
        pred.poses.push_back(cur);
    }
    pred.valid.resize(horizon, tail.last_valid.size());
    for (int k = 0; k < horizon; ++k) pred.valid.row(k) = tail.last_valid.transpose();
    return pred;
}

const std::array<PartGroup, 3> kGroups = {PartGroup::Face, PartGroup::Body, PartGroup::Hands};

}  // namespace

Prediction2D zero_velocity(const SkeletonSequence& obs, int horizon, const SkeletonConfig& cfg) {
    const ObsTail tail = tail_of(obs, cfg);
    return constant_velocity_prediction(tail, Eigen::MatrixX2d::Zero(tail.last_pose.rows(), 2),
                                        horizon);
}

Prediction2D linear_prop(const SkeletonSequence& obs, int horizon, const SkeletonConfig& cfg) {
    if (obs.frames.size() < 2) throw DataError("linear_prop: needs >= 2 observed frames");
    const ObsTail tail = tail_of(obs, cfg);
    const Frame& prev = obs.frames[obs.frames.size() - 2];
    const Eigen::MatrixX2d prev_pose = global_pose_2d(prev, cfg);
    const auto prev_present = landmark_presence(prev, cfg);

    Eigen::MatrixX2d velocity = Eigen::MatrixX2d::Zero(tail.last_pose.rows(), 2);
    for (PartGroup group : kGroups) {
        Eigen::RowVector2d v = Eigen::RowVector2d::Zero();
        int n = 0;
        for (auto [lo, hi] : part_landmark_ranges(group, cfg)) {
            for (int l = lo; l < hi; ++l) {
                if (tail.last_present[l] && prev_present[l]) {
                    v += tail.last_pose.row(l) - prev_pose.row(l);
                    ++n;
                }
            }
        }
        if (n == 0) continue;  // no observed velocity: the part stays put
        v /= n;
        for (auto [lo, hi] : part_landmark_ranges(group, cfg))
            for (int l = lo; l < hi; ++l)
                if (tail.last_present[l]) velocity.row(l) = v;
    }
    return constant_velocity_prediction(tail, velocity, horizon);
}

Prediction2D rto_mean(const SkeletonSequence& obs, int horizon, bool per_landmark,
                      const SkeletonConfig& cfg) {
    const ObsTail tail = tail_of(obs, cfg);
    const int L = static_cast<int>(tail.last_pose.rows());

    // Per-landmark visible-frame means over the observation.
    Eigen::MatrixX2d mean = Eigen::MatrixX2d::Zero(L, 2);
    Eigen::VectorXd frames_seen = Eigen::VectorXd::Zero(L);
    for (const Frame& f : obs.frames) {
        const Eigen::MatrixX2d pose = global_pose_2d(f, cfg);
        const auto present = landmark_presence(f, cfg);
        for (int l = 0; l < L; ++l) {
            if (present[l]) {
                mean.row(l) += pose.row(l);
                frames_seen[l] += 1.0;
            }
        }
    }

    Eigen::MatrixX2d velocity = Eigen::MatrixX2d::Zero(L, 2);
    if (per_landmark) {
        for (int l = 0; l < L; ++l) {
            if (tail.last_present[l] && frames_seen[l] > 0)
                velocity.row(l) = (mean.row(l) / frames_seen[l] - tail.last_pose.row(l)) / horizon;
        }
    } else {
        // One rigid translation per part group: move the part centroid from
        // its last observed position to its observed mean position.
        for (PartGroup group : kGroups) {
            Eigen::RowVector2d mean_centroid = Eigen::RowVector2d::Zero();
            Eigen::RowVector2d last_centroid = Eigen::RowVector2d::Zero();
            double mean_n = 0;
            int last_n = 0;
            for (auto [lo, hi] : part_landmark_ranges(group, cfg)) {
                for (int l = lo; l < hi; ++l) {
                    if (frames_seen[l] > 0) {
                        mean_centroid += mean.row(l) / frames_seen[l];
                        mean_n += 1.0;
                    }
                    if (tail.last_present[l]) {
                        last_centroid += tail.last_pose.row(l);
                        ++last_n;
                    }
                }
            }
            if (mean_n == 0 || last_n == 0) continue;
            const Eigen::RowVector2d v =
                (mean_centroid / mean_n - last_centroid / last_n) / horizon;
            for (auto [lo, hi] : part_landmark_ranges(group, cfg))
                for (int l = lo; l < hi; ++l)
                    if (tail.last_present[l]) velocity.row(l) = v;
        }
    }
    return constant_velocity_prediction(tail, velocity, horizon);
}

}  // namespace dbf
