#pragma once

#include "dbf/common.hpp"
#include "dbf/skeleton.hpp"

namespace dbf::testutil {

// Fully present frame with deterministic coordinates spread around an anchor.
inline Frame make_frame(long index, double ax = 100.0, double ay = 100.0,
                        const SkeletonConfig& cfg = {}) {
    Frame f;
    f.frame_index = index;
    auto grid = [&](int n, double ox, double oy) {
        Eigen::MatrixX3d m(n, 3);
        for (int i = 0; i < n; ++i)
            m.row(i) << ax + ox + 3.0 * (i % 5), ay + oy + 3.0 * (i / 5), 0.5 * i;
        return m;
    };
    f.landmarks.face = grid(cfg.face_points, 0.0, 0.0);
    f.landmarks.body = grid(cfg.body_points, 0.0, 40.0);
    f.landmarks.left_hand = grid(cfg.hand_points, -30.0, 80.0);
    f.landmarks.right_hand = grid(cfg.hand_points, 30.0, 80.0);
    Eigen::MatrixX3d gaze(cfg.gaze_vectors, 3);
    for (int g = 0; g < cfg.gaze_vectors; ++g) gaze.row(g) << 0.0, 0.1 * (g + 1), -1.0;
    f.landmarks.gaze = gaze;
    f.quality = {true, true, true, true};
    return f;
}

// Sequence whose landmarks all move by `velocity` px/frame.
inline SkeletonSequence make_drifting_sequence(int frames, Eigen::Vector2d velocity,
                                               const SkeletonConfig& cfg = {}) {
    SkeletonSequence seq;
    seq.session_id = "s";
    seq.participant_id = "p";
    for (int t = 0; t < frames; ++t)
        seq.frames.push_back(make_frame(t, 100.0 + velocity.x() * t, 100.0 + velocity.y() * t, cfg));
    return seq;
}

}  // namespace dbf::testutil
