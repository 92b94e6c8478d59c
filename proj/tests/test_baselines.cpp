#include <doctest.h>

#include "dbf/baselines.hpp"
#include "test_util.hpp"

using namespace dbf;
using testutil::make_drifting_sequence;
using testutil::make_frame;

namespace {

SkeletonSequence take(const SkeletonSequence& seq, int count) {
    SkeletonSequence out = seq;
    out.frames.assign(seq.frames.begin(), seq.frames.begin() + count);
    return out;
}

Prediction2D gt_of(const SkeletonSequence& seq, int first, int horizon, const SkeletonConfig& cfg) {
    Prediction2D gt;
    gt.valid.resize(horizon, cfg.total_landmarks());
    for (int k = 0; k < horizon; ++k) {
        gt.poses.push_back(global_pose_2d(seq.frames[first + k], cfg));
        gt.valid.row(k) = landmark_validity(seq.frames[first + k], cfg).transpose();
    }
    return gt;
}

}  // namespace

TEST_CASE("zero_velocity repeats the last observed pose") {
    SkeletonConfig cfg;
    auto seq = make_drifting_sequence(10, {1.5, -0.5}, cfg);
    Prediction2D pred = zero_velocity(seq, 50, cfg);
    REQUIRE(pred.horizon() == 50);
    const Eigen::MatrixX2d last = global_pose_2d(seq.frames.back(), cfg);
    for (const auto& p : pred.poses) CHECK(p.isApprox(last));
    CHECK(pred.valid.all());
    CHECK_THROWS_AS(zero_velocity(SkeletonSequence{"s", "p", {}}, 50, cfg), DataError);
}

TEST_CASE("linear_prop propagates last observed velocity") {
    SkeletonConfig cfg;
    SUBCASE("static observation equals zero_velocity") {
        auto seq = make_drifting_sequence(10, {0, 0}, cfg);
        Prediction2D lp = linear_prop(seq, 20, cfg);
        Prediction2D zv = zero_velocity(seq, 20, cfg);
        for (int k = 0; k < 20; ++k) CHECK(lp.poses[k].isApprox(zv.poses[k]));
    }
    SUBCASE("part velocity is the landmark average") {
        auto seq = make_drifting_sequence(3, {0, 0}, cfg);
        // give the body two different landmark velocities: (2,0) and (0,2)
        Frame& last = seq.frames.back();
        (*last.landmarks.body)(1, 0) += 2.0;
        (*last.landmarks.body)(2, 1) += 2.0;
        Prediction2D lp = linear_prop(seq, 3, cfg);
        const Eigen::MatrixX2d base = global_pose_2d(seq.frames.back(), cfg);
        const Eigen::RowVector2d v(2.0 / cfg.body_points, 2.0 / cfg.body_points);
        for (int k = 0; k < 3; ++k)
            for (int l = cfg.body_begin(); l < cfg.left_hand_begin(); ++l)
                CHECK((lp.poses[k].row(l) - (base.row(l) + double(k + 1) * v)).norm() < 1e-12);
    }
    SUBCASE("exact on constant-velocity ground truth") {
        auto seq = make_drifting_sequence(60, {0.7, 0.2}, cfg);
        Prediction2D lp = linear_prop(take(seq, 10), 50, cfg);
        Prediction2D gt = gt_of(seq, 10, 50, cfg);
        for (int k = 0; k < 50; ++k) CHECK((lp.poses[k] - gt.poses[k]).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("fewer than two frames throws") {
        auto seq = make_drifting_sequence(1, {0, 0}, cfg);
        CHECK_THROWS_AS(linear_prop(seq, 10, cfg), DataError);
    }
}

TEST_CASE("rto_mean endpoint and rigidity") {
    SkeletonConfig cfg;
    SUBCASE("constant observation equals zero_velocity") {
        auto seq = make_drifting_sequence(10, {0, 0}, cfg);
        Prediction2D rm = rto_mean(seq, 50, false, cfg);
        Prediction2D zv = zero_velocity(seq, 50, cfg);
        for (int k = 0; k < 50; ++k) CHECK(rm.poses[k].isApprox(zv.poses[k]));
    }
    SUBCASE("per-landmark version hits the observed mean at frame H") {
        auto seq = make_drifting_sequence(20, {1.0, 0.5}, cfg);
        Prediction2D rm = rto_mean(seq, 50, true, cfg);
        // mean over frames 0..19 of a linear drift = pose at t = 9.5
        Eigen::MatrixX2d mean =
            0.5 * (global_pose_2d(seq.frames[9], cfg) + global_pose_2d(seq.frames[10], cfg));
        CHECK((rm.poses.back() - mean).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("part version only translates, never reshapes") {
        auto seq = make_drifting_sequence(10, {0, 0}, cfg);
        // deform the face over the observation, keeping the last frame intact
        for (int t = 0; t < 5; ++t) (*seq.frames[t].landmarks.face)(5, 0) += 40.0;
        Prediction2D rm = rto_mean(seq, 50, false, cfg);
        const Eigen::MatrixX2d last = global_pose_2d(seq.frames.back(), cfg);
        // shape = pairwise differences within the face stay those of the last pose
        for (int k = 0; k < 50; ++k) {
            for (int l = 1; l < cfg.face_points; ++l) {
                const Eigen::RowVector2d d_pred = rm.poses[k].row(l) - rm.poses[k].row(0);
                const Eigen::RowVector2d d_last = last.row(l) - last.row(0);
                CHECK((d_pred - d_last).norm() < 1e-12);
            }
        }
    }
}

TEST_CASE("baselines preserve the last frame's validity mask") {
    SkeletonConfig cfg;
    auto seq = make_drifting_sequence(10, {0.3, 0.1}, cfg);
    Frame& last = seq.frames.back();
    last.landmarks.left_hand.reset();
    last.quality.left_hand = false;

    const std::vector<Prediction2D> preds = {zero_velocity(seq, 8, cfg), linear_prop(seq, 8, cfg),
                                             rto_mean(seq, 8, true, cfg)};
    for (const auto& pred : preds) {
        for (int k = 0; k < 8; ++k) {
            for (int l = cfg.left_hand_begin(); l < cfg.right_hand_begin(); ++l)
                CHECK(!pred.valid(k, l));
            CHECK(pred.valid(k, 0));
        }
    }
}
