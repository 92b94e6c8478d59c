#include <doctest.h>

#include "dbf/skeleton.hpp"
#include "test_util.hpp"

using namespace dbf;
using testutil::make_frame;

TEST_CASE("compute_roots midpoint and per-part anchors") {
    SkeletonConfig cfg;
    Frame f = make_frame(0);
    f.landmarks.face->row(0) << 10, 10, 0;
    f.landmarks.face->row(1) << 20, 10, 0;
    RootSet roots = compute_roots(f, cfg);
    REQUIRE(roots.face.has_value());
    CHECK(roots.face->x() == doctest::Approx(15.0));
    CHECK(roots.face->y() == doctest::Approx(10.0));
    CHECK(roots.body->isApprox(f.landmarks.body->row(0).transpose()));
    CHECK(roots.left_hand->isApprox(f.landmarks.left_hand->row(0).transpose()));
    CHECK(roots.right_hand->isApprox(f.landmarks.right_hand->row(0).transpose()));
}

TEST_CASE("compute_roots propagates absence") {
    Frame f = make_frame(0);
    f.landmarks.left_hand.reset();
    f.landmarks.right_hand.reset();
    f.quality.left_hand = f.quality.right_hand = false;
    RootSet roots = compute_roots(f, {});
    CHECK(!roots.left_hand.has_value());
    CHECK(!roots.right_hand.has_value());
    CHECK(roots.face.has_value());
}

TEST_CASE("compute_roots all landmarks at origin") {
    SkeletonConfig cfg;
    Frame f = make_frame(0);
    f.landmarks.face->setZero();
    f.landmarks.body->setZero();
    f.landmarks.left_hand->setZero();
    f.landmarks.right_hand->setZero();
    RootSet roots = compute_roots(f, cfg);
    CHECK(roots.face->norm() == 0.0);
    CHECK(roots.body->norm() == 0.0);
    CHECK(roots.left_hand->norm() == 0.0);
    CHECK(roots.right_hand->norm() == 0.0);
}

TEST_CASE("to_features static frame has zero offsets") {
    SkeletonConfig cfg;
    Frame f = make_frame(1);
    Frame prev = f;
    prev.frame_index = 0;
    Eigen::VectorXd fv = to_features(f, &prev, compute_roots(f, cfg), cfg);
    CHECK(fv.size() == cfg.feature_length());
    CHECK(fv.segment(cfg.off_offset(), cfg.total_landmarks() * 3).cwiseAbs().maxCoeff() == 0.0);
    // root offsets and gaze offsets also zero
    for (int r = 0; r < 4; ++r) {
        CHECK(fv[cfg.root_offset() + 4 * r + 2] == 0.0);
        CHECK(fv[cfg.root_offset() + 4 * r + 3] == 0.0);
    }
}

TEST_CASE("to_features absent face zero-fills its block") {
    SkeletonConfig cfg;
    Frame f = make_frame(0);
    f.landmarks.face.reset();
    f.quality.face = false;
    Eigen::VectorXd fv = to_features(f, nullptr, compute_roots(f, cfg), cfg);
    CHECK(fv.segment(cfg.rel_offset(), cfg.face_points * 3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(fv.segment(cfg.off_offset(), cfg.face_points * 3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(fv.segment(cfg.root_offset(), 4).cwiseAbs().maxCoeff() == 0.0);
    // body block untouched
    CHECK(fv.segment(cfg.rel_offset() + cfg.body_begin() * 3, cfg.body_points * 3).cwiseAbs().sum() >
          0.0);
}

TEST_CASE("to_features landmark at its root is self-relative zero") {
    SkeletonConfig cfg;
    Frame f = make_frame(0);
    // chest is its own root
    const int chest_lm = cfg.body_begin() + cfg.chest_index;
    Eigen::VectorXd fv = to_features(f, nullptr, compute_roots(f, cfg), cfg);
    CHECK(fv.segment<3>(cfg.rel_offset() + 3 * chest_lm).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("feature layout recovers global 2D coordinates (bijection)") {
    SkeletonConfig cfg;
    Frame f = make_frame(3, 217.0, 131.0);
    RootSet roots = compute_roots(f, cfg);
    Eigen::VectorXd fv = to_features(f, nullptr, roots, cfg);
    Eigen::MatrixX2d pose = global_pose_2d(f, cfg);
    const double root_x[4] = {fv[cfg.root_offset() + 0], fv[cfg.root_offset() + 4],
                              fv[cfg.root_offset() + 8], fv[cfg.root_offset() + 12]};
    const double root_y[4] = {fv[cfg.root_offset() + 1], fv[cfg.root_offset() + 5],
                              fv[cfg.root_offset() + 9], fv[cfg.root_offset() + 13]};
    auto part_of = [&](int l) {
        if (l < cfg.body_begin()) return 0;
        if (l < cfg.left_hand_begin()) return 1;
        if (l < cfg.right_hand_begin()) return 2;
        return 3;
    };
    for (int l = 0; l < cfg.total_landmarks(); ++l) {
        const int p = part_of(l);
        CHECK(fv[cfg.rel_offset() + 3 * l] + root_x[p] == doctest::Approx(pose(l, 0)).epsilon(1e-12));
        CHECK(fv[cfg.rel_offset() + 3 * l + 1] + root_y[p] ==
              doctest::Approx(pose(l, 1)).epsilon(1e-12));
    }
}

TEST_CASE("apply_offsets cumulative reconstruction") {
    Eigen::MatrixX2d last = Eigen::MatrixX2d::Zero(3, 2);
    last << 1, 1, 2, 2, 3, 3;

    SUBCASE("zero offsets repeat the last pose") {
        std::vector<Eigen::MatrixX2d> offs(5, Eigen::MatrixX2d::Zero(3, 2));
        auto poses = apply_offsets(last, offs);
        REQUIRE(poses.size() == 5);
        for (const auto& p : poses) CHECK(p.isApprox(last));
    }
    SUBCASE("constant offset accumulates") {
        Eigen::MatrixX2d step = Eigen::MatrixX2d::Zero(3, 2);
        step.col(0).setConstant(1.0);
        std::vector<Eigen::MatrixX2d> offs(3, step);
        auto poses = apply_offsets(last, offs);
        for (int k = 0; k < 3; ++k) {
            CHECK(poses[k].col(0).isApprox(last.col(0).array() + double(k + 1)));
            CHECK(poses[k].col(1).isApprox(last.col(1)));
        }
    }
    SUBCASE("offsets summing to zero return to the last pose") {
        Eigen::MatrixX2d step = Eigen::MatrixX2d::Constant(3, 2, 2.5);
        std::vector<Eigen::MatrixX2d> offs = {step, -step, step, -step};
        auto poses = apply_offsets(last, offs);
        CHECK((poses.back() - last).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("dimension mismatch throws") {
        std::vector<Eigen::MatrixX2d> offs(2, Eigen::MatrixX2d::Zero(4, 2));
        CHECK_THROWS_AS(apply_offsets(last, offs), DataError);
    }
}

TEST_CASE("apply_offsets inverts per-frame offset extraction") {
    SkeletonConfig cfg;
    auto seq = testutil::make_drifting_sequence(12, {0.7, -0.3}, cfg);
    Eigen::MatrixX2d last = global_pose_2d(seq.frames[4], cfg);
    std::vector<Eigen::MatrixX2d> offs;
    for (int t = 5; t < 12; ++t)
        offs.push_back(global_pose_2d(seq.frames[t], cfg) - global_pose_2d(seq.frames[t - 1], cfg));
    auto poses = apply_offsets(last, offs);
    for (int k = 0; k < 7; ++k)
        CHECK((poses[k] - global_pose_2d(seq.frames[5 + k], cfg)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("mask_part zero counts and idempotence") {
    SkeletonConfig cfg;
    Frame f = make_frame(2, 250.0, 140.0);
    Frame prev = make_frame(1, 249.0, 139.0);
    Eigen::VectorXd fv = to_features(f, &prev, compute_roots(f, cfg), cfg);
    REQUIRE(fv.cwiseAbs().minCoeff() >= 0.0);

    Eigen::VectorXd masked = mask_part(fv, PartGroup::Face, cfg);
    int changed = 0;
    for (int i = 0; i < fv.size(); ++i)
        if (masked[i] != fv[i]) {
            CHECK(masked[i] == 0.0);
            ++changed;
        }
    // every face slot is nonzero in this frame, so changed slots = face slots
    CHECK(changed == cfg.face_points * 6 + 4);

    CHECK(mask_part(masked, PartGroup::Face, cfg) == masked);

    SUBCASE("masking all parts leaves only gaze slots") {
        Eigen::VectorXd all = mask_part(
            mask_part(mask_part(fv, PartGroup::Face, cfg), PartGroup::Body, cfg), PartGroup::Hands,
            cfg);
        CHECK(all.head(cfg.gaze_offset()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(all.tail(cfg.gaze_vectors * 6).cwiseAbs().sum() > 0.0);
    }
    SUBCASE("masks of distinct parts commute") {
        Eigen::VectorXd ab = mask_part(mask_part(fv, PartGroup::Body, cfg), PartGroup::Hands, cfg);
        Eigen::VectorXd ba = mask_part(mask_part(fv, PartGroup::Hands, cfg), PartGroup::Body, cfg);
        CHECK(ab == ba);
    }
}

TEST_CASE("default feature length is 496") {
    SkeletonConfig cfg;
    CHECK(cfg.total_landmarks() == 78);
    CHECK(cfg.feature_length() == 496);
}

TEST_CASE("sequence validation") {
    SkeletonConfig cfg;
    auto seq = testutil::make_drifting_sequence(5, {0, 0}, cfg);
    CHECK_NOTHROW(validate(seq, cfg));

    SUBCASE("gap in frame indices") {
        seq.frames[3].frame_index = 7;
        CHECK_THROWS_AS(validate(seq, cfg), DataError);
    }
    SUBCASE("quality on absent part") {
        seq.frames[0].landmarks.face.reset();
        CHECK_THROWS_AS(validate(seq, cfg), DataError);
    }
    SUBCASE("wrong point count") {
        seq.frames[0].landmarks.body = Eigen::MatrixX3d::Zero(9, 3);
        CHECK_THROWS_AS(validate(seq, cfg), DataError);
    }
}
