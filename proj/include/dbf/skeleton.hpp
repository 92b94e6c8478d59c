#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "dbf/common.hpp"

namespace dbf {

// Landmark conventions. The dataset never enumerates landmark order, so the
// indices anchoring each part root are configuration with these defaults.
struct SkeletonConfig {
    int face_points = 28;
    int body_points = 10;
    int hand_points = 20;
    int gaze_vectors = 2;  // one 3-vector per eye

    int eye_center_a = 0;  // face indices averaged into the face root
    int eye_center_b = 1;
    int chest_index = 0;    // body root
    int knuckle_index = 0;  // per-hand root (middle knuckles)

    int total_landmarks() const { return face_points + body_points + 2 * hand_points; }

    // Feature vector layout, in order:
    //   [0]              per-landmark root-relative 3D coords   (L*3)
    //   [rel + L*3]      per-landmark 3D offsets vs prev frame  (L*3)
    //   [roots]          4 roots x (x, y, dx, dy)               (16)
    //   [gaze]           G x (x, y, z, dx, dy, dz)              (G*6)
    int rel_offset() const { return 0; }
    int off_offset() const { return total_landmarks() * 3; }
    int root_offset() const { return total_landmarks() * 6; }
    int gaze_offset() const { return root_offset() + 16; }
    int feature_length() const { return gaze_offset() + gaze_vectors * 6; }

    // Landmark index ranges within the flat 0..77 ordering.
    int face_begin() const { return 0; }
    int body_begin() const { return face_points; }
    int left_hand_begin() const { return face_points + body_points; }
    int right_hand_begin() const { return left_hand_begin() + hand_points; }
};

enum class BodyPart { Face, Body, LeftHand, RightHand };
// Masking and per-part metrics treat the two hands as one group.
enum class PartGroup { Face, Body, Hands };

// Per-part landmark matrices; absent part = not detected / hidden.
struct LandmarkSet {
    std::optional<Eigen::MatrixX3d> face;        // 28 x 3
    std::optional<Eigen::MatrixX3d> body;        // 10 x 3
    std::optional<Eigen::MatrixX3d> left_hand;   // 20 x 3
    std::optional<Eigen::MatrixX3d> right_hand;  // 20 x 3
    std::optional<Eigen::MatrixX3d> gaze;        // G x 3 direction vectors
};

struct PartQuality {
    bool face = false;
    bool body = false;
    bool left_hand = false;
    bool right_hand = false;
};

struct Frame {
    long frame_index = 0;
    LandmarkSet landmarks;
    PartQuality quality;  // true only for present, correctly annotated parts
};

// Ordered frames at 25 fps for one participant of one session.
struct SkeletonSequence {
    std::string session_id;
    std::string participant_id;
    std::vector<Frame> frames;
};

// Validates part point counts, gaze finiteness, quality-implies-presence and
// the strictly increasing frame index. Throws DataError on violation.
void validate(const SkeletonSequence& seq, const SkeletonConfig& cfg);
void validate(const Frame& frame, const SkeletonConfig& cfg);

struct RootSet {
    std::optional<Eigen::Vector3d> face;
    std::optional<Eigen::Vector3d> body;
    std::optional<Eigen::Vector3d> left_hand;
    std::optional<Eigen::Vector3d> right_hand;
};

// Part roots: eye-center midpoint, chest joint, per-hand middle knuckle.
// A root exists iff its part is present.
RootSet compute_roots(const Frame& frame, const SkeletonConfig& cfg);

// One model-ready frame: root-relative coords, offsets, global roots, gaze.
// Absent parts occupy zero-filled slots; offsets are zero when there is no
// predecessor or when either frame misses the part.
Eigen::VectorXd to_features(const Frame& frame, const Frame* prev, const RootSet& roots,
                            const SkeletonConfig& cfg);

// Cumulative-sum reconstruction: pose(k) = last_pose + sum_{j<=k} offsets(j).
// offsets[k] is L x 2. Throws DataError on dimension mismatch.
std::vector<Eigen::MatrixX2d> apply_offsets(const Eigen::MatrixX2d& last_pose_2d,
                                            const std::vector<Eigen::MatrixX2d>& offsets);

// Zeroes all slots of the named part group: landmark coords + offsets and the
// part's root slots. Gaze is untouched.
Eigen::VectorXd mask_part(const Eigen::VectorXd& fv, PartGroup part, const SkeletonConfig& cfg);

// Flat landmark index ranges [begin, end) covered by a part group.
std::vector<std::pair<int, int>> part_landmark_ranges(PartGroup part, const SkeletonConfig& cfg);

// Global 2D landmark positions of a frame, L x 2; rows of absent parts are 0.
Eigen::MatrixX2d global_pose_2d(const Frame& frame, const SkeletonConfig& cfg);

// Per-landmark presence (part detected) and validity (present and quality-ok).
Eigen::Array<bool, Eigen::Dynamic, 1> landmark_presence(const Frame& frame, const SkeletonConfig& cfg);
Eigen::Array<bool, Eigen::Dynamic, 1> landmark_validity(const Frame& frame, const SkeletonConfig& cfg);

// Observation window of featurized frames.
struct FeatureWindow {
    Eigen::MatrixXd features;                                  // T_obs x feature_length
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> valid;  // T_obs x L
};

// Featurizes frames[first, first+count); the frame before `first` (if any)
// supplies the offsets of the first row.
FeatureWindow featurize_window(const SkeletonSequence& seq, int first, int count,
                               const SkeletonConfig& cfg);

}  // namespace dbf
