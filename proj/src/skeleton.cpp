#include "dbf/skeleton.hpp"

#include <sstream>

namespace dbf {

namespace {

void check_part(const std::optional<Eigen::MatrixX3d>& part, int expected, bool quality,
                const char* name) {
    if (part) {
        if (part->rows() != expected) {
            std::ostringstream os;
            os << name << " has " << part->rows() << " points, expected " << expected;
            throw DataError(os.str());
        }
        if (!part->allFinite()) throw DataError(std::string(name) + " has non-finite coordinates");
    } else if (quality) {
        throw DataError(std::string("quality flag set for absent part ") + name);
    }
}

}  // namespace

void validate(const Frame& frame, const SkeletonConfig& cfg) {
    if (frame.frame_index < 0) throw DataError("negative frame_index");
    const auto& lm = frame.landmarks;
    check_part(lm.face, cfg.face_points, frame.quality.face, "face");
    check_part(lm.body, cfg.body_points, frame.quality.body, "body");
    check_part(lm.left_hand, cfg.hand_points, frame.quality.left_hand, "left_hand");
    check_part(lm.right_hand, cfg.hand_points, frame.quality.right_hand, "right_hand");
    if (lm.gaze) {
        if (lm.gaze->rows() != cfg.gaze_vectors)
            throw DataError("gaze vector count mismatch");
        if (!lm.gaze->allFinite()) throw DataError("gaze has non-finite components");
    }
}

void validate(const SkeletonSequence& seq, const SkeletonConfig& cfg) {
    if (seq.frames.empty()) throw DataError("empty sequence " + seq.session_id);
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        validate(seq.frames[i], cfg);
        if (i > 0 && seq.frames[i].frame_index != seq.frames[i - 1].frame_index + 1)
            throw DataError("frame_index not strictly increasing by 1 in " + seq.session_id);
    }
}

RootSet compute_roots(const Frame& frame, const SkeletonConfig& cfg) {
    RootSet roots;
    const auto& lm = frame.landmarks;
    if (lm.face) {
        roots.face = 0.5 * (lm.face->row(cfg.eye_center_a) + lm.face->row(cfg.eye_center_b))
                         .transpose();
    }
    if (lm.body) roots.body = lm.body->row(cfg.chest_index).transpose();
    if (lm.left_hand) roots.left_hand = lm.left_hand->row(cfg.knuckle_index).transpose();
    if (lm.right_hand) roots.right_hand = lm.right_hand->row(cfg.knuckle_index).transpose();
    return roots;
}

namespace {

// Writes one part's relative coords and offsets into the feature vector.
void fill_part(Eigen::VectorXd& fv, const SkeletonConfig& cfg, int lm_begin,
               const std::optional<Eigen::MatrixX3d>& cur,
               const std::optional<Eigen::MatrixX3d>& prev,
               const std::optional<Eigen::Vector3d>& root) {
    if (!cur) return;  // slots stay zero
    const int n = static_cast<int>(cur->rows());
    for (int i = 0; i < n; ++i) {
        const int l = lm_begin + i;
        fv.segment<3>(cfg.rel_offset() + 3 * l) = cur->row(i).transpose() - *root;
        if (prev) fv.segment<3>(cfg.off_offset() + 3 * l) = (cur->row(i) - prev->row(i)).transpose();
    }
}

void fill_root(Eigen::VectorXd& fv, const SkeletonConfig& cfg, int slot,
               const std::optional<Eigen::Vector3d>& cur, const std::optional<Eigen::Vector3d>& prev) {
    if (!cur) return;
    const int base = cfg.root_offset() + 4 * slot;
    fv[base] = (*cur)[0];
    fv[base + 1] = (*cur)[1];
    if (prev) {
        fv[base + 2] = (*cur)[0] - (*prev)[0];
        fv[base + 3] = (*cur)[1] - (*prev)[1];
    }
}

}  // namespace

Eigen::VectorXd to_features(const Frame& frame, const Frame* prev, const RootSet& roots,
                            const SkeletonConfig& cfg) {
    Eigen::VectorXd fv = Eigen::VectorXd::Zero(cfg.feature_length());
    const auto& lm = frame.landmarks;
    const LandmarkSet* plm = prev ? &prev->landmarks : nullptr;

    auto prev_part = [&](const std::optional<Eigen::MatrixX3d> LandmarkSet::*member)
        -> const std::optional<Eigen::MatrixX3d>& {
        static const std::optional<Eigen::MatrixX3d> none;
        return plm ? plm->*member : none;
    };

    fill_part(fv, cfg, cfg.face_begin(), lm.face, prev_part(&LandmarkSet::face), roots.face);
    fill_part(fv, cfg, cfg.body_begin(), lm.body, prev_part(&LandmarkSet::body), roots.body);
    fill_part(fv, cfg, cfg.left_hand_begin(), lm.left_hand, prev_part(&LandmarkSet::left_hand),
              roots.left_hand);
    fill_part(fv, cfg, cfg.right_hand_begin(), lm.right_hand, prev_part(&LandmarkSet::right_hand),
              roots.right_hand);

    RootSet prev_roots;
    if (prev) prev_roots = compute_roots(*prev, cfg);
    fill_root(fv, cfg, 0, roots.face, prev_roots.face);
    fill_root(fv, cfg, 1, roots.body, prev_roots.body);
    fill_root(fv, cfg, 2, roots.left_hand, prev_roots.left_hand);
    fill_root(fv, cfg, 3, roots.right_hand, prev_roots.right_hand);

    if (lm.gaze) {
        const auto& prev_gaze = prev_part(&LandmarkSet::gaze);
        for (int g = 0; g < cfg.gaze_vectors; ++g) {
            const int base = cfg.gaze_offset() + 6 * g;
            fv.segment<3>(base) = lm.gaze->row(g).transpose();
            if (prev_gaze)
                fv.segment<3>(base + 3) = (lm.gaze->row(g) - prev_gaze->row(g)).transpose();
        }
    }
    return fv;
}

std::vector<Eigen::MatrixX2d> apply_offsets(const Eigen::MatrixX2d& last_pose_2d,
                                            const std::vector<Eigen::MatrixX2d>& offsets) {
    if (offsets.empty()) throw DataError("apply_offsets: empty offset sequence");
    std::vector<Eigen::MatrixX2d> poses;
    poses.reserve(offsets.size());
    Eigen::MatrixX2d cur = last_pose_2d;
    for (const auto& off : offsets) {
        if (off.rows() != last_pose_2d.rows())
            throw DataError("apply_offsets: offset row count mismatch");
        cur += off;
        poses.push_back(cur);
    }
    return poses;
}

std::vector<std::pair<int, int>> part_landmark_ranges(PartGroup part, const SkeletonConfig& cfg) {
    switch (part) {
        case PartGroup::Face:
            return {{cfg.face_begin(), cfg.face_begin() + cfg.face_points}};
        case PartGroup::Body:
            return {{cfg.body_begin(), cfg.body_begin() + cfg.body_points}};
        case PartGroup::Hands:
            return {{cfg.left_hand_begin(), cfg.left_hand_begin() + cfg.hand_points},
                    {cfg.right_hand_begin(), cfg.right_hand_begin() + cfg.hand_points}};
    }
    throw DataError("unknown part group");
}

Eigen::VectorXd mask_part(const Eigen::VectorXd& fv, PartGroup part, const SkeletonConfig& cfg) {
    Eigen::VectorXd out = fv;
    for (auto [lo, hi] : part_landmark_ranges(part, cfg)) {
        out.segment(cfg.rel_offset() + 3 * lo, 3 * (hi - lo)).setZero();
        out.segment(cfg.off_offset() + 3 * lo, 3 * (hi - lo)).setZero();
    }
    switch (part) {
        case PartGroup::Face: out.segment(cfg.root_offset() + 0, 4).setZero(); break;
        case PartGroup::Body: out.segment(cfg.root_offset() + 4, 4).setZero(); break;
        case PartGroup::Hands: out.segment(cfg.root_offset() + 8, 8).setZero(); break;
    }
    return out;
}

Eigen::MatrixX2d global_pose_2d(const Frame& frame, const SkeletonConfig& cfg) {
    Eigen::MatrixX2d pose = Eigen::MatrixX2d::Zero(cfg.total_landmarks(), 2);
    const auto& lm = frame.landmarks;
    auto put = [&](const std::optional<Eigen::MatrixX3d>& part, int begin) {
        if (part) pose.middleRows(begin, part->rows()) = part->leftCols<2>();
    };
    put(lm.face, cfg.face_begin());
    put(lm.body, cfg.body_begin());
    put(lm.left_hand, cfg.left_hand_begin());
    put(lm.right_hand, cfg.right_hand_begin());
    return pose;
}

namespace {

Eigen::Array<bool, Eigen::Dynamic, 1> expand_flags(const SkeletonConfig& cfg, bool face,
                                                   bool body, bool lh, bool rh) {
    Eigen::Array<bool, Eigen::Dynamic, 1> v(cfg.total_landmarks());
    v.segment(cfg.face_begin(), cfg.face_points).setConstant(face);
    v.segment(cfg.body_begin(), cfg.body_points).setConstant(body);
    v.segment(cfg.left_hand_begin(), cfg.hand_points).setConstant(lh);
    v.segment(cfg.right_hand_begin(), cfg.hand_points).setConstant(rh);
    return v;
}

}  // namespace

Eigen::Array<bool, Eigen::Dynamic, 1> landmark_presence(const Frame& frame,
                                                        const SkeletonConfig& cfg) {
    const auto& lm = frame.landmarks;
    return expand_flags(cfg, lm.face.has_value(), lm.body.has_value(), lm.left_hand.has_value(),
                        lm.right_hand.has_value());
}

Eigen::Array<bool, Eigen::Dynamic, 1> landmark_validity(const Frame& frame,
                                                        const SkeletonConfig& cfg) {
    const auto& lm = frame.landmarks;
    const auto& q = frame.quality;
    return expand_flags(cfg, lm.face.has_value() && q.face, lm.body.has_value() && q.body,
                        lm.left_hand.has_value() && q.left_hand,
                        lm.right_hand.has_value() && q.right_hand);
}

FeatureWindow featurize_window(const SkeletonSequence& seq, int first, int count,
                               const SkeletonConfig& cfg) {
    if (first < 0 || first + count > static_cast<int>(seq.frames.size()))
        throw DataError("featurize_window: range out of bounds");
    FeatureWindow w;
    w.features.resize(count, cfg.feature_length());
    w.valid.resize(count, cfg.total_landmarks());
    for (int t = 0; t < count; ++t) {
        const Frame& f = seq.frames[first + t];
        const Frame* prev = (first + t > 0) ? &seq.frames[first + t - 1] : nullptr;
        w.features.row(t) = to_features(f, prev, compute_roots(f, cfg), cfg).transpose();
        w.valid.row(t) = landmark_validity(f, cfg).transpose();
    }
    return w;
}

}  // namespace dbf
