#include "dbf/metrics.hpp"

#include <cstdio>
#include <ostream>

namespace dbf {

namespace {

void check_shapes(const Prediction2D& pred, const Prediction2D& gt) {
    if (pred.horizon() != gt.horizon() || pred.landmarks() != gt.landmarks())
        throw DataError("metrics: prediction/ground-truth shape mismatch");
}

void check_range(FrameRange r, int horizon) {
    if (r.first < 1 || r.last > horizon || r.first > r.last)
        throw DataError("metrics: frame range outside horizon");
}

std::optional<FrameRange> clamp_range(FrameRange r, int horizon) {
    r.last = std::min(r.last, horizon);
    if (r.first > r.last) return std::nullopt;
    return r;
}

using LandmarkRanges = std::vector<std::pair<int, int>>;

MetricAccum mpjpe_accum(const Prediction2D& pred, const Prediction2D& gt, FrameRange range,
                        const LandmarkRanges& lms) {
    MetricAccum acc;
    for (int k = range.first; k <= range.last; ++k) {
        const auto& p = pred.poses[k - 1];
        const auto& g = gt.poses[k - 1];
        for (auto [lo, hi] : lms)
            for (int l = lo; l < hi; ++l)
                if (gt.valid(k - 1, l)) acc.add((p.row(l) - g.row(l)).norm());
    }
    return acc;
}

MetricAccum divergence_accum(const Prediction2D& seq, const Eigen::MatrixX2d& last_obs_pose,
                             const Eigen::Array<bool, Eigen::Dynamic, 1>& last_obs_valid,
                             FrameRange range, const LandmarkRanges& lms) {
    MetricAccum acc;
    for (int k = range.first; k <= range.last; ++k) {
        const auto& cur = seq.poses[k - 1];
        const auto& prev = (k == 1) ? last_obs_pose : seq.poses[k - 2];
        for (auto [lo, hi] : lms) {
            for (int l = lo; l < hi; ++l) {
                const bool prev_ok = (k == 1) ? last_obs_valid[l] : seq.valid(k - 2, l);
                if (seq.valid(k - 1, l) && prev_ok) acc.add((cur.row(l) - prev.row(l)).norm());
            }
        }
    }
    return acc;
}

LandmarkRanges all_landmarks(const Prediction2D& any) {
    return {{0, any.landmarks()}};
}

}  // namespace

double mpjpe(const Prediction2D& pred, const Prediction2D& gt, FrameRange range) {
    check_shapes(pred, gt);
    check_range(range, pred.horizon());
    return mpjpe_accum(pred, gt, range, all_landmarks(pred)).value();
}

double fde(const Prediction2D& pred, const Prediction2D& gt) {
    check_shapes(pred, gt);
    const int h = pred.horizon();
    return mpjpe(pred, gt, {h, h});
}

double divergence(const Prediction2D& seq, const Eigen::MatrixX2d& last_obs_pose,
                  const Eigen::Array<bool, Eigen::Dynamic, 1>& last_obs_valid, FrameRange range) {
    if (seq.horizon() < 1) throw DataError("divergence: empty sequence");
    check_range(range, seq.horizon());
    if (last_obs_pose.rows() != seq.landmarks())
        throw DataError("divergence: last observed pose shape mismatch");
    return divergence_accum(seq, last_obs_pose, last_obs_valid, range, all_landmarks(seq)).value();
}

void MetricsSet::merge(const MetricsSet& o) {
    mpjpe.merge(o.mpjpe);
    st.merge(o.st);
    mt.merge(o.mt);
    lt.merge(o.lt);
    fde.merge(o.fde);
    div.merge(o.div);
    div_st.merge(o.div_st);
    div_mt.merge(o.div_mt);
    div_lt.merge(o.div_lt);
}

void MetricsReport::merge(const MetricsReport& o) {
    overall.merge(o.overall);
    face.merge(o.face);
    body.merge(o.body);
    hands.merge(o.hands);
}

namespace {

MetricsSet metrics_for(const Prediction2D& pred, const Prediction2D& gt,
                       const Eigen::MatrixX2d& last_obs_pose,
                       const Eigen::Array<bool, Eigen::Dynamic, 1>& last_obs_valid,
                       const LandmarkRanges& lms) {
    MetricsSet m;
    const int h = pred.horizon();
    m.mpjpe = mpjpe_accum(pred, gt, {1, h}, lms);
    m.fde = mpjpe_accum(pred, gt, {h, h}, lms);
    m.div = divergence_accum(pred, last_obs_pose, last_obs_valid, {1, h}, lms);
    const std::pair<FrameRange, MetricAccum MetricsSet::*> subs[] = {
        {kShortTerm, &MetricsSet::st}, {kMidTerm, &MetricsSet::mt}, {kLongTerm, &MetricsSet::lt}};
    const std::pair<FrameRange, MetricAccum MetricsSet::*> dsubs[] = {{kShortTerm, &MetricsSet::div_st},
                                                                      {kMidTerm, &MetricsSet::div_mt},
                                                                      {kLongTerm, &MetricsSet::div_lt}};
    for (auto [r, field] : subs)
        if (auto c = clamp_range(r, h)) m.*field = mpjpe_accum(pred, gt, *c, lms);
    for (auto [r, field] : dsubs)
        if (auto c = clamp_range(r, h))
            m.*field = divergence_accum(pred, last_obs_pose, last_obs_valid, *c, lms);
    return m;
}

}  // namespace

MetricsReport report(const Prediction2D& pred, const Prediction2D& gt,
                     const Eigen::MatrixX2d& last_obs_pose,
                     const Eigen::Array<bool, Eigen::Dynamic, 1>& last_obs_valid,
                     const SkeletonConfig& cfg) {
    check_shapes(pred, gt);
    if (pred.landmarks() != cfg.total_landmarks())
        throw DataError("report: landmark count does not match configuration");
    MetricsReport r;
    r.overall = metrics_for(pred, gt, last_obs_pose, last_obs_valid, all_landmarks(pred));
    r.face = metrics_for(pred, gt, last_obs_pose, last_obs_valid,
                         part_landmark_ranges(PartGroup::Face, cfg));
    r.body = metrics_for(pred, gt, last_obs_pose, last_obs_valid,
                         part_landmark_ranges(PartGroup::Body, cfg));
    r.hands = metrics_for(pred, gt, last_obs_pose, last_obs_valid,
                          part_landmark_ranges(PartGroup::Hands, cfg));
    return r;
}

namespace {

const char* kMetricNames[] = {"mpjpe", "st", "mt", "lt", "fde", "div", "div_st", "div_mt", "div_lt"};

void write_set_values(std::ostream& os, const MetricsSet& s) {
    const MetricAccum* fields[] = {&s.mpjpe, &s.st, &s.mt, &s.lt, &s.fde,
                                   &s.div, &s.div_st, &s.div_mt, &s.div_lt};
    char buf[64];
    for (const MetricAccum* f : fields) {
        if (f->has()) {
            std::snprintf(buf, sizeof(buf), "%.9g", f->value());
            os << ',' << buf;
        } else {
            os << ",nan";
        }
    }
}

}  // namespace

void write_metrics_csv_header(std::ostream& os) {
    os << "model";
    const char* suffixes[] = {"", "_face", "_body", "_hands"};
    for (const char* suf : suffixes)
        for (const char* name : kMetricNames) os << ',' << name << suf;
    os << '\n';
}

void write_metrics_csv_row(std::ostream& os, const std::string& model, const MetricsReport& r) {
    os << model;
    write_set_values(os, r.overall);
    write_set_values(os, r.face);
    write_set_values(os, r.body);
    write_set_values(os, r.hands);
    os << '\n';
}

}  // namespace dbf
