#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "dbf/prediction.hpp"
#include "dbf/skeleton.hpp"

namespace dbf {

// 1-based inclusive frame interval within the prediction horizon
// ("frames 1-10" = {1, 10}).
struct FrameRange {
    int first = 1;
    int last = 1;
};

// Running (sum, count) pair; metric value = sum / count. Merging accumulators
// across segments gives exactly the valid-count-weighted mean.
struct MetricAccum {
    double sum = 0.0;
    long count = 0;

    bool has() const { return count > 0; }
    double value() const {
        if (!has()) throw NoDataError("metric requested over zero valid entries");
        return sum / static_cast<double>(count);
    }
    std::optional<double> maybe() const {
        return has() ? std::optional<double>(sum / static_cast<double>(count)) : std::nullopt;
    }
    void add(double v) {
        sum += v;
        ++count;
    }
    void merge(const MetricAccum& o) {
        sum += o.sum;
        count += o.count;
    }
};

// Mean L2 distance over (frame, landmark) pairs in `range` where the ground
// truth is valid. Throws NoDataError when no valid pair exists.
double mpjpe(const Prediction2D& pred, const Prediction2D& gt, FrameRange range);

// MPJPE restricted to the last predicted frame.
double fde(const Prediction2D& pred, const Prediction2D& gt);

// Mean per-frame, per-landmark displacement |pose(k) - pose(k-1)| within the
// sequence; frame 1 compares against the last observed pose. Validity comes
// from the sequence itself (both endpoints of each step must be valid).
double divergence(const Prediction2D& seq, const Eigen::MatrixX2d& last_obs_pose,
                  const Eigen::Array<bool, Eigen::Dynamic, 1>& last_obs_valid, FrameRange range);

// All nine metrics for one landmark set. Sub-window ranges are clamped to the
// horizon; empty intersections leave the accumulator empty (no-data).
struct MetricsSet {
    MetricAccum mpjpe, st, mt, lt, fde, div, div_st, div_mt, div_lt;
    void merge(const MetricsSet& o);
};

// Overall plus per-part breakdowns as in the evaluation tables.
struct MetricsReport {
    MetricsSet overall, face, body, hands;
    void merge(const MetricsReport& o);
};

// Sub-window boundaries (frames, 1-based): ST 1-10, MT 11-25, LT 26-50.
inline constexpr FrameRange kShortTerm{1, 10};
inline constexpr FrameRange kMidTerm{11, 25};
inline constexpr FrameRange kLongTerm{26, 50};

MetricsReport report(const Prediction2D& pred, const Prediction2D& gt,
                     const Eigen::MatrixX2d& last_obs_pose,
                     const Eigen::Array<bool, Eigen::Dynamic, 1>& last_obs_valid,
                     const SkeletonConfig& cfg);

// CSV export. Header:
//   model,mpjpe,st,mt,lt,fde,div,div_st,div_mt,div_lt,
//   <same nine>_face,<same nine>_body,<same nine>_hands
// No-data fields are written as "nan".
void write_metrics_csv_header(std::ostream& os);
void write_metrics_csv_row(std::ostream& os, const std::string& model, const MetricsReport& r);

}  // namespace dbf
