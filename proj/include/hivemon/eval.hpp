#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "hivemon/analytics.hpp"
#include "hivemon/stream_io.hpp"
#include "hivemon/tracker.hpp"

namespace hivemon {

/// Manual count versus algorithm count for one measurement.
struct CountPair {
    long manual_count = 0;
    long algorithm_count = 0;

    bool operator==(const CountPair&) const = default;
};

/// Arriving/leaving count pairs for one annotated video.
struct TrackingVideoCounts {
    int video = 0;
    CountPair arriving;
    CountPair leaving;
};

/// Pollen-model bookkeeping for one annotated video. True positives are
/// derived as manual_pollen - false_neg.
struct PollenVideoCounts {
    int video = 0;
    long manual_pollen = 0;
    long algorithm_pollen = 0;
    long false_pos = 0;
    long false_neg = 0;
    long total_bees = 0;
};

struct PollenMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// |algorithm - manual| / manual. Throws UndefinedMetricError for manual = 0.
double error_rate(const CountPair& pair);

/// 1 - error_rate, clamped at 0 when the error rate exceeds 1.
double accuracy(const CountPair& pair);

/// Mean of the arriving and leaving accuracies.
double video_accuracy(const CountPair& arriving, const CountPair& leaving);

/// Unweighted mean of per-video accuracies, full-precision intermediates.
double average_accuracy(const std::vector<TrackingVideoCounts>& videos);

PollenMetrics pollen_metrics(const PollenVideoCounts& counts);

/// Unweighted means of the full-precision per-video metrics.
PollenMetrics pollen_averages(const std::vector<PollenVideoCounts>& videos);

struct VideoReport {
    int video = 0;
    CountPair arriving;
    CountPair leaving;
    CountPair deck;
    CountPair total;  // arriving + leaving + deck (New excluded)
    double arriving_accuracy = 0.0;
    double leaving_accuracy = 0.0;
    double accuracy = 0.0;
    std::optional<CountPair> pollen;
    std::optional<PollenMetrics> pollen_model;
};

struct MetricsReport {
    std::vector<VideoReport> videos;
    double average_accuracy = 0.0;
    std::optional<PollenMetrics> pollen_averages;
};

/// Score a tracker run against its ground truth as one video. Profiles with
/// final status New are excluded on both sides, matching the annotation
/// convention. When flags are supplied the pollen/mite track counts are
/// reported alongside.
MetricsReport compare_runs(const std::vector<GroundTruthRecord>& truth,
                           const std::vector<TrackProfile>& profiles,
                           const ProfileFlags* flags = nullptr);

/// Score pre-tabulated per-video counts (the CLI's table inputs).
MetricsReport evaluate_tables(const std::vector<TrackingVideoCounts>& tracking,
                              const std::vector<PollenVideoCounts>& pollen = {});

// Table file formats (CSV with header, see docs/formats.md):
//   video,arriving_manual,arriving_algorithm,leaving_manual,leaving_algorithm
//   video,pollen_manual,pollen_algorithm,false_pos,false_neg,total_bees
std::vector<TrackingVideoCounts> parse_tracking_table(std::istream& source);
std::vector<PollenVideoCounts> parse_pollen_table(std::istream& source);

/// Delimited report: one header + one row per video, then average rows.
void write_metrics_report(const MetricsReport& report, std::ostream& sink);

}  // namespace hivemon
