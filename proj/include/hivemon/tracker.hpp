#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hivemon/geometry.hpp"

namespace hivemon {

enum class TrackStatus { New, Arriving, Leaving, Deck };

std::string_view to_string(TrackStatus status);
TrackStatus track_status_from_string(std::string_view token);  // throws FormatError

/// Status a profile takes after a (non-None) crossing event.
TrackStatus status_after(CrossingEvent event);

/// Box captured at a trigger crossing; the unit secondary detection runs on.
struct SnapshotRef {
    std::int64_t frame_index = 0;
    DetectionBox box;
    CrossingEvent crossing = CrossingEvent::None;

    bool operator==(const SnapshotRef&) const = default;
};

/// One tracked bee. size_mm stays empty until the first trigger crossing
/// and never changes once set.
struct TrackProfile {
    std::int64_t id = 0;
    Midpoint last_midpoint;
    TrackStatus status = TrackStatus::New;
    std::optional<double> size_mm;
    std::int64_t first_frame = 0;
    std::int64_t last_frame = 0;
    std::vector<SnapshotRef> snapshots;

    bool operator==(const TrackProfile&) const = default;
};

/// Per-frame detector output.
struct FrameDetections {
    std::int64_t frame_index = 0;
    std::vector<DetectionBox> boxes;

    bool operator==(const FrameDetections&) const = default;
};

struct MatchResult {
    std::vector<std::pair<std::int64_t, std::size_t>> assignments;  // (profile id, detection index)
    std::vector<std::int64_t> unmatched_prev;
    std::vector<std::size_t> unmatched_cur;
};

/// Globally greedy nearest-neighbor association. All (prev, cur) pairs
/// within `tolerance` are sorted by ascending distance (ties: lower profile
/// id, then lower detection index) and assigned first-come-first-served.
MatchResult match_detections(const std::vector<std::pair<std::int64_t, Midpoint>>& prev,
                             const std::vector<Midpoint>& cur,
                             double tolerance);

struct StepEvent {
    std::int64_t id = 0;
    CrossingEvent crossing = CrossingEvent::None;

    bool operator==(const StepEvent&) const = default;
};

/// Frame-by-frame profile manager. Single writer per stream: apply step()
/// sequentially, then finalize(). Distinct streams can run in parallel on
/// distinct Tracker instances.
class Tracker {
public:
    explicit Tracker(HiveGeometry geom);

    /// Consume one frame of detections. Frame indices must be strictly
    /// increasing. Returns the crossing events that fired.
    std::vector<StepEvent> step(const FrameDetections& frame);

    /// Retire every remaining active profile and return all profiles ever
    /// created, ordered by id. The tracker no longer accepts frames.
    std::vector<TrackProfile> finalize();

    const std::vector<TrackProfile>& active() const { return active_; }
    const std::vector<TrackProfile>& retired() const { return retired_; }
    const HiveGeometry& geometry() const { return geom_; }
    std::int64_t next_id() const { return next_id_; }

private:
    HiveGeometry geom_;
    std::vector<TrackProfile> active_;
    std::vector<TrackProfile> retired_;
    std::int64_t next_id_ = 1;
    std::optional<std::int64_t> last_frame_index_;
    bool finalized_ = false;
};

}  // namespace hivemon
