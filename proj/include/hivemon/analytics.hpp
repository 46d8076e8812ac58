#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hivemon/stream_io.hpp"
#include "hivemon/tracker.hpp"

namespace hivemon {

/// Minimum confidence for a secondary detection to count, per class.
struct SecondaryThresholds {
    double pollen = 0.25;
    double mite = 0.25;
};

struct PresenceFlags {
    bool pollen = false;
    bool mite = false;

    bool operator==(const PresenceFlags&) const = default;
};

using ProfileFlags = std::map<std::int64_t, PresenceFlags>;

/// Per-video aggregate: the numbers a hive uploads every cycle.
struct VideoSummary {
    long arriving = 0;
    long leaving = 0;
    long deck = 0;
    long new_count = 0;
    long pollen_tracks = 0;
    long mite_tracks = 0;
    std::optional<double> mean_size_mm;
    long total_tracks = 0;

    bool operator==(const VideoSummary&) const = default;
};

/// Flag each profile that has at least one snapshot with a detection of the
/// class at or above its threshold. Every profile gets an entry. Detections
/// referencing a snapshot that does not exist raise AssociationError.
ProfileFlags associate_secondary(const std::vector<TrackProfile>& profiles,
                                 const std::vector<SecondaryDetection>& detections,
                                 const SecondaryThresholds& thresholds = {});

/// Bucket finalized profiles by final status, average the sizes that were
/// extracted, and count pollen/mite tracks from `flags`.
VideoSummary summarize_video(const std::vector<TrackProfile>& profiles,
                             const ProfileFlags& flags = {});

}  // namespace hivemon
