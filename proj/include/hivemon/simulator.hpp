#pragma once

#include <cstdint>
#include <vector>

#include "hivemon/analytics.hpp"
#include "hivemon/geometry.hpp"
#include "hivemon/stream_io.hpp"
#include "hivemon/tracker.hpp"

namespace hivemon {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// Where a synthetic bee enters the frame (weights, normalized internally).
struct SpawnModel {
    double top = 0.4;     // from the hive interior (top edge)
    double bottom = 0.4;  // from outside (bottom edge)
    double deck = 0.2;    // appears mid-frame on the deck
};

struct SimConfig {
    HiveGeometry geom;
    double fps = 10.0;
    double duration_s = 60.0;
    int bee_count = 12;
    Range speed_px_per_frame{4.0, 12.0};
    SpawnModel spawn;
    double jitter_px = 0.0;      // std-dev of detection position noise
    double dropout_prob = 0.0;   // per-frame chance a visible bee goes undetected
    Range worker_len_px{70.0, 84.0};  // body length modes, longest box side in px
    Range drone_len_px{97.0, 110.0};
    double drone_fraction = 0.2;
    // When positive, bees are scheduled into x-corridors so any two
    // concurrently visible bees keep at least this midpoint separation.
    double min_separation_px = 0.0;
    std::uint64_t seed = 0;
};

void validate(const SimConfig& config);

struct SimOutput {
    std::vector<FrameDetections> stream;
    std::vector<GroundTruthRecord> truth;
};

/// Per-frame detection with its originating bee, for identity-level checks.
struct SimFrameBox {
    std::int64_t bee_id = 0;
    DetectionBox box;
};

struct DetailedSimOutput {
    std::vector<std::vector<SimFrameBox>> frames;  // index = frame number
    std::vector<GroundTruthRecord> truth;
};

/// Deterministic for a given config+seed. Bee ids are assigned in order of
/// first visibility, matching the tracker's profile-creation order on a
/// clean stream. Truth statuses are derived from the noise-free midpoint
/// path with the same crossing semantics the tracker uses.
SimOutput generate(const SimConfig& config);
DetailedSimOutput generate_detailed(const SimConfig& config);

/// Bucket ground truth records the same way summarize_video buckets profiles.
VideoSummary truth_summary(const std::vector<GroundTruthRecord>& truth);

}  // namespace hivemon
