#include "hivemon/analytics.hpp"

#include <set>
#include <string>
#include <unordered_map>

#include "hivemon/errors.hpp"

namespace hivemon {

ProfileFlags associate_secondary(const std::vector<TrackProfile>& profiles,
                                 const std::vector<SecondaryDetection>& detections,
                                 const SecondaryThresholds& thresholds) {
    std::unordered_map<std::int64_t, std::set<std::int64_t>> snapshot_frames;
    ProfileFlags flags;
    for (const TrackProfile& profile : profiles) {
        auto& frames = snapshot_frames[profile.id];
        for (const SnapshotRef& snap : profile.snapshots) {
            frames.insert(snap.frame_index);
        }
        flags.emplace(profile.id, PresenceFlags{});
    }

    for (const SecondaryDetection& det : detections) {
        const auto it = snapshot_frames.find(det.profile_id);
        if (it == snapshot_frames.end() || it->second.count(det.frame_index) == 0) {
            throw AssociationError("secondary detection references unknown snapshot: profile " +
                                   std::to_string(det.profile_id) + ", frame " +
                                   std::to_string(det.frame_index));
        }
        PresenceFlags& f = flags.at(det.profile_id);
        if (det.cls == SecondaryClass::Pollen && det.confidence >= thresholds.pollen) {
            f.pollen = true;
        } else if (det.cls == SecondaryClass::Mite && det.confidence >= thresholds.mite) {
            f.mite = true;
        }
    }
    return flags;
}

VideoSummary summarize_video(const std::vector<TrackProfile>& profiles,
                             const ProfileFlags& flags) {
    VideoSummary summary;
    double size_sum = 0.0;
    long sized = 0;
    for (const TrackProfile& profile : profiles) {
        switch (profile.status) {
            case TrackStatus::Arriving: ++summary.arriving; break;
            case TrackStatus::Leaving: ++summary.leaving; break;
            case TrackStatus::Deck: ++summary.deck; break;
            case TrackStatus::New: ++summary.new_count; break;
        }
        if (profile.size_mm) {
            size_sum += *profile.size_mm;
            ++sized;
        }
        const auto it = flags.find(profile.id);
        if (it != flags.end()) {
            if (it->second.pollen) ++summary.pollen_tracks;
            if (it->second.mite) ++summary.mite_tracks;
        }
    }
    summary.total_tracks = static_cast<long>(profiles.size());
    if (sized > 0) {
        summary.mean_size_mm = size_sum / static_cast<double>(sized);
    }
    return summary;
}

}  // namespace hivemon
