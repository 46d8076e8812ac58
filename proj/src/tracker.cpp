#include "hivemon/tracker.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "hivemon/errors.hpp"

namespace hivemon {

std::string_view to_string(TrackStatus status) {
    switch (status) {
        case TrackStatus::New: return "New";
        case TrackStatus::Arriving: return "Arriving";
        case TrackStatus::Leaving: return "Leaving";
        case TrackStatus::Deck: return "Deck";
    }
    return "New";
}

TrackStatus track_status_from_string(std::string_view token) {
    if (token == "New") return TrackStatus::New;
    if (token == "Arriving") return TrackStatus::Arriving;
    if (token == "Leaving") return TrackStatus::Leaving;
    if (token == "Deck") return TrackStatus::Deck;
    throw FormatError("unknown track status '" + std::string(token) + "'");
}

TrackStatus status_after(CrossingEvent event) {
    switch (event) {
        case CrossingEvent::ArriveCross: return TrackStatus::Arriving;
        case CrossingEvent::LeaveCross: return TrackStatus::Leaving;
        case CrossingEvent::DeckCrossFromArrive:
        case CrossingEvent::DeckCrossFromLeave: return TrackStatus::Deck;
        case CrossingEvent::None: break;
    }
    throw ValidationError("status_after requires a non-None crossing event");
}

MatchResult match_detections(const std::vector<std::pair<std::int64_t, Midpoint>>& prev,
                             const std::vector<Midpoint>& cur,
                             double tolerance) {
    if (!(tolerance > 0.0)) {
        throw ValidationError("match tolerance must be positive");
    }

    struct Candidate {
        double dist2;
        std::int64_t prev_id;
        std::size_t prev_pos;
        std::size_t cur_index;
    };

    const double tol2 = tolerance * tolerance;
    std::vector<Candidate> candidates;
    candidates.reserve(prev.size());
    for (std::size_t i = 0; i < prev.size(); ++i) {
        for (std::size_t j = 0; j < cur.size(); ++j) {
            const double dx = prev[i].second.x - cur[j].x;
            const double dy = prev[i].second.y - cur[j].y;
            const double d2 = dx * dx + dy * dy;
            if (d2 <= tol2) {
                candidates.push_back({d2, prev[i].first, i, j});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
        if (a.prev_id != b.prev_id) return a.prev_id < b.prev_id;
        return a.cur_index < b.cur_index;
    });

    MatchResult result;
    std::vector<char> prev_taken(prev.size(), 0);
    std::vector<char> cur_taken(cur.size(), 0);
    for (const Candidate& c : candidates) {
        if (prev_taken[c.prev_pos] || cur_taken[c.cur_index]) continue;
        prev_taken[c.prev_pos] = 1;
        cur_taken[c.cur_index] = 1;
        result.assignments.emplace_back(c.prev_id, c.cur_index);
    }
    for (std::size_t i = 0; i < prev.size(); ++i) {
        if (!prev_taken[i]) result.unmatched_prev.push_back(prev[i].first);
    }
    for (std::size_t j = 0; j < cur.size(); ++j) {
        if (!cur_taken[j]) result.unmatched_cur.push_back(j);
    }
    return result;
}

Tracker::Tracker(HiveGeometry geom) : geom_(geom) {
    validate(geom_);
}

std::vector<StepEvent> Tracker::step(const FrameDetections& frame) {
    if (finalized_) {
        throw ValidationError("tracker is finalized; no further frames accepted");
    }
    if (last_frame_index_ && frame.frame_index <= *last_frame_index_) {
        throw ValidationError("out-of-order frame index " + std::to_string(frame.frame_index) +
                              " after " + std::to_string(*last_frame_index_));
    }

    std::vector<Midpoint> cur;
    cur.reserve(frame.boxes.size());
    for (const DetectionBox& box : frame.boxes) {
        cur.push_back(midpoint(box));  // validates the box
    }

    std::vector<std::pair<std::int64_t, Midpoint>> prev;
    prev.reserve(active_.size());
    std::unordered_map<std::int64_t, std::size_t> by_id;
    for (std::size_t i = 0; i < active_.size(); ++i) {
        prev.emplace_back(active_[i].id, active_[i].last_midpoint);
        by_id.emplace(active_[i].id, i);
    }

    const MatchResult matched = match_detections(prev, cur, geom_.match_tolerance);

    std::vector<StepEvent> events;
    for (const auto& [id, j] : matched.assignments) {
        TrackProfile& profile = active_[by_id.at(id)];
        const double prev_y = profile.last_midpoint.y;
        const CrossingEvent event = crossing(prev_y, cur[j].y, geom_);
        profile.last_midpoint = cur[j];
        profile.last_frame = frame.frame_index;
        if (event != CrossingEvent::None) {
            profile.status = status_after(event);
            if (!profile.size_mm) {
                profile.size_mm = bee_size_mm(frame.boxes[j], geom_);
            }
            profile.snapshots.push_back({frame.frame_index, frame.boxes[j], event});
            events.push_back({profile.id, event});
        }
    }

    // Profiles without a detection this frame are dropped immediately; a
    // returning bee becomes a new profile.
    std::vector<char> retire(active_.size(), 0);
    for (std::int64_t id : matched.unmatched_prev) {
        retire[by_id.at(id)] = 1;
    }
    std::vector<TrackProfile> still_active;
    still_active.reserve(active_.size() + matched.unmatched_cur.size());
    for (std::size_t i = 0; i < active_.size(); ++i) {
        if (retire[i]) {
            retired_.push_back(std::move(active_[i]));
        } else {
            still_active.push_back(std::move(active_[i]));
        }
    }
    active_ = std::move(still_active);

    for (std::size_t j : matched.unmatched_cur) {
        TrackProfile profile;
        profile.id = next_id_++;
        profile.last_midpoint = cur[j];
        profile.status = TrackStatus::New;
        profile.first_frame = frame.frame_index;
        profile.last_frame = frame.frame_index;
        active_.push_back(std::move(profile));
    }

    last_frame_index_ = frame.frame_index;
    return events;
}

std::vector<TrackProfile> Tracker::finalize() {
    if (!finalized_) {
        for (TrackProfile& profile : active_) {
            retired_.push_back(std::move(profile));
        }
        active_.clear();
        std::sort(retired_.begin(), retired_.end(),
                  [](const TrackProfile& a, const TrackProfile& b) { return a.id < b.id; });
        finalized_ = true;
    }
    return retired_;
}

}  // namespace hivemon
