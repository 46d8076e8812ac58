#pragma once

// Reference implementations used as independent oracles by the unit and
// acceptance suites. These intentionally re-derive behavior through a
// different route than the library code they check.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "hivemon/geometry.hpp"
#include "hivemon/tracker.hpp"

namespace refimpl {

// Literal transliteration of the deployed trigger rules on the default
// 640x420 frame: the frame is split at y=140 and y=280; moving onto or past
// a line fires the corresponding event; the 140-line rules are evaluated
// before the 280-line rules.
inline hivemon::CrossingEvent crossing_prose(double prev_y, double cur_y) {
    using hivemon::CrossingEvent;
    if (prev_y > 140.0 && cur_y <= 140.0) return CrossingEvent::ArriveCross;
    if (prev_y <= 140.0 && cur_y > 140.0) return CrossingEvent::DeckCrossFromArrive;
    if (prev_y < 280.0 && cur_y >= 280.0) return CrossingEvent::LeaveCross;
    if (prev_y > 280.0 && cur_y <= 280.0) return CrossingEvent::DeckCrossFromLeave;
    return CrossingEvent::None;
}

// Longest-side size conversion written with the algebra rearranged
// (multiply before divide), so rounding differs from the library route.
inline double bee_size_mm_rearranged(const hivemon::DetectionBox& box,
                                     const hivemon::HiveGeometry& geom) {
    const double w = box.max_x - box.min_x;
    const double h = box.max_y - box.min_y;
    if (w >= h) return w * geom.container_w_mm / geom.frame_w;
    return h * geom.container_h_mm / geom.frame_h;
}

// Greedy nearest-neighbor association recomputed by repeated argmin scans
// (no candidate pre-sort): on every round, scan all unassigned pairs for
// the global minimum (ties: lower id, then lower detection index) and
// assign it, until no pair within tolerance remains.
inline std::vector<std::pair<std::int64_t, std::size_t>> match_by_repeated_argmin(
    const std::vector<std::pair<std::int64_t, hivemon::Midpoint>>& prev,
    const std::vector<hivemon::Midpoint>& cur, double tolerance) {
    std::vector<char> prev_used(prev.size(), 0);
    std::vector<char> cur_used(cur.size(), 0);
    std::vector<std::pair<std::int64_t, std::size_t>> out;
    const double tol2 = tolerance * tolerance;
    while (true) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = prev.size(), bj = cur.size();
        for (std::size_t i = 0; i < prev.size(); ++i) {
            if (prev_used[i]) continue;
            for (std::size_t j = 0; j < cur.size(); ++j) {
                if (cur_used[j]) continue;
                const double dx = prev[i].second.x - cur[j].x;
                const double dy = prev[i].second.y - cur[j].y;
                const double d2 = dx * dx + dy * dy;
                if (d2 > tol2) continue;
                const bool better =
                    d2 < best ||
                    (d2 == best && (prev[i].first < prev[bi].first ||
                                    (prev[i].first == prev[bi].first && j < bj)));
                if (better) {
                    best = d2;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == prev.size()) break;
        prev_used[bi] = 1;
        cur_used[bj] = 1;
        out.emplace_back(prev[bi].first, bj);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace refimpl
