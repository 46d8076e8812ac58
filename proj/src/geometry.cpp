#include "hivemon/geometry.hpp"

#include <cmath>
#include <string>

#include "hivemon/errors.hpp"

namespace hivemon {

bool is_valid(const DetectionBox& box) noexcept {
    return std::isfinite(box.min_x) && std::isfinite(box.min_y) &&
           std::isfinite(box.max_x) && std::isfinite(box.max_y) &&
           std::isfinite(box.confidence) &&
           box.min_x >= 0.0 && box.min_y >= 0.0 &&
           box.min_x <= box.max_x && box.min_y <= box.max_y &&
           box.confidence >= 0.0 && box.confidence <= 1.0;
}

void validate(const DetectionBox& box) {
    if (!is_valid(box)) {
        throw ValidationError(
            "invalid detection box: corners must be finite, non-negative and "
            "ordered (min <= max), confidence in [0,1]");
    }
}

void validate(const HiveGeometry& geom) {
    const bool finite = std::isfinite(geom.frame_w) && std::isfinite(geom.frame_h) &&
                        std::isfinite(geom.arrive_line) && std::isfinite(geom.leave_line) &&
                        std::isfinite(geom.match_tolerance) &&
                        std::isfinite(geom.container_w_mm) && std::isfinite(geom.container_h_mm);
    if (!finite || geom.frame_w <= 0.0 || geom.frame_h <= 0.0 ||
        !(0.0 < geom.arrive_line && geom.arrive_line < geom.leave_line &&
          geom.leave_line < geom.frame_h) ||
        geom.match_tolerance <= 0.0 || geom.container_w_mm <= 0.0 ||
        geom.container_h_mm <= 0.0) {
        throw ValidationError(
            "invalid geometry: need 0 < arrive_line < leave_line < frame_h, "
            "positive frame, tolerance and container dimensions");
    }
}

Midpoint midpoint(const DetectionBox& box) {
    validate(box);
    return Midpoint{(box.max_x - box.min_x) / 2.0 + box.min_x,
                    (box.max_y - box.min_y) / 2.0 + box.min_y};
}

double bee_size_mm(const DetectionBox& box, const HiveGeometry& geom) {
    validate(box);
    validate(geom);
    const double w = box.max_x - box.min_x;
    const double h = box.max_y - box.min_y;
    if (w >= h) {
        return w / (geom.frame_w / geom.container_w_mm);
    }
    return h / (geom.frame_h / geom.container_h_mm);
}

CrossingEvent crossing(double prev_y, double cur_y, const HiveGeometry& geom) {
    const bool onto_arrive = prev_y > geom.arrive_line && cur_y <= geom.arrive_line;
    const bool off_arrive = prev_y <= geom.arrive_line && cur_y > geom.arrive_line;
    const bool onto_leave = prev_y < geom.leave_line && cur_y >= geom.leave_line;
    const bool off_leave = prev_y > geom.leave_line && cur_y <= geom.leave_line;

    // Arrive-line predicates take priority; at most one event per move.
    if (onto_arrive) return CrossingEvent::ArriveCross;
    if (off_arrive) return CrossingEvent::DeckCrossFromArrive;
    if (onto_leave) return CrossingEvent::LeaveCross;
    if (off_leave) return CrossingEvent::DeckCrossFromLeave;
    return CrossingEvent::None;
}

std::string_view to_string(CrossingEvent event) {
    switch (event) {
        case CrossingEvent::None: return "None";
        case CrossingEvent::ArriveCross: return "ArriveCross";
        case CrossingEvent::DeckCrossFromArrive: return "DeckCrossFromArrive";
        case CrossingEvent::LeaveCross: return "LeaveCross";
        case CrossingEvent::DeckCrossFromLeave: return "DeckCrossFromLeave";
    }
    return "None";
}

CrossingEvent crossing_event_from_string(std::string_view token) {
    if (token == "None") return CrossingEvent::None;
    if (token == "ArriveCross") return CrossingEvent::ArriveCross;
    if (token == "DeckCrossFromArrive") return CrossingEvent::DeckCrossFromArrive;
    if (token == "LeaveCross") return CrossingEvent::LeaveCross;
    if (token == "DeckCrossFromLeave") return CrossingEvent::DeckCrossFromLeave;
    throw FormatError("unknown crossing event '" + std::string(token) + "'");
}

}  // namespace hivemon
