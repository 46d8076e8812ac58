#pragma once

#include <string_view>

namespace hivemon {

/// Axis-aligned detector output in frame pixel coordinates.
/// (min_x, min_y) is the top-left corner, (max_x, max_y) the bottom-right.
struct DetectionBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
    double confidence = 1.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }

    bool operator==(const DetectionBox&) const = default;
};

struct Midpoint {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Midpoint&) const = default;
};

/// Frame layout and physical dimensions of the monitored entrance area.
/// Defaults are the deployed values: a 640x420 frame split into three
/// 140-pixel bands, 50 px matching tolerance, 110x65 mm work area.
struct HiveGeometry {
    double frame_w = 640.0;
    double frame_h = 420.0;
    double arrive_line = 140.0;
    double leave_line = 280.0;
    double match_tolerance = 50.0;
    double container_w_mm = 110.0;
    double container_h_mm = 65.0;

    bool operator==(const HiveGeometry&) const = default;
};

/// What a midpoint move did relative to the two trigger lines.
enum class CrossingEvent {
    None,
    ArriveCross,          // crossed down onto or past the arrive line (y <= arrive_line)
    DeckCrossFromArrive,  // crossed back over the arrive line into the deck
    LeaveCross,           // crossed onto or past the leave line (y >= leave_line)
    DeckCrossFromLeave,   // crossed back over the leave line into the deck
};

bool is_valid(const DetectionBox& box) noexcept;
void validate(const DetectionBox& box);  // throws ValidationError
void validate(const HiveGeometry& geom);

/// Center of a detection box. Throws ValidationError on an invalid box.
Midpoint midpoint(const DetectionBox& box);

/// Physical length of the detected bee: the longest box side divided by the
/// pixels-per-millimeter ratio of the matching axis.
double bee_size_mm(const DetectionBox& box, const HiveGeometry& geom);

/// Trigger event for a midpoint moving from prev_y to cur_y. The arrive
/// line is checked before the leave line, so a move satisfying both line
/// predicates reports the arrive-line event.
CrossingEvent crossing(double prev_y, double cur_y, const HiveGeometry& geom);

std::string_view to_string(CrossingEvent event);
CrossingEvent crossing_event_from_string(std::string_view token);  // throws FormatError

}  // namespace hivemon
