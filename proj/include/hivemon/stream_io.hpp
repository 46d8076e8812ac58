#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hivemon/tracker.hpp"

namespace hivemon {

/// One manually-annotated bee: identity, final status, frame span and
/// whether the annotator saw pollen / a mite on it.
struct GroundTruthRecord {
    std::int64_t bee_id = 0;
    TrackStatus final_status = TrackStatus::New;
    std::int64_t first_frame = 0;
    std::int64_t last_frame = 0;
    bool has_pollen = false;
    bool has_mite = false;

    bool operator==(const GroundTruthRecord&) const = default;
};

enum class SecondaryClass { Pollen, Mite };

std::string_view to_string(SecondaryClass cls);
SecondaryClass secondary_class_from_string(std::string_view token);  // throws FormatError

/// One pollen/mite detection on a profile snapshot. The box is local to the
/// snapshot crop.
struct SecondaryDetection {
    std::int64_t profile_id = 0;
    std::int64_t frame_index = 0;
    SecondaryClass cls = SecondaryClass::Pollen;
    double confidence = 0.0;
    DetectionBox box;

    bool operator==(const SecondaryDetection&) const = default;
};

// ---------------------------------------------------------------------------
// Detection stream: one line per frame, LF-terminated, UTF-8.
//
//   line  := frame-index (' ' box)*
//   box   := min_x ',' min_y ',' max_x ',' max_y ',' confidence
//
// Frame indices must be strictly increasing. Blank lines and lines whose
// first non-space character is '#' are skipped. Exact grammar: docs/formats.md.
// ---------------------------------------------------------------------------

/// Streaming parse; invokes `sink` once per frame record in file order.
void parse_detection_stream(std::istream& source,
                            const std::function<void(FrameDetections&&)>& sink);

std::vector<FrameDetections> read_detection_stream(std::istream& source);

void write_detection_stream(const std::vector<FrameDetections>& frames, std::ostream& sink);

// ---------------------------------------------------------------------------
// Ground truth: CSV with header
//   bee_id,final_status,first_frame,last_frame,has_pollen,has_mite
// ---------------------------------------------------------------------------

std::vector<GroundTruthRecord> parse_ground_truth(std::istream& source);
void write_ground_truth(const std::vector<GroundTruthRecord>& records, std::ostream& sink);

// ---------------------------------------------------------------------------
// Track log: CSV with header
//   id,status,first_frame,last_frame,mid_x,mid_y,size_mm,snapshots
// size_mm is empty while unset; snapshots is a ';'-joined list of
// frame:crossing:min_x:min_y:max_x:max_y:confidence tuples.
// Floats use shortest round-trip formatting, so parse(write(x)) == x.
// ---------------------------------------------------------------------------

std::vector<TrackProfile> parse_track_log(std::istream& source);
void write_track_log(const std::vector<TrackProfile>& profiles, std::ostream& sink);

// ---------------------------------------------------------------------------
// Secondary detections: CSV with header
//   profile_id,frame_index,class,confidence,min_x,min_y,max_x,max_y
// ---------------------------------------------------------------------------

std::vector<SecondaryDetection> parse_secondary_detections(std::istream& source);
void write_secondary_detections(const std::vector<SecondaryDetection>& detections,
                                std::ostream& sink);

// Small parsing/printing helpers shared by the delimited formats.
namespace io {

std::vector<std::string_view> split_fields(std::string_view line, char delim);
double parse_double(std::string_view field, std::size_t line_no);      // throws FormatError
std::int64_t parse_int(std::string_view field, std::size_t line_no);   // throws FormatError
bool parse_bool01(std::string_view field, std::size_t line_no);        // throws FormatError
std::string format_double(double value);  // shortest round-trip decimal form

}  // namespace io

}  // namespace hivemon
