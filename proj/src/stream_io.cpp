#include "hivemon/stream_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>

#include "hivemon/errors.hpp"

namespace hivemon {

std::string_view to_string(SecondaryClass cls) {
    return cls == SecondaryClass::Pollen ? "Pollen" : "Mite";
}

SecondaryClass secondary_class_from_string(std::string_view token) {
    if (token == "Pollen") return SecondaryClass::Pollen;
    if (token == "Mite") return SecondaryClass::Mite;
    throw FormatError("unknown secondary class '" + std::string(token) + "'");
}

namespace io {

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_double(std::string_view field, std::size_t line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw FormatError("malformed number '" + std::string(field) + "'", line_no);
    }
    return value;
}

std::int64_t parse_int(std::string_view field, std::size_t line_no) {
    std::int64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw FormatError("malformed integer '" + std::string(field) + "'", line_no);
    }
    return value;
}

bool parse_bool01(std::string_view field, std::size_t line_no) {
    if (field == "0") return false;
    if (field == "1") return true;
    throw FormatError("malformed flag '" + std::string(field) + "' (expected 0 or 1)", line_no);
}

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw IoError("number formatting failed");
    return std::string(buf, ptr);
}

}  // namespace io

namespace {

constexpr char kFieldSep = ',';

bool is_blank_or_comment(std::string_view line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

// Reads logical lines, tracking 1-based line numbers and skipping blanks
// and '#' comments.
class LineSource {
public:
    explicit LineSource(std::istream& in) : in_(in) {}

    std::optional<std::string> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!is_blank_or_comment(line)) {
                const std::string_view stripped = strip_cr(line);
                return std::string(stripped);
            }
        }
        if (in_.bad()) throw IoError("read failure on input stream");
        return std::nullopt;
    }

    std::size_t line_no() const { return line_no_; }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

DetectionBox parse_box_tuple(std::string_view field, std::size_t line_no) {
    const auto parts = io::split_fields(field, kFieldSep);
    if (parts.size() != 5) {
        throw FormatError("detection box needs 5 comma-separated values, got " +
                              std::to_string(parts.size()),
                          line_no);
    }
    DetectionBox box;
    box.min_x = io::parse_double(parts[0], line_no);
    box.min_y = io::parse_double(parts[1], line_no);
    box.max_x = io::parse_double(parts[2], line_no);
    box.max_y = io::parse_double(parts[3], line_no);
    box.confidence = io::parse_double(parts[4], line_no);
    if (!is_valid(box)) {
        throw FormatError("detection box violates invariants (corner order, sign, confidence)",
                          line_no);
    }
    return box;
}

void expect_header(LineSource& lines, std::string_view expected, std::string_view format_name) {
    const auto header = lines.next();
    if (!header) {
        throw FormatError(std::string(format_name) + ": missing header '" +
                              std::string(expected) + "'",
                          lines.line_no() == 0 ? 1 : lines.line_no());
    }
    if (*header != expected) {
        throw FormatError(std::string(format_name) + ": expected header '" +
                              std::string(expected) + "', got '" + *header + "'",
                          lines.line_no());
    }
}

}  // namespace

void parse_detection_stream(std::istream& source,
                            const std::function<void(FrameDetections&&)>& sink) {
    LineSource lines(source);
    std::optional<std::int64_t> last_index;
    while (const auto line = lines.next()) {
        const std::size_t line_no = lines.line_no();
        const auto fields = io::split_fields(*line, ' ');
        FrameDetections frame;
        frame.frame_index = io::parse_int(fields[0], line_no);
        if (frame.frame_index < 0) {
            throw FormatError("negative frame index", line_no);
        }
        if (last_index && frame.frame_index <= *last_index) {
            throw FormatError("frame index " + std::to_string(frame.frame_index) +
                                  " not greater than previous " + std::to_string(*last_index),
                              line_no);
        }
        frame.boxes.reserve(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            if (fields[i].empty()) {
                throw FormatError("empty detection field (double space?)", line_no);
            }
            frame.boxes.push_back(parse_box_tuple(fields[i], line_no));
        }
        last_index = frame.frame_index;
        sink(std::move(frame));
    }
}

std::vector<FrameDetections> read_detection_stream(std::istream& source) {
    std::vector<FrameDetections> frames;
    parse_detection_stream(source, [&](FrameDetections&& f) { frames.push_back(std::move(f)); });
    return frames;
}

void write_detection_stream(const std::vector<FrameDetections>& frames, std::ostream& sink) {
    for (const FrameDetections& frame : frames) {
        sink << frame.frame_index;
        for (const DetectionBox& box : frame.boxes) {
            sink << ' ' << io::format_double(box.min_x) << ',' << io::format_double(box.min_y)
                 << ',' << io::format_double(box.max_x) << ',' << io::format_double(box.max_y)
                 << ',' << io::format_double(box.confidence);
        }
        sink << '\n';
    }
    if (!sink) throw IoError("write failure on detection stream sink");
}

namespace {
constexpr std::string_view kGroundTruthHeader =
    "bee_id,final_status,first_frame,last_frame,has_pollen,has_mite";
constexpr std::string_view kTrackLogHeader =
    "id,status,first_frame,last_frame,mid_x,mid_y,size_mm,snapshots";
constexpr std::string_view kSecondaryHeader =
    "profile_id,frame_index,class,confidence,min_x,min_y,max_x,max_y";
}  // namespace

std::vector<GroundTruthRecord> parse_ground_truth(std::istream& source) {
    LineSource lines(source);
    expect_header(lines, kGroundTruthHeader, "ground truth");
    std::vector<GroundTruthRecord> records;
    std::set<std::int64_t> seen;
    while (const auto line = lines.next()) {
        const std::size_t line_no = lines.line_no();
        const auto fields = io::split_fields(*line, kFieldSep);
        if (fields.size() != 6) {
            throw FormatError("ground truth row needs 6 fields, got " +
                                  std::to_string(fields.size()),
                              line_no);
        }
        GroundTruthRecord rec;
        rec.bee_id = io::parse_int(fields[0], line_no);
        try {
            rec.final_status = track_status_from_string(fields[1]);
        } catch (const FormatError& e) {
            throw FormatError(e.what(), line_no);
        }
        rec.first_frame = io::parse_int(fields[2], line_no);
        rec.last_frame = io::parse_int(fields[3], line_no);
        rec.has_pollen = io::parse_bool01(fields[4], line_no);
        rec.has_mite = io::parse_bool01(fields[5], line_no);
        if (rec.last_frame < rec.first_frame) {
            throw FormatError("last_frame before first_frame", line_no);
        }
        if (!seen.insert(rec.bee_id).second) {
            throw FormatError("duplicate bee_id " + std::to_string(rec.bee_id), line_no);
        }
        records.push_back(rec);
    }
    return records;
}

void write_ground_truth(const std::vector<GroundTruthRecord>& records, std::ostream& sink) {
    sink << kGroundTruthHeader << '\n';
    for (const GroundTruthRecord& rec : records) {
        sink << rec.bee_id << ',' << to_string(rec.final_status) << ',' << rec.first_frame << ','
             << rec.last_frame << ',' << (rec.has_pollen ? 1 : 0) << ','
             << (rec.has_mite ? 1 : 0) << '\n';
    }
    if (!sink) throw IoError("write failure on ground truth sink");
}

namespace {

constexpr char kSnapshotSep = ';';
constexpr char kSnapshotFieldSep = ':';

SnapshotRef parse_snapshot_tuple(std::string_view field, std::size_t line_no) {
    const auto parts = io::split_fields(field, kSnapshotFieldSep);
    if (parts.size() != 7) {
        throw FormatError("snapshot tuple needs 7 ':'-separated values", line_no);
    }
    SnapshotRef snap;
    snap.frame_index = io::parse_int(parts[0], line_no);
    try {
        snap.crossing = crossing_event_from_string(parts[1]);
    } catch (const FormatError& e) {
        throw FormatError(e.what(), line_no);
    }
    if (snap.crossing == CrossingEvent::None) {
        throw FormatError("snapshot crossing may not be None", line_no);
    }
    snap.box.min_x = io::parse_double(parts[2], line_no);
    snap.box.min_y = io::parse_double(parts[3], line_no);
    snap.box.max_x = io::parse_double(parts[4], line_no);
    snap.box.max_y = io::parse_double(parts[5], line_no);
    snap.box.confidence = io::parse_double(parts[6], line_no);
    if (!is_valid(snap.box)) {
        throw FormatError("snapshot box violates invariants", line_no);
    }
    return snap;
}

}  // namespace

std::vector<TrackProfile> parse_track_log(std::istream& source) {
    LineSource lines(source);
    expect_header(lines, kTrackLogHeader, "track log");
    std::vector<TrackProfile> profiles;
    std::set<std::int64_t> seen;
    while (const auto line = lines.next()) {
        const std::size_t line_no = lines.line_no();
        const auto fields = io::split_fields(*line, kFieldSep);
        if (fields.size() != 8) {
            throw FormatError("track log row needs 8 fields, got " +
                                  std::to_string(fields.size()),
                              line_no);
        }
        TrackProfile profile;
        profile.id = io::parse_int(fields[0], line_no);
        try {
            profile.status = track_status_from_string(fields[1]);
        } catch (const FormatError& e) {
            throw FormatError(e.what(), line_no);
        }
        profile.first_frame = io::parse_int(fields[2], line_no);
        profile.last_frame = io::parse_int(fields[3], line_no);
        profile.last_midpoint.x = io::parse_double(fields[4], line_no);
        profile.last_midpoint.y = io::parse_double(fields[5], line_no);
        if (!fields[6].empty()) {
            profile.size_mm = io::parse_double(fields[6], line_no);
        }
        if (!fields[7].empty()) {
            for (std::string_view tuple : io::split_fields(fields[7], kSnapshotSep)) {
                profile.snapshots.push_back(parse_snapshot_tuple(tuple, line_no));
            }
        }
        if (profile.last_frame < profile.first_frame) {
            throw FormatError("last_frame before first_frame", line_no);
        }
        if (!seen.insert(profile.id).second) {
            throw FormatError("duplicate profile id " + std::to_string(profile.id), line_no);
        }
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

void write_track_log(const std::vector<TrackProfile>& profiles, std::ostream& sink) {
    sink << kTrackLogHeader << '\n';
    for (const TrackProfile& profile : profiles) {
        sink << profile.id << ',' << to_string(profile.status) << ',' << profile.first_frame
             << ',' << profile.last_frame << ',' << io::format_double(profile.last_midpoint.x)
             << ',' << io::format_double(profile.last_midpoint.y) << ',';
        if (profile.size_mm) sink << io::format_double(*profile.size_mm);
        sink << ',';
        for (std::size_t i = 0; i < profile.snapshots.size(); ++i) {
            const SnapshotRef& snap = profile.snapshots[i];
            if (i > 0) sink << kSnapshotSep;
            sink << snap.frame_index << kSnapshotFieldSep << to_string(snap.crossing)
                 << kSnapshotFieldSep << io::format_double(snap.box.min_x) << kSnapshotFieldSep
                 << io::format_double(snap.box.min_y) << kSnapshotFieldSep
                 << io::format_double(snap.box.max_x) << kSnapshotFieldSep
                 << io::format_double(snap.box.max_y) << kSnapshotFieldSep
                 << io::format_double(snap.box.confidence);
        }
        sink << '\n';
    }
    if (!sink) throw IoError("write failure on track log sink");
}

std::vector<SecondaryDetection> parse_secondary_detections(std::istream& source) {
    LineSource lines(source);
    expect_header(lines, kSecondaryHeader, "secondary detections");
    std::vector<SecondaryDetection> detections;
    while (const auto line = lines.next()) {
        const std::size_t line_no = lines.line_no();
        const auto fields = io::split_fields(*line, kFieldSep);
        if (fields.size() != 8) {
            throw FormatError("secondary detection row needs 8 fields, got " +
                                  std::to_string(fields.size()),
                              line_no);
        }
        SecondaryDetection det;
        det.profile_id = io::parse_int(fields[0], line_no);
        det.frame_index = io::parse_int(fields[1], line_no);
        try {
            det.cls = secondary_class_from_string(fields[2]);
        } catch (const FormatError& e) {
            throw FormatError(e.what(), line_no);
        }
        det.confidence = io::parse_double(fields[3], line_no);
        det.box.min_x = io::parse_double(fields[4], line_no);
        det.box.min_y = io::parse_double(fields[5], line_no);
        det.box.max_x = io::parse_double(fields[6], line_no);
        det.box.max_y = io::parse_double(fields[7], line_no);
        det.box.confidence = det.confidence;
        if (!is_valid(det.box) || !std::isfinite(det.confidence) || det.confidence < 0.0 ||
            det.confidence > 1.0) {
            throw FormatError("secondary detection violates invariants", line_no);
        }
        detections.push_back(det);
    }
    return detections;
}

void write_secondary_detections(const std::vector<SecondaryDetection>& detections,
                                std::ostream& sink) {
    sink << kSecondaryHeader << '\n';
    for (const SecondaryDetection& det : detections) {
        sink << det.profile_id << ',' << det.frame_index << ',' << to_string(det.cls) << ','
             << io::format_double(det.confidence) << ',' << io::format_double(det.box.min_x)
             << ',' << io::format_double(det.box.min_y) << ',' << io::format_double(det.box.max_x)
             << ',' << io::format_double(det.box.max_y) << '\n';
    }
    if (!sink) throw IoError("write failure on secondary detections sink");
}

}  // namespace hivemon
