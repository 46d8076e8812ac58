#include "hivemon/eval.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "hivemon/errors.hpp"

namespace hivemon {

double error_rate(const CountPair& pair) {
    if (pair.manual_count <= 0) {
        throw UndefinedMetricError("error rate undefined: manual count is zero");
    }
    return std::abs(static_cast<double>(pair.algorithm_count) -
                    static_cast<double>(pair.manual_count)) /
           static_cast<double>(pair.manual_count);
}

double accuracy(const CountPair& pair) {
    const double err = error_rate(pair);
    return err > 1.0 ? 0.0 : 1.0 - err;
}

double video_accuracy(const CountPair& arriving, const CountPair& leaving) {
    return (accuracy(arriving) + accuracy(leaving)) / 2.0;
}

double average_accuracy(const std::vector<TrackingVideoCounts>& videos) {
    if (videos.empty()) {
        throw UndefinedMetricError("average accuracy undefined: no videos");
    }
    double sum = 0.0;
    for (const TrackingVideoCounts& v : videos) {
        sum += video_accuracy(v.arriving, v.leaving);
    }
    return sum / static_cast<double>(videos.size());
}

PollenMetrics pollen_metrics(const PollenVideoCounts& counts) {
    const long tp = counts.manual_pollen - counts.false_neg;
    if (tp < 0) {
        throw ValidationError("pollen counts invalid: false negatives exceed manual count");
    }
    PollenMetrics m;
    if (tp + counts.false_pos <= 0) {
        throw UndefinedMetricError("precision undefined: no positive predictions");
    }
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + counts.false_pos);
    if (counts.manual_pollen <= 0) {
        throw UndefinedMetricError("recall undefined: no manually counted pollen bees");
    }
    m.recall = static_cast<double>(tp) / static_cast<double>(counts.manual_pollen);
    if (m.precision + m.recall <= 0.0) {
        throw UndefinedMetricError("f1 undefined: precision + recall is zero");
    }
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

PollenMetrics pollen_averages(const std::vector<PollenVideoCounts>& videos) {
    if (videos.empty()) {
        throw UndefinedMetricError("pollen averages undefined: no videos");
    }
    PollenMetrics sum;
    for (const PollenVideoCounts& v : videos) {
        const PollenMetrics m = pollen_metrics(v);
        sum.precision += m.precision;
        sum.recall += m.recall;
        sum.f1 += m.f1;
    }
    const double n = static_cast<double>(videos.size());
    return {sum.precision / n, sum.recall / n, sum.f1 / n};
}

namespace {

VideoReport build_video_report(int video, const CountPair& arriving, const CountPair& leaving,
                               const CountPair& deck) {
    VideoReport report;
    report.video = video;
    report.arriving = arriving;
    report.leaving = leaving;
    report.deck = deck;
    report.total = {arriving.manual_count + leaving.manual_count + deck.manual_count,
                    arriving.algorithm_count + leaving.algorithm_count + deck.algorithm_count};
    report.arriving_accuracy = accuracy(arriving);
    report.leaving_accuracy = accuracy(leaving);
    report.accuracy = video_accuracy(arriving, leaving);
    return report;
}

}  // namespace

MetricsReport compare_runs(const std::vector<GroundTruthRecord>& truth,
                           const std::vector<TrackProfile>& profiles,
                           const ProfileFlags* flags) {
    if (truth.empty()) {
        throw UndefinedMetricError("comparison undefined: ground truth is empty");
    }
    long m_arriving = 0, m_leaving = 0, m_deck = 0, m_pollen = 0;
    for (const GroundTruthRecord& rec : truth) {
        switch (rec.final_status) {
            case TrackStatus::Arriving: ++m_arriving; break;
            case TrackStatus::Leaving: ++m_leaving; break;
            case TrackStatus::Deck: ++m_deck; break;
            case TrackStatus::New: break;
        }
        if (rec.has_pollen) ++m_pollen;
    }
    long a_arriving = 0, a_leaving = 0, a_deck = 0;
    for (const TrackProfile& p : profiles) {
        switch (p.status) {
            case TrackStatus::Arriving: ++a_arriving; break;
            case TrackStatus::Leaving: ++a_leaving; break;
            case TrackStatus::Deck: ++a_deck; break;
            case TrackStatus::New: break;
        }
    }

    MetricsReport report;
    VideoReport video = build_video_report(1, {m_arriving, a_arriving}, {m_leaving, a_leaving},
                                           {m_deck, a_deck});
    if (flags) {
        long flagged = 0;
        for (const auto& [id, f] : *flags) {
            if (f.pollen) ++flagged;
        }
        video.pollen = CountPair{m_pollen, flagged};
    }
    report.videos.push_back(video);
    report.average_accuracy = video.accuracy;
    return report;
}

MetricsReport evaluate_tables(const std::vector<TrackingVideoCounts>& tracking,
                              const std::vector<PollenVideoCounts>& pollen) {
    if (tracking.empty()) {
        throw UndefinedMetricError("evaluation undefined: no tracking counts");
    }
    MetricsReport report;
    for (const TrackingVideoCounts& v : tracking) {
        report.videos.push_back(build_video_report(v.video, v.arriving, v.leaving, CountPair{}));
    }
    report.average_accuracy = average_accuracy(tracking);

    for (const PollenVideoCounts& p : pollen) {
        const PollenMetrics m = pollen_metrics(p);
        bool attached = false;
        for (VideoReport& v : report.videos) {
            if (v.video == p.video) {
                v.pollen = CountPair{p.manual_pollen, p.algorithm_pollen};
                v.pollen_model = m;
                attached = true;
                break;
            }
        }
        if (!attached) {
            VideoReport extra;
            extra.video = p.video;
            extra.pollen = CountPair{p.manual_pollen, p.algorithm_pollen};
            extra.pollen_model = m;
            report.videos.push_back(extra);
        }
    }
    if (!pollen.empty()) {
        report.pollen_averages = pollen_averages(pollen);
    }
    return report;
}

namespace {

constexpr std::string_view kTrackingTableHeader =
    "video,arriving_manual,arriving_algorithm,leaving_manual,leaving_algorithm";
constexpr std::string_view kPollenTableHeader =
    "video,pollen_manual,pollen_algorithm,false_pos,false_neg,total_bees";

struct TableRow {
    std::size_t line_no = 0;
    std::vector<std::string> fields;
};

std::vector<TableRow> read_table(std::istream& source, std::string_view header,
                                 std::size_t fields, const char* what) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<TableRow> rows;
    bool saw_header = false;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view view = line;
        bool blank = true;
        for (char c : view) {
            if (c == '#') break;
            if (c != ' ' && c != '\t') {
                blank = false;
                break;
            }
        }
        if (blank || (!view.empty() && view.front() == '#')) continue;
        if (!saw_header) {
            if (view != header) {
                throw FormatError(std::string(what) + ": expected header '" +
                                      std::string(header) + "'",
                                  line_no);
            }
            saw_header = true;
            continue;
        }
        const auto split = io::split_fields(view, ',');
        if (split.size() != fields) {
            throw FormatError(std::string(what) + ": row needs " + std::to_string(fields) +
                                  " fields, got " + std::to_string(split.size()),
                              line_no);
        }
        TableRow row;
        row.line_no = line_no;
        row.fields.assign(split.begin(), split.end());
        rows.push_back(std::move(row));
    }
    if (!saw_header) {
        throw FormatError(std::string(what) + ": missing header", line_no == 0 ? 1 : line_no);
    }
    return rows;
}

}  // namespace

std::vector<TrackingVideoCounts> parse_tracking_table(std::istream& source) {
    std::vector<TrackingVideoCounts> videos;
    for (const TableRow& row : read_table(source, kTrackingTableHeader, 5, "tracking table")) {
        TrackingVideoCounts v;
        v.video = static_cast<int>(io::parse_int(row.fields[0], row.line_no));
        v.arriving.manual_count = io::parse_int(row.fields[1], row.line_no);
        v.arriving.algorithm_count = io::parse_int(row.fields[2], row.line_no);
        v.leaving.manual_count = io::parse_int(row.fields[3], row.line_no);
        v.leaving.algorithm_count = io::parse_int(row.fields[4], row.line_no);
        videos.push_back(v);
    }
    return videos;
}

std::vector<PollenVideoCounts> parse_pollen_table(std::istream& source) {
    std::vector<PollenVideoCounts> videos;
    for (const TableRow& row : read_table(source, kPollenTableHeader, 6, "pollen table")) {
        PollenVideoCounts v;
        v.video = static_cast<int>(io::parse_int(row.fields[0], row.line_no));
        v.manual_pollen = io::parse_int(row.fields[1], row.line_no);
        v.algorithm_pollen = io::parse_int(row.fields[2], row.line_no);
        v.false_pos = io::parse_int(row.fields[3], row.line_no);
        v.false_neg = io::parse_int(row.fields[4], row.line_no);
        v.total_bees = io::parse_int(row.fields[5], row.line_no);
        if (v.false_neg > v.manual_pollen) {
            throw FormatError("false_neg exceeds pollen_manual", row.line_no);
        }
        videos.push_back(v);
    }
    return videos;
}

namespace {

std::string fixed6(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

}  // namespace

void write_metrics_report(const MetricsReport& report, std::ostream& sink) {
    sink << "video,arriving_manual,arriving_algorithm,arriving_accuracy,"
            "leaving_manual,leaving_algorithm,leaving_accuracy,video_accuracy,"
            "pollen_manual,pollen_algorithm,pollen_precision,pollen_recall,pollen_f1\n";
    for (const VideoReport& v : report.videos) {
        sink << v.video << ',' << v.arriving.manual_count << ',' << v.arriving.algorithm_count
             << ',' << fixed6(v.arriving_accuracy) << ',' << v.leaving.manual_count << ','
             << v.leaving.algorithm_count << ',' << fixed6(v.leaving_accuracy) << ','
             << fixed6(v.accuracy) << ',';
        if (v.pollen) {
            sink << v.pollen->manual_count << ',' << v.pollen->algorithm_count;
        } else {
            sink << ',';
        }
        sink << ',';
        if (v.pollen_model) {
            sink << fixed6(v.pollen_model->precision) << ',' << fixed6(v.pollen_model->recall)
                 << ',' << fixed6(v.pollen_model->f1);
        } else {
            sink << ",,";
        }
        sink << '\n';
    }
    sink << "average_accuracy," << fixed6(report.average_accuracy) << '\n';
    if (report.pollen_averages) {
        sink << "average_pollen_precision," << fixed6(report.pollen_averages->precision) << '\n';
        sink << "average_pollen_recall," << fixed6(report.pollen_averages->recall) << '\n';
        sink << "average_pollen_f1," << fixed6(report.pollen_averages->f1) << '\n';
    }
    if (!sink) throw IoError("write failure on metrics report sink");
}

}  // namespace hivemon
