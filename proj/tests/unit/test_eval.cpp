#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hivemon/errors.hpp"
#include "hivemon/eval.hpp"
#include "hivemon/simulator.hpp"
#include "support/testrng.hpp"

using namespace hivemon;

namespace {

// The five annotated validation videos: arriving/leaving manual vs
// algorithm counts, as used in the worked accuracy computation.
std::vector<TrackingVideoCounts> five_video_counts() {
    return {
        {1, {17, 17}, {19, 19}},
        {2, {36, 39}, {32, 29}},
        {3, {44, 42}, {34, 33}},
        {4, {33, 35}, {22, 22}},
        {5, {40, 40}, {34, 32}},
    };
}

// The five pollen-model videos: manual count, algorithm count, false
// positives, false negatives, total bees.
std::vector<PollenVideoCounts> five_pollen_counts() {
    return {
        {1, 23, 22, 3, 4, 325},
        {2, 21, 14, 1, 8, 296},
        {3, 10, 6, 1, 4, 267},
        {4, 7, 7, 0, 0, 209},
        {5, 15, 15, 2, 2, 253},
    };
}

}  // namespace

TEST_CASE("error rate is the absolute relative count difference") {
    CHECK(error_rate({36, 39}) == doctest::Approx(3.0 / 36.0).epsilon(1e-12));
    CHECK(error_rate({17, 17}) == 0.0);
    CHECK(error_rate({10, 0}) == 1.0);
    CHECK_THROWS_AS(error_rate({0, 5}), UndefinedMetricError);
}

TEST_CASE("error rate is symmetric in over- and undercounts") {
    testsupport::Rng rng(61);
    for (int i = 0; i < 200; ++i) {
        const long manual = rng.uniform_int(1, 100);
        const long delta = rng.uniform_int(0, manual);
        CHECK(error_rate({manual, manual + delta}) ==
              doctest::Approx(error_rate({manual, manual - delta})).epsilon(1e-12));
    }
}

TEST_CASE("accuracy complements the error rate and clamps at zero") {
    CHECK(accuracy({32, 29}) == doctest::Approx(0.90625).epsilon(1e-9));
    CHECK(accuracy({22, 22}) == 1.0);
    CHECK(accuracy({10, 25}) == 0.0);  // error rate 1.5 clamps
}

TEST_CASE("video accuracy averages the two directions") {
    CHECK(video_accuracy({36, 39}, {32, 29}) == doctest::Approx(0.911458).epsilon(1e-5));
    CHECK(video_accuracy({33, 35}, {22, 22}) == doctest::Approx(0.969697).epsilon(1e-5));
    CHECK(video_accuracy({10, 10}, {20, 20}) == 1.0);
}

TEST_CASE("the five-video average reproduces the published tracking accuracy") {
    const auto videos = five_video_counts();
    const std::vector<double> published{1.0000, 0.9114, 0.9625, 0.9696, 0.9705};
    for (std::size_t i = 0; i < videos.size(); ++i) {
        const double acc = video_accuracy(videos[i].arriving, videos[i].leaving);
        CHECK(std::abs(acc - published[i]) <= 0.0005);
    }
    CHECK(std::abs(average_accuracy(videos) - 0.9628) <= 0.0005);
}

TEST_CASE("average accuracy is permutation-invariant") {
    auto videos = five_video_counts();
    const double baseline = average_accuracy(videos);
    std::mt19937 shuffler(7);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(videos.begin(), videos.end(), shuffler);
        CHECK(average_accuracy(videos) == doctest::Approx(baseline).epsilon(1e-15));
    }
}

TEST_CASE("pollen metrics reproduce the worked per-video values") {
    const auto m1 = pollen_metrics({1, 23, 22, 3, 4, 325});
    CHECK(std::abs(m1.precision - 0.8636) <= 0.0005);
    CHECK(std::abs(m1.recall - 0.8261) <= 0.0005);
    CHECK(std::abs(m1.f1 - 0.8444) <= 0.0005);

    const auto m2 = pollen_metrics({2, 21, 14, 1, 8, 296});
    CHECK(std::abs(m2.precision - 0.9286) <= 0.0005);
    CHECK(std::abs(m2.recall - 0.6190) <= 0.0005);
    CHECK(std::abs(m2.f1 - 0.7428) <= 0.0005);

    const auto m4 = pollen_metrics({4, 7, 7, 0, 0, 209});
    CHECK(m4.precision == 1.0);
    CHECK(m4.recall == 1.0);
    CHECK(m4.f1 == 1.0);
}

TEST_CASE("pollen averages reproduce the published model metrics") {
    const auto avg = pollen_averages(five_pollen_counts());
    CHECK(std::abs(avg.precision - 0.9032) <= 0.0005);
    CHECK(std::abs(avg.recall - 0.7823) <= 0.0005);
    CHECK(std::abs(avg.f1 - 0.8319) <= 0.0005);
}

TEST_CASE("f1 lies between precision and recall") {
    testsupport::Rng rng(62);
    for (int i = 0; i < 300; ++i) {
        PollenVideoCounts counts;
        counts.manual_pollen = rng.uniform_int(1, 60);
        counts.false_neg = rng.uniform_int(0, counts.manual_pollen - 1);
        counts.false_pos = rng.uniform_int(0, 20);
        const long tp = counts.manual_pollen - counts.false_neg;
        if (tp + counts.false_pos == 0) continue;
        const PollenMetrics m = pollen_metrics(counts);
        CHECK(m.f1 >= std::min(m.precision, m.recall) - 1e-12);
        CHECK(m.f1 <= std::max(m.precision, m.recall) + 1e-12);
    }
}

TEST_CASE("undefined pollen metrics raise errors naming the metric") {
    // all manual bees missed and nothing predicted: precision undefined
    try {
        pollen_metrics({1, 5, 0, 0, 5, 100});
        FAIL("expected UndefinedMetricError");
    } catch (const UndefinedMetricError& e) {
        CHECK(std::string(e.what()).find("precision") != std::string::npos);
    }
    CHECK_THROWS_AS(pollen_metrics({1, 0, 0, 3, 0, 100}), UndefinedMetricError);  // recall
    CHECK_THROWS_AS(pollen_metrics({1, 5, 9, 1, 9, 100}), ValidationError);  // FN > manual
}

TEST_CASE("compare_runs scores a tracker run against its truth") {
    std::vector<GroundTruthRecord> truth{
        {1, TrackStatus::Arriving, 0, 9, false, false},
        {2, TrackStatus::Arriving, 0, 9, false, false},
        {3, TrackStatus::Leaving, 0, 9, false, false},
        {4, TrackStatus::New, 0, 9, false, false},  // excluded from scoring
    };
    std::vector<TrackProfile> profiles(4);
    profiles[0].id = 1;
    profiles[0].status = TrackStatus::Arriving;
    profiles[1].id = 2;
    profiles[1].status = TrackStatus::Arriving;
    profiles[2].id = 3;
    profiles[2].status = TrackStatus::Leaving;
    profiles[3].id = 4;
    profiles[3].status = TrackStatus::New;

    const MetricsReport report = compare_runs(truth, profiles);
    CHECK(report.average_accuracy == 1.0);
    REQUIRE(report.videos.size() == 1);
    CHECK(report.videos[0].arriving == CountPair{2, 2});
    CHECK(report.videos[0].leaving == CountPair{1, 1});
    CHECK_FALSE(report.videos[0].pollen.has_value());
}

TEST_CASE("compare_runs on an ideal simulator run scores a perfect 1.0") {
    SimConfig config;
    config.bee_count = 10;
    config.duration_s = 40.0;
    config.speed_px_per_frame = {6.0, 24.0};
    config.min_separation_px = 52.0;
    config.seed = 17;
    const SimOutput sim = generate(config);

    Tracker tracker{config.geom};
    for (const FrameDetections& frame : sim.stream) tracker.step(frame);
    const auto profiles = tracker.finalize();

    const MetricsReport report = compare_runs(sim.truth, profiles);
    CHECK(report.average_accuracy == 1.0);
}

TEST_CASE("compare_runs rejects empty truth") {
    CHECK_THROWS_AS(compare_runs({}, {}), UndefinedMetricError);
}

TEST_CASE("table parsers read the fixture formats") {
    std::istringstream tracking(
        "video,arriving_manual,arriving_algorithm,leaving_manual,leaving_algorithm\n"
        "1,17,17,19,19\n"
        "2,36,39,32,29\n");
    const auto t = parse_tracking_table(tracking);
    REQUIRE(t.size() == 2);
    CHECK(t[1].arriving.algorithm_count == 39);

    std::istringstream pollen(
        "video,pollen_manual,pollen_algorithm,false_pos,false_neg,total_bees\n"
        "1,23,22,3,4,325\n");
    const auto p = parse_pollen_table(pollen);
    REQUIRE(p.size() == 1);
    CHECK(p[0].false_neg == 4);

    std::istringstream bad("video,arriving_manual\n1,17\n");
    CHECK_THROWS_AS(parse_tracking_table(bad), FormatError);
}

TEST_CASE("evaluate_tables assembles the full report") {
    const MetricsReport report = evaluate_tables(five_video_counts(), five_pollen_counts());
    REQUIRE(report.videos.size() == 5);
    CHECK(std::abs(report.average_accuracy - 0.9628) <= 0.0005);
    REQUIRE(report.pollen_averages.has_value());
    CHECK(std::abs(report.pollen_averages->f1 - 0.8319) <= 0.0005);
    REQUIRE(report.videos[0].pollen_model.has_value());

    std::ostringstream out;
    write_metrics_report(report, out);
    CHECK(out.str().find("average_accuracy,0.962862") != std::string::npos);
    CHECK(out.str().find("average_pollen_precision,0.903203") != std::string::npos);
    CHECK(out.str().find("average_pollen_recall,0.782360") != std::string::npos);
    CHECK(out.str().find("average_pollen_f1,0.831970") != std::string::npos);
}
