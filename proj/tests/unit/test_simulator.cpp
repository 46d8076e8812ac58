#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "hivemon/errors.hpp"
#include "hivemon/simulator.hpp"
#include "hivemon/tracker.hpp"

using namespace hivemon;

namespace {

// Regime in which the tracker provably reproduces the ground truth: no
// noise, no dropouts, per-frame displacement under half the tolerance and
// pairwise separation above it.
SimConfig ideal_config(std::uint64_t seed, int bees = 10, double duration_s = 40.0) {
    SimConfig config;
    config.bee_count = bees;
    config.duration_s = duration_s;
    config.speed_px_per_frame = {6.0, 24.0};  // < tolerance/2
    config.jitter_px = 0.0;
    config.dropout_prob = 0.0;
    config.min_separation_px = 52.0;  // > tolerance
    config.seed = seed;
    return config;
}

VideoSummary track_and_summarize(const SimOutput& sim, const HiveGeometry& geom) {
    Tracker tracker{geom};
    for (const FrameDetections& frame : sim.stream) tracker.step(frame);
    return summarize_video(tracker.finalize());
}

bool counts_equal(const VideoSummary& a, const VideoSummary& b) {
    return a.arriving == b.arriving && a.leaving == b.leaving && a.deck == b.deck &&
           a.new_count == b.new_count && a.pollen_tracks == b.pollen_tracks &&
           a.mite_tracks == b.mite_tracks && a.total_tracks == b.total_tracks;
}

long count_error(const VideoSummary& a, const VideoSummary& b) {
    return std::labs(a.arriving - b.arriving) + std::labs(a.leaving - b.leaving) +
           std::labs(a.deck - b.deck) + std::labs(a.new_count - b.new_count);
}

}  // namespace

TEST_CASE("zero bees produce empty truth and empty frames") {
    SimConfig config;
    config.bee_count = 0;
    config.duration_s = 5.0;
    config.fps = 10.0;
    const SimOutput sim = generate(config);
    CHECK(sim.truth.empty());
    REQUIRE(sim.stream.size() == 50);
    for (const FrameDetections& frame : sim.stream) {
        CHECK(frame.boxes.empty());
    }
}

TEST_CASE("hand-traced monotone path: bottom to top ends Arriving") {
    // A bee walking monotonically from y=400 to y=20 crosses the leave line
    // going up (Deck) and then the arrive line (Arriving).
    const HiveGeometry geom;
    TrackStatus status = TrackStatus::New;
    double prev = 400;
    for (double y = 380; y >= 20; y -= 20) {
        const CrossingEvent e = crossing(prev, y, geom);
        if (e != CrossingEvent::None) status = status_after(e);
        prev = y;
    }
    CHECK(status == TrackStatus::Arriving);

    // The tracker reaches the same conclusion on that stream.
    Tracker tracker{geom};
    std::int64_t index = 0;
    for (double y = 400; y >= 20; y -= 20) {
        tracker.step(FrameDetections{
            index++, {DetectionBox{300, y - 15, 330, y + 15, 0.9}}});
    }
    const auto profiles = tracker.finalize();
    REQUIRE(profiles.size() == 1);
    CHECK(profiles[0].status == TrackStatus::Arriving);
}

TEST_CASE("generated single-bee runs agree with the tracker bee-for-bee") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        SimConfig config = ideal_config(seed, 1, 30.0);
        config.spawn = {0.0, 1.0, 0.0};  // always enters from the bottom
        const SimOutput sim = generate(config);
        REQUIRE(sim.truth.size() == 1);

        Tracker tracker{config.geom};
        for (const FrameDetections& frame : sim.stream) tracker.step(frame);
        const auto profiles = tracker.finalize();
        REQUIRE(profiles.size() == 1);
        CHECK(profiles[0].status == sim.truth[0].final_status);
        CHECK(profiles[0].first_frame == sim.truth[0].first_frame);
        CHECK(profiles[0].last_frame == sim.truth[0].last_frame);
    }
}

TEST_CASE("same seed, same bytes") {
    SimConfig config;
    config.bee_count = 9;
    config.duration_s = 20.0;
    config.jitter_px = 1.0;
    config.dropout_prob = 0.05;
    config.seed = 123;

    const auto render = [&] {
        const SimOutput sim = generate(config);
        std::ostringstream stream_text, truth_text;
        write_detection_stream(sim.stream, stream_text);
        write_ground_truth(sim.truth, truth_text);
        return stream_text.str() + "\x1f" + truth_text.str();
    };
    CHECK(render() == render());

    SimConfig other = config;
    other.seed = 124;
    const SimOutput sim_a = generate(config);
    const SimOutput sim_b = generate(other);
    std::ostringstream a, b;
    write_detection_stream(sim_a.stream, a);
    write_detection_stream(sim_b.stream, b);
    CHECK(a.str() != b.str());
}

TEST_CASE("truth_summary buckets records like summarize_video") {
    std::vector<GroundTruthRecord> truth{
        {1, TrackStatus::Arriving, 0, 10, false, false},
        {2, TrackStatus::Arriving, 0, 10, true, false},
        {3, TrackStatus::Leaving, 5, 20, false, true},
    };
    const VideoSummary summary = truth_summary(truth);
    CHECK(summary.arriving == 2);
    CHECK(summary.leaving == 1);
    CHECK(summary.deck == 0);
    CHECK(summary.new_count == 0);
    CHECK(summary.pollen_tracks == 1);
    CHECK(summary.mite_tracks == 1);
    CHECK(summary.total_tracks == 3);
    CHECK(truth_summary({}) == VideoSummary{});
}

TEST_CASE("truth totals equal the number of spawned bees") {
    for (std::uint64_t seed = 40; seed < 48; ++seed) {
        SimConfig config;
        config.bee_count = 25;
        config.duration_s = 30.0;
        config.seed = seed;
        const SimOutput sim = generate(config);
        CHECK(truth_summary(sim.truth).total_tracks ==
              static_cast<long>(sim.truth.size()));
    }
}

TEST_CASE("ideal regime: tracker summary equals truth summary") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SimConfig config = ideal_config(seed);
        const SimOutput sim = generate(config);
        const VideoSummary tracked = track_and_summarize(sim, config.geom);
        const VideoSummary truth = truth_summary(sim.truth);
        INFO("seed " << seed);
        CHECK(counts_equal(tracked, truth));
    }
}

TEST_CASE("ideal regime: tracker assignments follow ground-truth identities") {
    const SimConfig config = ideal_config(5, 12, 40.0);
    const DetailedSimOutput sim = generate_detailed(config);

    Tracker tracker{config.geom};
    std::map<std::int64_t, std::int64_t> profile_to_bee;
    for (std::size_t f = 0; f < sim.frames.size(); ++f) {
        FrameDetections frame;
        frame.frame_index = static_cast<std::int64_t>(f);
        for (const SimFrameBox& sb : sim.frames[f]) frame.boxes.push_back(sb.box);
        tracker.step(frame);

        for (const TrackProfile& p : tracker.active()) {
            // find the bee whose emitted box midpoint the profile sits on
            std::int64_t bee = -1;
            for (const SimFrameBox& sb : sim.frames[f]) {
                const Midpoint m = midpoint(sb.box);
                if (m.x == p.last_midpoint.x && m.y == p.last_midpoint.y) {
                    bee = sb.bee_id;
                    break;
                }
            }
            REQUIRE(bee != -1);
            const auto [it, inserted] = profile_to_bee.emplace(p.id, bee);
            if (!inserted) {
                CHECK(it->second == bee);  // a profile never switches bees
            }
        }
    }
    // the mapping is injective: no two profiles share a bee
    std::map<std::int64_t, int> bee_hits;
    for (const auto& [profile, bee] : profile_to_bee) ++bee_hits[bee];
    for (const auto& [bee, hits] : bee_hits) {
        CHECK(hits == 1);
    }
    // and with matching ids in the ideal regime
    for (const auto& [profile, bee] : profile_to_bee) {
        CHECK(profile == bee);
    }
}

TEST_CASE("count error grows monotonically with dropout") {
    const std::vector<double> dropouts{0.0, 0.05, 0.1, 0.2};
    std::vector<double> mean_error;
    for (double dropout : dropouts) {
        long total = 0;
        const int seeds = 60;
        for (int seed = 0; seed < seeds; ++seed) {
            SimConfig config = ideal_config(static_cast<std::uint64_t>(seed), 8, 30.0);
            config.dropout_prob = dropout;
            const SimOutput sim = generate(config);
            total += count_error(track_and_summarize(sim, config.geom),
                                 truth_summary(sim.truth));
        }
        mean_error.push_back(static_cast<double>(total) / seeds);
    }
    CHECK(mean_error[0] == 0.0);
    for (std::size_t i = 1; i < mean_error.size(); ++i) {
        INFO("dropout step " << i << ": " << mean_error[i - 1] << " -> " << mean_error[i]);
        CHECK(mean_error[i] >= mean_error[i - 1]);
    }
}

TEST_CASE("simulator config validation") {
    SimConfig config;
    config.fps = 0;
    CHECK_THROWS_AS(validate(config), ValidationError);
    config = SimConfig{};
    config.dropout_prob = 1.5;
    CHECK_THROWS_AS(validate(config), ValidationError);
    config = SimConfig{};
    config.speed_px_per_frame = {5.0, 1.0};
    CHECK_THROWS_AS(validate(config), ValidationError);
    config = SimConfig{};
    config.spawn = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(validate(config), ValidationError);
    CHECK_NOTHROW(validate(SimConfig{}));
}
