#include <doctest.h>

#include <algorithm>
#include <random>

#include "hivemon/analytics.hpp"
#include "hivemon/errors.hpp"
#include "support/testrng.hpp"

using namespace hivemon;

namespace {

TrackProfile profile_with_snapshots(std::int64_t id, std::vector<std::int64_t> frames,
                                    TrackStatus status = TrackStatus::Deck) {
    TrackProfile p;
    p.id = id;
    p.status = status;
    for (std::int64_t f : frames) {
        p.snapshots.push_back(
            SnapshotRef{f, DetectionBox{0, 0, 10, 10, 0.9}, CrossingEvent::ArriveCross});
    }
    if (!frames.empty()) {
        p.first_frame = frames.front();
        p.last_frame = frames.back();
    }
    return p;
}

SecondaryDetection detection(std::int64_t id, std::int64_t frame, SecondaryClass cls,
                             double conf) {
    SecondaryDetection d;
    d.profile_id = id;
    d.frame_index = frame;
    d.cls = cls;
    d.confidence = conf;
    d.box = DetectionBox{0, 0, 5, 5, conf};
    return d;
}

}  // namespace

TEST_CASE("a confident pollen detection flags only that profile") {
    const std::vector<TrackProfile> profiles{profile_with_snapshots(1, {10, 20}),
                                             profile_with_snapshots(2, {15})};
    const auto flags =
        associate_secondary(profiles, {detection(1, 20, SecondaryClass::Pollen, 0.9)});
    CHECK(flags.at(1) == PresenceFlags{true, false});
    CHECK(flags.at(2) == PresenceFlags{false, false});
}

TEST_CASE("no detections means every profile is unflagged") {
    const std::vector<TrackProfile> profiles{profile_with_snapshots(1, {10}),
                                             profile_with_snapshots(2, {15})};
    const auto flags = associate_secondary(profiles, {});
    REQUIRE(flags.size() == 2);
    for (const auto& [id, f] : flags) {
        CHECK(f == PresenceFlags{false, false});
    }
}

TEST_CASE("duplicate detections on one snapshot count the profile once") {
    const std::vector<TrackProfile> profiles{profile_with_snapshots(1, {10})};
    const std::vector<SecondaryDetection> detections{
        detection(1, 10, SecondaryClass::Pollen, 0.8),
        detection(1, 10, SecondaryClass::Pollen, 0.95)};
    const auto flags = associate_secondary(profiles, detections);
    const VideoSummary summary = summarize_video(profiles, flags);
    // brute-force recount: distinct flagged profile ids
    long expected = 0;
    for (const TrackProfile& p : profiles) {
        if (std::any_of(detections.begin(), detections.end(), [&](const SecondaryDetection& d) {
                return d.profile_id == p.id && d.cls == SecondaryClass::Pollen &&
                       d.confidence >= 0.25;
            })) {
            ++expected;
        }
    }
    CHECK(summary.pollen_tracks == expected);
    CHECK(summary.pollen_tracks == 1);
}

TEST_CASE("below-threshold detections do not flag") {
    const std::vector<TrackProfile> profiles{profile_with_snapshots(1, {10})};
    const auto flags =
        associate_secondary(profiles, {detection(1, 10, SecondaryClass::Pollen, 0.1)});
    CHECK(flags.at(1) == PresenceFlags{false, false});

    SecondaryThresholds strict;
    strict.mite = 0.9;
    const auto strict_flags = associate_secondary(
        profiles, {detection(1, 10, SecondaryClass::Mite, 0.5)}, strict);
    CHECK(strict_flags.at(1) == PresenceFlags{false, false});
}

TEST_CASE("mite detections flag independently of pollen") {
    const std::vector<TrackProfile> profiles{profile_with_snapshots(1, {10})};
    const auto flags =
        associate_secondary(profiles, {detection(1, 10, SecondaryClass::Mite, 0.5)});
    CHECK(flags.at(1) == PresenceFlags{false, true});
}

TEST_CASE("a dangling snapshot reference raises an association error naming the id") {
    const std::vector<TrackProfile> profiles{profile_with_snapshots(1, {10})};
    try {
        associate_secondary(profiles, {detection(7, 123, SecondaryClass::Pollen, 0.9)});
        FAIL("expected AssociationError");
    } catch (const AssociationError& e) {
        const std::string what = e.what();
        CHECK(what.find('7') != std::string::npos);
        CHECK(what.find("123") != std::string::npos);
    }
    // existing profile, wrong frame
    CHECK_THROWS_AS(
        associate_secondary(profiles, {detection(1, 99, SecondaryClass::Pollen, 0.9)}),
        AssociationError);
}

TEST_CASE("association is order-independent in the detections") {
    testsupport::Rng rng(51);
    std::vector<TrackProfile> profiles;
    for (int i = 1; i <= 6; ++i) {
        profiles.push_back(profile_with_snapshots(i, {i * 10, i * 10 + 1}));
    }
    std::vector<SecondaryDetection> detections;
    for (int i = 0; i < 30; ++i) {
        const int id = static_cast<int>(rng.uniform_int(1, 6));
        const std::int64_t f = id * 10 + rng.uniform_int(0, 1);
        detections.push_back(detection(id, f,
                                       rng.chance(0.5) ? SecondaryClass::Pollen
                                                       : SecondaryClass::Mite,
                                       rng.uniform01()));
    }
    const auto baseline = associate_secondary(profiles, detections);
    std::mt19937 shuffler(99);
    for (int round = 0; round < 10; ++round) {
        std::shuffle(detections.begin(), detections.end(), shuffler);
        CHECK(associate_secondary(profiles, detections) == baseline);
    }
    // idempotence: feeding the same list twice over changes nothing
    auto doubled = detections;
    doubled.insert(doubled.end(), detections.begin(), detections.end());
    CHECK(associate_secondary(profiles, doubled) == baseline);
}

TEST_CASE("summarize buckets each profile exactly once") {
    std::vector<TrackProfile> profiles;
    for (int i = 0; i < 17; ++i) {
        TrackProfile p;
        p.id = i + 1;
        p.status = TrackStatus::Arriving;
        profiles.push_back(p);
    }
    for (int i = 0; i < 19; ++i) {
        TrackProfile p;
        p.id = 100 + i;
        p.status = TrackStatus::Leaving;
        profiles.push_back(p);
    }
    const VideoSummary summary = summarize_video(profiles);
    CHECK(summary.arriving == 17);
    CHECK(summary.leaving == 19);
    CHECK(summary.deck == 0);
    CHECK(summary.new_count == 0);
    CHECK(summary.total_tracks == 36);
    CHECK(summary.arriving + summary.leaving + summary.deck + summary.new_count ==
          summary.total_tracks);
    CHECK_FALSE(summary.mean_size_mm.has_value());
}

TEST_CASE("summarize averages only extracted sizes") {
    std::vector<TrackProfile> profiles(4);
    profiles[0].id = 1;
    profiles[0].size_mm = 10.0;
    profiles[1].id = 2;
    profiles[1].size_mm = 12.0;
    profiles[2].id = 3;
    profiles[2].size_mm = 14.0;
    profiles[3].id = 4;  // unsized, excluded from the mean
    const VideoSummary summary = summarize_video(profiles);
    REQUIRE(summary.mean_size_mm.has_value());
    CHECK(*summary.mean_size_mm == doctest::Approx(12.0));
}

TEST_CASE("empty profile list summarizes to zero") {
    const VideoSummary summary = summarize_video({});
    CHECK(summary == VideoSummary{});
}

TEST_CASE("bucketing is a partition on random profile sets") {
    testsupport::Rng rng(52);
    for (int round = 0; round < 50; ++round) {
        std::vector<TrackProfile> profiles;
        const int n = static_cast<int>(rng.uniform_int(0, 40));
        for (int i = 0; i < n; ++i) {
            TrackProfile p;
            p.id = i + 1;
            p.status = static_cast<TrackStatus>(rng.uniform_int(0, 3));
            profiles.push_back(p);
        }
        const VideoSummary s = summarize_video(profiles);
        CHECK(s.arriving + s.leaving + s.deck + s.new_count == s.total_tracks);
        CHECK(s.total_tracks == n);
    }
}
