#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "hivemon/telemetry/sample.hpp"

namespace hivemon {

/// Reduce a timestamp-ordered series to one sample per calendar hour (UTC):
/// the earliest sample in each hour; empty hours are omitted. Idempotent.
std::vector<HiveSample> downsample_hourly(const std::vector<HiveSample>& series);

/// UTC second range [begin, end) of a calendar year.
std::pair<std::int64_t, std::int64_t> year_range_utc(int year);

/// Append-only per-hive sample log plus hive registry, persisted under a
/// data directory:
///
///   <dir>/registry.json            hive registry (id, name, location, key)
///   <dir>/hives/<id>.samples.jsonl one JSON sample per line, append-only
///   <dir>/hives/<id>.network.json  last uploaded network descriptor
///
/// Appends are flushed and fsync'ed before the call returns. Uploads to
/// distinct hives may run concurrently; per-hive writes serialize on the
/// hive's mutex, and reads may run alongside writes.
class HiveStore {
public:
    explicit HiveStore(std::filesystem::path data_dir);
    ~HiveStore();

    HiveStore(const HiveStore&) = delete;
    HiveStore& operator=(const HiveStore&) = delete;

    void register_hive(const HiveInfo& info);
    std::vector<HiveInfo> hives() const;
    bool has_hive(const std::string& hive_id) const;

    /// Validates, authenticates, enforces strictly increasing timestamps,
    /// appends durably, and returns the 1-based sequence number.
    std::uint64_t upload_data(std::string_view key, const std::string& hive_id,
                              const HiveSample& sample);

    /// Most recent sample, or nullopt while the hive has no data (the
    /// "--" state).
    std::optional<HiveSample> latest(const std::string& hive_id) const;

    /// Hourly-downsampled series for one calendar year (UTC).
    std::vector<HiveSample> history(const std::string& hive_id, int year) const;

    /// Raw samples in upload order.
    std::vector<HiveSample> samples(const std::string& hive_id) const;

    void upload_network(std::string_view key, const std::string& hive_id,
                        const NetworkInfo& info);
    std::optional<NetworkInfo> network(const std::string& hive_id) const;

    const std::filesystem::path& data_dir() const { return dir_; }

private:
    struct Entry;

    Entry& entry(const std::string& hive_id) const;
    void check_key(const Entry& e, std::string_view key) const;
    void persist_registry();

    std::filesystem::path dir_;
    mutable std::shared_mutex registry_mutex_;
    std::map<std::string, std::unique_ptr<Entry>> entries_;
};

/// Timing-independent token comparison.
bool keys_equal(std::string_view a, std::string_view b);

}  // namespace hivemon
