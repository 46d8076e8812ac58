#include "hivemon/telemetry/store.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hivemon/errors.hpp"

namespace hivemon {

using nlohmann::json;

bool keys_equal(std::string_view a, std::string_view b) {
    const std::size_t n = std::max(a.size(), b.size());
    unsigned diff = a.size() == b.size() ? 0u : 1u;
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char ca = i < a.size() ? static_cast<unsigned char>(a[i]) : 0;
        const unsigned char cb = i < b.size() ? static_cast<unsigned char>(b[i]) : 0;
        diff |= static_cast<unsigned>(ca ^ cb);
    }
    return diff == 0;
}

std::pair<std::int64_t, std::int64_t> year_range_utc(int year) {
    using namespace std::chrono;
    const auto begin = sys_days{std::chrono::year{year} / January / 1};
    const auto end = sys_days{std::chrono::year{year + 1} / January / 1};
    return {duration_cast<seconds>(begin.time_since_epoch()).count(),
            duration_cast<seconds>(end.time_since_epoch()).count()};
}

std::vector<HiveSample> downsample_hourly(const std::vector<HiveSample>& series) {
    std::vector<HiveSample> out;
    bool have_bucket = false;
    std::int64_t bucket = 0;
    for (const HiveSample& sample : series) {
        // floor division so pre-1970 timestamps bucket correctly
        std::int64_t hour = sample.timestamp / 3600;
        if (sample.timestamp % 3600 < 0) --hour;
        if (!have_bucket || hour != bucket) {
            out.push_back(sample);
            bucket = hour;
            have_bucket = true;
        }
    }
    return out;
}

namespace {

// Append-only line log with durable writes.
class LineLog {
public:
    ~LineLog() { close(); }

    void open_for_append(const std::filesystem::path& path) {
        close();
        file_ = std::fopen(path.string().c_str(), "ab");
        if (!file_) {
            throw IoError("cannot open log file for append: " + path.string());
        }
    }

    void append(const std::string& line) {
        if (!file_) throw IoError("log file is not open");
        if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() ||
            std::fputc('\n', file_) == EOF || std::fflush(file_) != 0 ||
            ::fsync(fileno(file_)) != 0) {
            throw IoError("append to log file failed");
        }
    }

    void close() {
        if (file_) {
            std::fclose(file_);
            file_ = nullptr;
        }
    }

private:
    std::FILE* file_ = nullptr;
};

}  // namespace

struct HiveStore::Entry {
    HiveInfo info;
    mutable std::mutex mutex;
    std::vector<HiveSample> samples;
    std::optional<NetworkInfo> net;
    LineLog log;
    std::filesystem::path samples_path;
    std::filesystem::path network_path;
};

HiveStore::HiveStore(std::filesystem::path data_dir) : dir_(std::move(data_dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_ / "hives", ec);
    if (ec) {
        throw IoError("cannot create data directory " + dir_.string() + ": " + ec.message());
    }

    const auto registry_path = dir_ / "registry.json";
    if (std::filesystem::exists(registry_path)) {
        std::ifstream in(registry_path);
        std::stringstream buf;
        buf << in.rdbuf();
        if (!in.good() && !in.eof()) throw IoError("cannot read " + registry_path.string());
        json j;
        try {
            j = json::parse(buf.str());
        } catch (const json::exception& e) {
            throw FormatError("registry.json is not valid JSON: " + std::string(e.what()));
        }
        if (!j.is_array()) throw FormatError("registry.json must hold an array of hives");
        for (const json& h : j) {
            try {
                HiveInfo info;
                info.id = h.at("id").get<std::string>();
                info.name = h.value("name", "");
                info.location = h.value("location", "");
                info.key = h.at("key").get<std::string>();
                auto e = std::make_unique<Entry>();
                e->info = info;
                entries_.emplace(info.id, std::move(e));
            } catch (const json::exception& e) {
                throw FormatError("registry.json entry missing field: " + std::string(e.what()));
            }
        }
    }

    for (auto& [id, e] : entries_) {
        e->samples_path = dir_ / "hives" / (id + ".samples.jsonl");
        e->network_path = dir_ / "hives" / (id + ".network.json");
        if (std::filesystem::exists(e->samples_path)) {
            std::ifstream in(e->samples_path);
            std::string line;
            std::size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty()) continue;
                try {
                    e->samples.push_back(sample_from_json(line));
                } catch (const FormatError& err) {
                    throw FormatError(e->samples_path.string() + ":" +
                                      std::to_string(line_no) + ": " + err.what());
                }
            }
            if (in.bad()) throw IoError("cannot read " + e->samples_path.string());
        }
        if (std::filesystem::exists(e->network_path)) {
            std::ifstream in(e->network_path);
            std::stringstream buf;
            buf << in.rdbuf();
            try {
                e->net = json::parse(buf.str()).get<NetworkInfo>();
            } catch (const json::exception& err) {
                throw FormatError(e->network_path.string() + ": " + err.what());
            }
        }
        e->log.open_for_append(e->samples_path);
    }
}

HiveStore::~HiveStore() = default;

HiveStore::Entry& HiveStore::entry(const std::string& hive_id) const {
    const auto it = entries_.find(hive_id);
    if (it == entries_.end()) {
        throw NotFoundError("unknown hive '" + hive_id + "'");
    }
    return *it->second;
}

void HiveStore::check_key(const Entry& e, std::string_view key) const {
    if (!keys_equal(e.info.key, key)) {
        throw AuthError("authentication key rejected for hive '" + e.info.id + "'");
    }
}

void HiveStore::persist_registry() {
    json j = json::array();
    for (const auto& [id, e] : entries_) {
        j.push_back({{"id", e->info.id},
                     {"name", e->info.name},
                     {"location", e->info.location},
                     {"key", e->info.key}});
    }
    const auto path = dir_ / "registry.json";
    const auto tmp = dir_ / "registry.json.tmp";
    {
        std::ofstream out(tmp);
        out << j.dump(2) << '\n';
        if (!out) throw IoError("cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot replace registry: " + ec.message());
}

void HiveStore::register_hive(const HiveInfo& info) {
    if (info.id.empty() || info.key.empty()) {
        throw ValidationError("hive registration needs a non-empty id and key");
    }
    std::unique_lock lock(registry_mutex_);
    if (entries_.count(info.id)) {
        throw ValidationError("hive '" + info.id + "' already registered");
    }
    auto e = std::make_unique<Entry>();
    e->info = info;
    e->samples_path = dir_ / "hives" / (info.id + ".samples.jsonl");
    e->network_path = dir_ / "hives" / (info.id + ".network.json");
    e->log.open_for_append(e->samples_path);
    entries_.emplace(info.id, std::move(e));
    persist_registry();
}

std::vector<HiveInfo> HiveStore::hives() const {
    std::shared_lock lock(registry_mutex_);
    std::vector<HiveInfo> out;
    out.reserve(entries_.size());
    for (const auto& [id, e] : entries_) out.push_back(e->info);
    return out;
}

bool HiveStore::has_hive(const std::string& hive_id) const {
    std::shared_lock lock(registry_mutex_);
    return entries_.count(hive_id) > 0;
}

std::uint64_t HiveStore::upload_data(std::string_view key, const std::string& hive_id,
                                     const HiveSample& sample) {
    std::shared_lock registry_lock(registry_mutex_);
    Entry& e = entry(hive_id);
    check_key(e, key);
    validate(sample);

    std::lock_guard lock(e.mutex);
    if (!e.samples.empty() && sample.timestamp <= e.samples.back().timestamp) {
        throw OrderingError("sample timestamp " + std::to_string(sample.timestamp) +
                            " not newer than stored " +
                            std::to_string(e.samples.back().timestamp));
    }
    e.log.append(sample_to_json(sample));
    e.samples.push_back(sample);
    return e.samples.size();
}

std::optional<HiveSample> HiveStore::latest(const std::string& hive_id) const {
    std::shared_lock registry_lock(registry_mutex_);
    const Entry& e = entry(hive_id);
    std::lock_guard lock(e.mutex);
    if (e.samples.empty()) return std::nullopt;
    return e.samples.back();
}

std::vector<HiveSample> HiveStore::history(const std::string& hive_id, int year) const {
    std::shared_lock registry_lock(registry_mutex_);
    const Entry& e = entry(hive_id);
    const auto [begin, end] = year_range_utc(year);
    std::vector<HiveSample> in_year;
    {
        std::lock_guard lock(e.mutex);
        for (const HiveSample& s : e.samples) {
            if (s.timestamp >= begin && s.timestamp < end) in_year.push_back(s);
        }
    }
    return downsample_hourly(in_year);
}

std::vector<HiveSample> HiveStore::samples(const std::string& hive_id) const {
    std::shared_lock registry_lock(registry_mutex_);
    const Entry& e = entry(hive_id);
    std::lock_guard lock(e.mutex);
    return e.samples;
}

void HiveStore::upload_network(std::string_view key, const std::string& hive_id,
                               const NetworkInfo& info) {
    std::shared_lock registry_lock(registry_mutex_);
    Entry& e = entry(hive_id);
    check_key(e, key);

    std::lock_guard lock(e.mutex);
    const auto tmp = e.network_path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << json(info).dump(2) << '\n';
        if (!out) throw IoError("cannot write " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, e.network_path, ec);
    if (ec) throw IoError("cannot replace network descriptor: " + ec.message());
    e.net = info;
}

std::optional<NetworkInfo> HiveStore::network(const std::string& hive_id) const {
    std::shared_lock registry_lock(registry_mutex_);
    const Entry& e = entry(hive_id);
    std::lock_guard lock(e.mutex);
    return e.net;
}

}  // namespace hivemon
