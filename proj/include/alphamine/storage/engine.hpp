/************************************************************************
Copyright 2026 The alphamine Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
**************************************************************************/
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alphamine/storage/codec.hpp"
#include "alphamine/storage/schema.hpp"

namespace alphamine::storage {

enum class EngineKind : std::uint8_t { row, column };

std::string_view to_string(EngineKind kind) noexcept;
EngineKind parse_engine_kind(std::string_view name);

enum class Durability : std::uint8_t {
    fsync,  // every acknowledged WAL append is forced to disk
    async,  // WAL appends are buffered and reach disk on buffer fill or commit
};

inline constexpr std::size_t kRowPageBytes = 16 * 1024;
inline constexpr std::size_t kMaxSegmentBytes = 64 * 1024;

struct EngineConfig {
    std::size_t flush_threshold_bytes = 1 << 20;
    std::size_t row_buffer_bytes = 8 << 20;
    std::size_t column_buffer_bytes = 20 << 20;
    Durability durability = Durability::fsync;
    /// Codec for tables created through the mining path.
    Codec compression = Codec::none;
    /// Row-engine slot size for a compressed 16 KiB page: 1, 2, 4, 8 or 16 KiB.
    std::size_t compressed_page_bytes = 8 * 1024;

    /// Applies one `key=value` setting. Throws Errc::argument on unknown keys
    /// or bad values.
    void set(std::string_view key, std::string_view value);

    /// Reads a key=value file; blank lines and lines starting with '#' are skipped.
    static EngineConfig load(const std::filesystem::path& path);
};

/// Monotonic nanosecond clock. Injectable so tests can drive timings.
using Clock = std::function<std::int64_t()>;

std::int64_t steady_now_ns();

struct IoTimes {
    std::int64_t read_ns = 0;
    std::int64_t write_ns = 0;
};

/// Accumulates time spent inside table reads and writes.
class Instrumentation {
public:
    explicit Instrumentation(Clock clock = {});

    std::int64_t now() const { return clock_(); }
    void add_read(std::int64_t ns) noexcept { read_ns_ += ns; }
    void add_write(std::int64_t ns) noexcept { write_ns_ += ns; }
    IoTimes totals() const noexcept { return {read_ns_.load(), write_ns_.load()}; }

    enum class Kind { read, write };

    class Span {
    public:
        Span(Instrumentation& inst, Kind kind) : inst_(inst), kind_(kind), start_(inst.now()) {}
        Span(const Span&) = delete;
        Span& operator=(const Span&) = delete;
        ~Span() {
            const auto elapsed = inst_.now() - start_;
            kind_ == Kind::read ? inst_.add_read(elapsed) : inst_.add_write(elapsed);
        }
        std::int64_t elapsed() const { return inst_.now() - start_; }

    private:
        Instrumentation& inst_;
        Kind kind_;
        std::int64_t start_;
    };

private:
    Clock clock_;
    std::atomic<std::int64_t> read_ns_{0};
    std::atomic<std::int64_t> write_ns_{0};
};

struct LoadReport {
    std::size_t records_loaded = 0;
    std::chrono::nanoseconds elapsed{0};
};

/// One table of either engine. A table has a single writer; scans may run
/// concurrently with each other and never see a partially applied batch.
class Table {
public:
    virtual ~Table() = default;

    virtual const TableSchema& schema() const noexcept = 0;
    virtual Codec codec() const noexcept = 0;
    virtual EngineKind kind() const noexcept = 0;

    /// Mass ingestion path. Row tables reject duplicate keys with
    /// Errc::uniqueness and leave the table unchanged; column tables keep the
    /// last record written for a key.
    virtual LoadReport bulk_load(std::span<const Record> records) = 0;

    virtual void insert(const Record& record) = 0;

    /// Buffers records client side and applies each buffer fill as one round
    /// trip. A buffer fills at `batch_size` records or at the engine's
    /// buffer byte limit, whichever comes first.
    virtual void insert_batch(std::span<const Record> records, std::size_t batch_size) = 0;

    /// Key-ordered, projected rows. Unknown projection columns raise Errc::schema.
    virtual std::vector<Row> scan(const ScanSpec& spec = {}) const = 0;

    /// Ends a unit of work. Column tables flush their memstore.
    virtual void commit() = 0;

    /// Column tables only; row tables raise Errc::unsupported.
    virtual std::vector<std::uint64_t> flush();
    virtual std::vector<std::uint64_t> compact();

    /// Data bytes on disk, index structures excluded.
    virtual std::uint64_t disk_usage() const = 0;
    virtual std::size_t record_count() const = 0;

    /// Drops all volatile state as a process crash would. The table is
    /// unusable until recover() rebuilds it from its files.
    virtual void simulate_crash() = 0;
    virtual void recover() = 0;
};

/// Directory-backed set of tables of one engine kind. Reopening a directory
/// recovers every table found in it.
class StorageEngine {
public:
    StorageEngine(EngineKind kind, std::filesystem::path root, EngineConfig config = {}, Clock clock = {});
    ~StorageEngine();
    StorageEngine(const StorageEngine&) = delete;
    StorageEngine& operator=(const StorageEngine&) = delete;

    EngineKind kind() const noexcept { return kind_; }
    const EngineConfig& config() const noexcept { return config_; }
    const std::filesystem::path& root() const noexcept { return root_; }
    Instrumentation& instrumentation() noexcept { return instrumentation_; }
    const Instrumentation& instrumentation() const noexcept { return instrumentation_; }

    /// Throws Errc::duplicate_table if the name is taken.
    Table& create_table(const TableSchema& schema, Codec codec = Codec::none);
    /// Throws Errc::unknown_table.
    Table& table(std::string_view name);
    const Table& table(std::string_view name) const;
    bool has_table(std::string_view name) const;
    void drop_table(std::string_view name);
    std::vector<std::string> table_names() const;

private:
    std::unique_ptr<Table> open_table(const TableSchema& schema, Codec codec, bool create);

    EngineKind kind_;
    std::filesystem::path root_;
    EngineConfig config_;
    Instrumentation instrumentation_;
    std::map<std::string, std::unique_ptr<Table>, std::less<>> tables_;
};

} // namespace alphamine::storage
