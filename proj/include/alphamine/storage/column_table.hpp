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

#include <filesystem>
#include <map>
#include <memory>
#include <vector>

#include "alphamine/storage/engine.hpp"
#include "alphamine/storage/table_lock.hpp"

namespace alphamine::storage {

/// Log-structured column table.
///
/// A write is appended to `wal.log` first and then applied to the memstore, a
/// key-sorted in-memory buffer. When the memstore reaches the flush threshold
/// (or on commit) it is written out as immutable segments `seg-<n>.dat`, each
/// at most 64 KiB before compression, and the WAL is truncated. Segments keep
/// one sorted key vector shared by per-column value runs, so a scan decodes
/// only the columns it projects. Reads merge the memstore with segments,
/// newest source winning for a key.
class ColumnTable final : public Table {
public:
    struct SegmentInfo {
        std::uint64_t id = 0;
        std::uint64_t file_bytes = 0;   // on disk, after compression
        std::uint64_t image_bytes = 0;  // file size before compression
        std::size_t records = 0;
    };

    ColumnTable(std::filesystem::path dir, TableSchema schema, Codec codec, const EngineConfig& config,
                Instrumentation& instrumentation, bool create);
    ~ColumnTable() override;

    const TableSchema& schema() const noexcept override { return schema_; }
    Codec codec() const noexcept override { return codec_; }
    EngineKind kind() const noexcept override { return EngineKind::column; }

    LoadReport bulk_load(std::span<const Record> records) override;
    void insert(const Record& record) override;
    void insert_batch(std::span<const Record> records, std::size_t batch_size) override;
    std::vector<Row> scan(const ScanSpec& spec = {}) const override;
    void commit() override;
    std::vector<std::uint64_t> flush() override;
    std::vector<std::uint64_t> compact() override;
    std::uint64_t disk_usage() const override;
    std::size_t record_count() const override;
    void simulate_crash() override;
    void recover() override;

    std::vector<SegmentInfo> segments() const;
    std::size_t memstore_bytes() const;
    std::size_t memstore_entries() const;
    /// WAL bytes handed to the OS (excludes an unsynced async buffer).
    std::uint64_t wal_bytes() const;

    struct Segment;

private:
    void ensure_open() const;
    void check_records(std::span<const Record> records) const;
    void append_wal(const Bytes& entries);
    void apply_to_memstore(const Record& record);
    void maybe_flush();
    std::vector<std::uint64_t> flush_locked();
    std::vector<Row> scan_locked(const ScanSpec& spec) const;

    std::filesystem::path dir_;
    TableSchema schema_;
    Codec codec_;
    EngineConfig config_;
    Instrumentation& instrumentation_;

    mutable TableLock mutex_;
    bool crashed_ = false;
    std::map<Key, Record> memstore_;
    std::size_t memstore_bytes_ = 0;
    std::vector<std::shared_ptr<const Segment>> segments_;  // ascending id
    std::uint64_t next_segment_id_ = 1;

    class Wal;
    std::unique_ptr<Wal> wal_;
};

} // namespace alphamine::storage
