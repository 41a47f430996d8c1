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

/// Row-oriented table: whole records packed into fixed 16 KiB pages, located
/// through an ordered primary-key index. Every write is synchronous.
///
/// Files: `pages.dat` holds page p at offset p * 16 KiB; `index.dat` is an
/// append-only log of (key, page, slot) entries. With a codec, each page is
/// stored as [u32 frame length][u32 slot bytes][frame] inside a slot of the
/// configured compressed size; a page whose frame does not fit is split in
/// two and both halves are recompressed.
class RowTable final : public Table {
public:
    RowTable(std::filesystem::path dir, TableSchema schema, Codec codec, const EngineConfig& config,
             Instrumentation& instrumentation, bool create);
    ~RowTable() override;

    const TableSchema& schema() const noexcept override { return schema_; }
    Codec codec() const noexcept override { return codec_; }
    EngineKind kind() const noexcept override { return EngineKind::row; }

    LoadReport bulk_load(std::span<const Record> records) override;
    void insert(const Record& record) override;
    void insert_batch(std::span<const Record> records, std::size_t batch_size) override;
    std::vector<Row> scan(const ScanSpec& spec = {}) const override;
    void commit() override {}
    std::uint64_t disk_usage() const override;
    std::size_t record_count() const override;
    void simulate_crash() override;
    void recover() override;

    std::size_t page_count() const;
    /// Bytes each page occupies on disk: 16 KiB, or its compressed slot size.
    std::vector<std::size_t> page_disk_sizes() const;

private:
    struct Page {
        Bytes bytes = Bytes(kRowPageBytes, 0);
        std::vector<std::uint32_t> offsets;  // start of each [u32 len][record] slot
        std::uint32_t used = 0;
        std::uint32_t disk_bytes = 0;
        bool dirty = false;
    };
    struct SlotRef {
        std::uint32_t page = 0;
        std::uint32_t slot = 0;
    };

    void apply_group(std::span<const Record> group);
    SlotRef place(const Bytes& encoded);
    ByteView record_bytes(SlotRef ref) const;
    void log_index_entry(const Key& key, SlotRef ref);
    void split_page(std::uint32_t page);
    void write_dirty_pages();
    void write_page(std::uint32_t page);
    void persist();
    void ensure_open() const;
    std::size_t page_capacity() const noexcept;

    std::filesystem::path dir_;
    TableSchema schema_;
    Codec codec_;
    EngineConfig config_;
    Instrumentation& instrumentation_;

    mutable TableLock mutex_;
    bool crashed_ = false;
    std::vector<Page> pages_;
    std::map<Key, SlotRef> index_;
    Bytes pending_index_log_;
    class Files;
    std::unique_ptr<Files> files_;
};

} // namespace alphamine::storage
