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
#include "alphamine/storage/row_table.hpp"

#include <algorithm>
#include <array>
#include <mutex>

#include "encoding.hpp"
#include "file.hpp"

namespace alphamine::storage {

namespace {

constexpr std::uint32_t kPageHeaderBytes = 8;       // u32 slot count, u32 used bytes
constexpr std::uint32_t kSlotPrefixBytes = 8;       // u32 frame length, u32 slot bytes
// Headroom that lets a stored (level 0) deflate frame of a full page fit a
// 16 KiB slot: framing, stored-block headers and the slot prefix.
constexpr std::uint32_t kCompressedReserve = 64;
constexpr std::array<std::uint32_t, 5> kCompressedSlotSizes{1024, 2048, 4096, 8192, 16384};

void put_u32(Bytes& b, std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint32_t get_u32(ByteView b, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[at + i]} << (8 * i);
    return v;
}

} // namespace

class RowTable::Files {
public:
    File pages;
    File index;
};

RowTable::RowTable(std::filesystem::path dir, TableSchema schema, Codec codec, const EngineConfig& config,
                   Instrumentation& instrumentation, bool create)
    : dir_(std::move(dir)),
      schema_(std::move(schema)),
      codec_(codec),
      config_(config),
      instrumentation_(instrumentation) {
    if (codec_ != Codec::none &&
        std::find(kCompressedSlotSizes.begin(), kCompressedSlotSizes.end(), config_.compressed_page_bytes) ==
            kCompressedSlotSizes.end()) {
        throw Error(Errc::argument, "compressed_page_bytes must be 1, 2, 4, 8 or 16 KiB");
    }
    if (create) {
        files_ = std::make_unique<Files>();
        files_->pages = File::create(dir_ / "pages.dat");
        files_->index = File::create(dir_ / "index.dat");
    } else {
        crashed_ = true;
        recover();
    }
}

RowTable::~RowTable() = default;

std::size_t RowTable::page_capacity() const noexcept {
    return codec_ == Codec::none ? kRowPageBytes : kRowPageBytes - kCompressedReserve;
}

void RowTable::ensure_open() const {
    if (crashed_) throw Error(Errc::unsupported, "table '" + schema_.name() + "' needs recover() after a crash");
}

RowTable::SlotRef RowTable::place(const Bytes& encoded) {
    const std::size_t need = 4 + encoded.size();
    if (kPageHeaderBytes + need > page_capacity()) {
        throw Error(Errc::schema, "record of " + std::to_string(encoded.size()) + " bytes does not fit a page");
    }
    if (pages_.empty() || pages_.back().used + need > page_capacity()) {
        pages_.emplace_back();
        pages_.back().used = kPageHeaderBytes;
    }
    Page& page = pages_.back();
    const std::uint32_t at = page.used;
    put_u32(page.bytes, at, static_cast<std::uint32_t>(encoded.size()));
    std::copy(encoded.begin(), encoded.end(), page.bytes.begin() + at + 4);
    page.offsets.push_back(at);
    page.used += static_cast<std::uint32_t>(need);
    page.dirty = true;
    return {static_cast<std::uint32_t>(pages_.size() - 1), static_cast<std::uint32_t>(page.offsets.size() - 1)};
}

ByteView RowTable::record_bytes(SlotRef ref) const {
    const Page& page = pages_[ref.page];
    const std::uint32_t at = page.offsets[ref.slot];
    const std::uint32_t len = get_u32(page.bytes, at);
    return ByteView(page.bytes).subspan(at + 4, len);
}

void RowTable::log_index_entry(const Key& key, SlotRef ref) {
    Bytes key_bytes;
    encoding::Writer kw(key_bytes);
    encoding::write_key(kw, schema_, key);
    encoding::Writer w(pending_index_log_);
    w.u32(static_cast<std::uint32_t>(key_bytes.size()));
    w.raw(key_bytes);
    w.u32(ref.page);
    w.u32(ref.slot);
}

void RowTable::apply_group(std::span<const Record> group) {
    std::vector<Bytes> encoded;
    encoded.reserve(group.size());
    for (const Record& r : group) {
        validate_record(schema_, r);
        Bytes b;
        b.reserve(encoding::encoded_size(r));
        encoding::Writer w(b);
        encoding::write_record(w, schema_, r);
        if (kPageHeaderBytes + 4 + b.size() > page_capacity()) {
            throw Error(Errc::schema, "record of " + std::to_string(b.size()) + " bytes does not fit a page");
        }
        encoded.push_back(std::move(b));
    }

    // Rollback point: new records only ever touch the last page or new pages.
    const std::size_t page_count_before = pages_.size();
    const std::size_t last_slots = pages_.empty() ? 0 : pages_.back().offsets.size();
    const std::uint32_t last_used = pages_.empty() ? 0 : pages_.back().used;
    std::vector<std::map<Key, SlotRef>::iterator> inserted;
    inserted.reserve(group.size());

    for (std::size_t i = 0; i < group.size(); ++i) {
        Key key = key_of(schema_, group[i]);
        auto [it, fresh] = index_.try_emplace(std::move(key));
        if (!fresh) {
            const std::string message =
                "duplicate primary key " + to_display(it->first) + " in table '" + schema_.name() + "'";
            for (auto& done : inserted) index_.erase(done);
            pages_.resize(page_count_before);
            if (!pages_.empty()) {
                Page& last = pages_.back();
                last.offsets.resize(last_slots);
                std::fill(last.bytes.begin() + last_used, last.bytes.end(), 0);
                last.used = last_used;
                last.dirty = false;
            }
            pending_index_log_.clear();
            throw Error(Errc::uniqueness, message);
        }
        inserted.push_back(it);
        it->second = place(encoded[i]);
        log_index_entry(it->first, it->second);
    }
    persist();
}

void RowTable::persist() {
    write_dirty_pages();
    if (!pending_index_log_.empty()) {
        files_->index.append(pending_index_log_);
        pending_index_log_.clear();
    }
    files_->pages.sync();
    files_->index.sync();
}

void RowTable::write_dirty_pages() {
    // Splitting appends pages, so the bound is re-read every iteration.
    for (std::uint32_t p = 0; p < pages_.size(); ++p) {
        if (pages_[p].dirty) write_page(p);
    }
}

void RowTable::write_page(std::uint32_t p) {
    {
        Page& page = pages_[p];
        put_u32(page.bytes, 0, static_cast<std::uint32_t>(page.offsets.size()));
        put_u32(page.bytes, 4, page.used);
    }
    if (codec_ == Codec::none) {
        files_->pages.pwrite_all(pages_[p].bytes, std::uint64_t{p} * kRowPageBytes);
        pages_[p].disk_bytes = kRowPageBytes;
        pages_[p].dirty = false;
        return;
    }

    const ByteView image = ByteView(pages_[p].bytes).first(pages_[p].used);
    Bytes frame = compress_block(codec_, image);
    const std::size_t target = config_.compressed_page_bytes;
    if (kSlotPrefixBytes + frame.size() > target && pages_[p].offsets.size() > 1) {
        split_page(p);
        write_page(p);
        return;
    }
    if (kSlotPrefixBytes + frame.size() > kRowPageBytes) frame = compress_block(codec_, image, 0);

    std::uint32_t slot = static_cast<std::uint32_t>(target);
    for (std::uint32_t size : kCompressedSlotSizes) {
        if (size >= target && size >= kSlotPrefixBytes + frame.size()) {
            slot = size;
            break;
        }
    }
    Bytes out(slot, 0);
    put_u32(out, 0, static_cast<std::uint32_t>(frame.size()));
    put_u32(out, 4, slot);
    std::copy(frame.begin(), frame.end(), out.begin() + kSlotPrefixBytes);
    files_->pages.pwrite_all(out, std::uint64_t{p} * kRowPageBytes);
    pages_[p].disk_bytes = slot;
    pages_[p].dirty = false;
}

void RowTable::split_page(std::uint32_t p) {
    const std::size_t n = pages_[p].offsets.size();
    const std::size_t keep = n / 2;

    Page moved;
    moved.used = kPageHeaderBytes;
    moved.dirty = true;
    const auto new_index = static_cast<std::uint32_t>(pages_.size());
    for (std::size_t s = keep; s < n; ++s) {
        const ByteView rec = record_bytes({p, static_cast<std::uint32_t>(s)});
        encoding::Reader reader(rec);
        const Key key = key_of(schema_, encoding::read_record(reader, schema_));
        const std::uint32_t at = moved.used;
        put_u32(moved.bytes, at, static_cast<std::uint32_t>(rec.size()));
        std::copy(rec.begin(), rec.end(), moved.bytes.begin() + at + 4);
        moved.offsets.push_back(at);
        moved.used += static_cast<std::uint32_t>(4 + rec.size());
        const SlotRef ref{new_index, static_cast<std::uint32_t>(moved.offsets.size() - 1)};
        index_[key] = ref;
        log_index_entry(key, ref);
    }

    Page& page = pages_[p];
    const std::uint32_t cut = page.offsets[keep];
    std::fill(page.bytes.begin() + cut, page.bytes.end(), 0);
    page.used = cut;
    page.offsets.resize(keep);
    page.dirty = true;
    pages_.push_back(std::move(moved));
}

LoadReport RowTable::bulk_load(std::span<const Record> records) {
    std::unique_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::write);
    const auto start = instrumentation_.now();
    apply_group(records);
    return {records.size(), std::chrono::nanoseconds{instrumentation_.now() - start}};
}

void RowTable::insert(const Record& record) {
    std::unique_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::write);
    apply_group(std::span<const Record>(&record, 1));
}

void RowTable::insert_batch(std::span<const Record> records, std::size_t batch_size) {
    if (batch_size == 0) throw Error(Errc::argument, "batch_size must be positive");
    std::unique_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::write);
    std::size_t begin = 0;
    while (begin < records.size()) {
        std::size_t end = begin;
        std::size_t bytes = 0;
        while (end < records.size() && end - begin < batch_size && bytes < config_.row_buffer_bytes) {
            bytes += encoding::encoded_size(records[end]);
            ++end;
        }
        apply_group(records.subspan(begin, end - begin));
        begin = end;
    }
}

std::vector<Row> RowTable::scan(const ScanSpec& spec) const {
    std::shared_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::read);
    const auto projection = resolve_projection(schema_, spec.projection);

    auto it = index_.begin();
    if (spec.range && !spec.range->lower.empty()) it = index_.lower_bound(spec.range->lower);
    std::vector<Row> out;
    for (; it != index_.end(); ++it) {
        if (spec.range && !spec.range->upper.empty() && compare_prefix(it->first, spec.range->upper) > 0) break;
        // The whole record is materialized before projection.
        encoding::Reader reader(record_bytes(it->second));
        Record rec = encoding::read_record(reader, schema_);
        Row row;
        row.reserve(projection.size());
        for (std::size_t p : projection) row.push_back(std::move(rec.values[p]));
        out.push_back(std::move(row));
    }
    return out;
}

std::uint64_t RowTable::disk_usage() const {
    std::shared_lock lock(mutex_);
    std::uint64_t total = 0;
    for (const Page& page : pages_) total += page.disk_bytes;
    return total;
}

std::size_t RowTable::record_count() const {
    std::shared_lock lock(mutex_);
    return index_.size();
}

std::size_t RowTable::page_count() const {
    std::shared_lock lock(mutex_);
    return pages_.size();
}

std::vector<std::size_t> RowTable::page_disk_sizes() const {
    std::shared_lock lock(mutex_);
    std::vector<std::size_t> out;
    for (const Page& page : pages_) out.push_back(page.disk_bytes);
    return out;
}

void RowTable::simulate_crash() {
    std::unique_lock lock(mutex_);
    pages_.clear();
    index_.clear();
    pending_index_log_.clear();
    files_.reset();
    crashed_ = true;
}

void RowTable::recover() {
    std::unique_lock lock(mutex_);
    if (!crashed_) return;
    auto files = std::make_unique<Files>();
    files->pages = File::open_rw(dir_ / "pages.dat");
    const Bytes raw = files->pages.read_all();

    std::vector<Page> pages;
    std::map<Key, SlotRef> index;
    const std::size_t n_pages = (raw.size() + kRowPageBytes - 1) / kRowPageBytes;
    for (std::size_t p = 0; p < n_pages; ++p) {
        const std::size_t at = p * kRowPageBytes;
        const ByteView window = ByteView(raw).subspan(at, std::min(kRowPageBytes, raw.size() - at));
        Page page;
        if (codec_ == Codec::none) {
            if (window.size() != kRowPageBytes) throw Error(Errc::corruption, "short page in " + dir_.string());
            std::copy(window.begin(), window.end(), page.bytes.begin());
            page.disk_bytes = kRowPageBytes;
        } else {
            if (window.size() < kSlotPrefixBytes) throw Error(Errc::corruption, "short page slot in " + dir_.string());
            const std::uint32_t frame_len = get_u32(window, 0);
            page.disk_bytes = get_u32(window, 4);
            if (kSlotPrefixBytes + frame_len > window.size()) {
                throw Error(Errc::corruption, "page frame overruns slot in " + dir_.string());
            }
            const Bytes image = decompress_block(codec_, window.subspan(kSlotPrefixBytes, frame_len));
            if (image.size() > kRowPageBytes) throw Error(Errc::corruption, "oversized page image");
            std::copy(image.begin(), image.end(), page.bytes.begin());
        }
        const std::uint32_t slots = get_u32(page.bytes, 0);
        page.used = get_u32(page.bytes, 4);
        std::uint32_t off = kPageHeaderBytes;
        for (std::uint32_t s = 0; s < slots; ++s) {
            if (off + 4 > page.used) throw Error(Errc::corruption, "slot directory overruns page");
            page.offsets.push_back(off);
            off += 4 + get_u32(page.bytes, off);
        }
        if (off != page.used) throw Error(Errc::corruption, "page slot sizes disagree with header");
        pages.push_back(std::move(page));

        const Page& stored = pages.back();
        for (std::uint32_t s = 0; s < stored.offsets.size(); ++s) {
            const std::uint32_t len = get_u32(stored.bytes, stored.offsets[s]);
            encoding::Reader reader(ByteView(stored.bytes).subspan(stored.offsets[s] + 4, len));
            Key key = key_of(schema_, encoding::read_record(reader, schema_));
            if (!index.emplace(std::move(key), SlotRef{static_cast<std::uint32_t>(p), s}).second) {
                throw Error(Errc::corruption, "duplicate key across pages in " + dir_.string());
            }
        }
    }

    pages_ = std::move(pages);
    index_ = std::move(index);
    files_ = std::move(files);
    crashed_ = false;

    // The index log is derived state; rewrite it from the rebuilt index.
    files_->index = File::create(dir_ / "index.dat");
    for (const auto& [key, ref] : index_) log_index_entry(key, ref);
    files_->index.append(pending_index_log_);
    pending_index_log_.clear();
    files_->index.sync();
}

} // namespace alphamine::storage
