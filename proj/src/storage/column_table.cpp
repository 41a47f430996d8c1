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
#include "alphamine/storage/column_table.hpp"

#include <zlib.h>

#include <algorithm>
#include <future>
#include <mutex>
#include <numeric>
#include <queue>
#include <thread>

#include "encoding.hpp"
#include "file.hpp"

namespace alphamine::storage {

namespace {

const std::uint32_t kImageMagic = encoding::magic("ASEG");
const std::uint32_t kTrailerMagic = encoding::magic("ASGT");
const std::uint32_t kFileMagic = encoding::magic("ASGF");
constexpr std::uint16_t kImageVersion = 1;
constexpr std::size_t kFileHeaderBytes = 16;  // magic, codec + pad, image length, body length
constexpr std::size_t kTrailerBytes = 64;
constexpr std::size_t kWalFrameBytes = 8;  // u32 payload length, u32 crc32
constexpr std::size_t kAsyncWalBufferBytes = 64 * 1024;

std::uint32_t crc_of(ByteView bytes) {
    return static_cast<std::uint32_t>(crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

struct EntryRef {
    const Key* key;
    const Record* record;
};

std::size_t image_header_bytes(const TableSchema& schema) {
    std::size_t n = 12;
    for (const auto& c : schema.columns()) n += 4 + c.name.size() + 8;
    return n;
}

std::size_t segment_budget(const TableSchema& schema) {
    return kMaxSegmentBytes - kFileHeaderBytes - image_header_bytes(schema) - kTrailerBytes;
}

/// Bytes an entry adds to a segment image: key columns go to the shared key
/// run and every other column to its own run, so this is the record size.
std::size_t entry_bytes(const Record& record) { return encoding::encoded_size(record); }

/// Layout: header (magic, version, column count, record count, column
/// descriptors, run directory), shared key run, one run per non-key column,
/// fixed trailer (magic, record count, header length, crc32 of everything
/// before the trailer, reserved zeros).
Bytes build_image(const TableSchema& schema, std::span<const EntryRef> entries) {
    const auto& cols = schema.columns();
    Bytes image;
    encoding::Writer w(image);
    w.u32(kImageMagic);
    w.u16(kImageVersion);
    w.u16(static_cast<std::uint16_t>(cols.size()));
    w.u32(static_cast<std::uint32_t>(entries.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        w.u8(static_cast<std::uint8_t>(cols[i].type));
        w.u8(schema.is_key_column(i) ? 1 : 0);
        w.u16(static_cast<std::uint16_t>(cols[i].name.size()));
        w.raw(ByteView(reinterpret_cast<const std::uint8_t*>(cols[i].name.data()), cols[i].name.size()));
    }
    const std::size_t directory_at = image.size();
    w.zeros(8 * cols.size());

    std::vector<std::pair<std::uint32_t, std::uint32_t>> runs(cols.size());
    const auto key_start = static_cast<std::uint32_t>(image.size());
    for (const auto& e : entries) encoding::write_key(w, schema, *e.key);
    const auto key_len = static_cast<std::uint32_t>(image.size() - key_start);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (schema.is_key_column(c)) {
            runs[c] = {key_start, key_len};
            continue;
        }
        const auto start = static_cast<std::uint32_t>(image.size());
        for (const auto& e : entries) w.value(e.record->values[c], cols[c].type);
        runs[c] = {start, static_cast<std::uint32_t>(image.size() - start)};
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (int b = 0; b < 4; ++b) {
            image[directory_at + 8 * c + b] = static_cast<std::uint8_t>(runs[c].first >> (8 * b));
            image[directory_at + 8 * c + 4 + b] = static_cast<std::uint8_t>(runs[c].second >> (8 * b));
        }
    }
    const std::uint32_t crc = crc_of(image);
    w.u32(kTrailerMagic);
    w.u32(static_cast<std::uint32_t>(entries.size()));
    w.u32(static_cast<std::uint32_t>(directory_at + 8 * cols.size()));
    w.u32(crc);
    w.zeros(kTrailerBytes - 16);
    return image;
}

Bytes wrap_file(Codec codec, const Bytes& image) {
    const Bytes body = compress_block(codec, image);
    Bytes file;
    encoding::Writer w(file);
    w.u32(kFileMagic);
    w.u8(static_cast<std::uint8_t>(codec));
    w.zeros(3);
    w.u32(static_cast<std::uint32_t>(image.size()));
    w.u32(static_cast<std::uint32_t>(body.size()));
    w.raw(body);
    return file;
}

struct ImageHeader {
    std::uint32_t records = 0;
    std::size_t header_bytes = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
};

ImageHeader parse_image_header(const TableSchema& schema, ByteView bytes) {
    encoding::Reader r(bytes);
    if (r.u32() != kImageMagic) throw Error(Errc::corruption, "bad segment magic");
    if (r.u16() != kImageVersion) throw Error(Errc::corruption, "unsupported segment version");
    const std::uint16_t ncols = r.u16();
    if (ncols != schema.columns().size()) throw Error(Errc::corruption, "segment column count mismatch");
    ImageHeader h;
    h.records = r.u32();
    for (std::size_t c = 0; c < ncols; ++c) {
        const auto type = static_cast<ColumnType>(r.u8());
        const bool is_key = r.u8() != 0;
        const std::uint16_t len = r.u16();
        const ByteView name = r.raw(len);
        const auto& expect = schema.columns()[c];
        if (type != expect.type || is_key != schema.is_key_column(c) ||
            std::string_view(reinterpret_cast<const char*>(name.data()), name.size()) != expect.name) {
            throw Error(Errc::corruption, "segment schema mismatch at column " + expect.name);
        }
    }
    for (std::size_t c = 0; c < ncols; ++c) {
        const std::uint32_t off = r.u32();
        const std::uint32_t len = r.u32();
        h.runs.emplace_back(off, len);
    }
    h.header_bytes = r.pos();
    return h;
}

/// Random access to a segment image, either straight from an uncompressed
/// file or from a decompressed copy in memory.
class ImageSource {
public:
    ImageSource(const std::filesystem::path& path, bool full) : file_(File::open_read(path)) {
        const Bytes head = file_.pread_some(0, kFileHeaderBytes);
        encoding::Reader r(head);
        if (r.u32() != kFileMagic) throw Error(Errc::corruption, "bad segment file magic in " + path.string());
        codec_ = static_cast<Codec>(r.u8());
        r.skip(3);
        image_len_ = r.u32();
        body_len_ = r.u32();
        if (codec_ != Codec::none || full) {
            const Bytes body = file_.pread_some(kFileHeaderBytes, body_len_);
            if (body.size() != body_len_) throw Error(Errc::corruption, "truncated segment " + path.string());
            image_ = decompress_block(codec_, body);
            if (image_->size() != image_len_) throw Error(Errc::corruption, "segment length mismatch");
        }
    }

    Bytes read(std::size_t offset, std::size_t len) const {
        if (offset + len > image_len_) throw Error(Errc::corruption, "segment run out of bounds");
        if (image_) return Bytes(image_->begin() + offset, image_->begin() + offset + len);
        Bytes out = file_.pread_some(kFileHeaderBytes + offset, len);
        if (out.size() != len) throw Error(Errc::corruption, "truncated segment run");
        return out;
    }

    const Bytes& image() const { return *image_; }
    std::size_t image_len() const noexcept { return image_len_; }

private:
    File file_;
    Codec codec_ = Codec::none;
    std::size_t image_len_ = 0;
    std::size_t body_len_ = 0;
    std::optional<Bytes> image_;
};

Bytes wal_entry(const TableSchema& schema, const Record& record) {
    Bytes payload;
    encoding::Writer pw(payload);
    pw.u16(static_cast<std::uint16_t>(record.values.size()));
    for (std::size_t c = 0; c < record.values.size(); ++c) {
        pw.u16(static_cast<std::uint16_t>(c));
        pw.value(record.values[c], schema.columns()[c].type);
    }
    Bytes frame;
    encoding::Writer w(frame);
    w.u32(static_cast<std::uint32_t>(payload.size()));
    w.u32(crc_of(payload));
    w.raw(payload);
    return frame;
}

/// Parses whole WAL frames; returns the records and the length of the valid
/// prefix. A torn or corrupt frame ends the log.
std::pair<std::vector<Record>, std::size_t> replay_wal(const TableSchema& schema, ByteView log) {
    std::vector<Record> out;
    std::size_t pos = 0;
    while (log.size() - pos >= kWalFrameBytes) {
        encoding::Reader fr(log.subspan(pos, kWalFrameBytes));
        const std::uint32_t len = fr.u32();
        const std::uint32_t crc = fr.u32();
        if (log.size() - pos - kWalFrameBytes < len) break;
        const ByteView payload = log.subspan(pos + kWalFrameBytes, len);
        if (crc_of(payload) != crc) break;
        try {
            encoding::Reader r(payload);
            const std::uint16_t cells = r.u16();
            if (cells != schema.columns().size()) break;
            Record rec;
            rec.values.resize(cells);
            std::vector<bool> seen(cells, false);
            for (std::uint16_t i = 0; i < cells; ++i) {
                const std::uint16_t c = r.u16();
                if (c >= cells || seen[c]) throw Error(Errc::corruption, "bad WAL cell");
                seen[c] = true;
                rec.values[c] = r.value(schema.columns()[c].type);
            }
            out.push_back(std::move(rec));
        } catch (const Error&) {
            break;
        }
        pos += kWalFrameBytes + len;
    }
    return {std::move(out), pos};
}

std::vector<std::vector<EntryRef>> pack(const TableSchema& schema, const std::vector<EntryRef>& sorted) {
    const std::size_t budget = segment_budget(schema);
    std::vector<std::vector<EntryRef>> groups;
    std::size_t used = budget;  // forces a new group for the first entry
    for (const EntryRef& e : sorted) {
        const std::size_t n = entry_bytes(*e.record);
        if (used + n > budget) {
            groups.emplace_back();
            used = 0;
        }
        groups.back().push_back(e);
        used += n;
    }
    return groups;
}

struct SourceRows {
    std::vector<Key> keys;
    std::vector<Row> rows;
};

/// Index range [first, last) of sorted `keys` inside `range`.
std::pair<std::size_t, std::size_t> clip(const std::vector<Key>& keys, const std::optional<KeyRange>& range) {
    std::size_t first = 0;
    std::size_t last = keys.size();
    if (!range) return {first, last};
    if (!range->lower.empty()) {
        first = static_cast<std::size_t>(
            std::partition_point(keys.begin(), keys.end(),
                                 [&](const Key& k) { return compare_prefix(k, range->lower) < 0; }) -
            keys.begin());
    }
    if (!range->upper.empty()) {
        last = static_cast<std::size_t>(
            std::partition_point(keys.begin() + first, keys.end(),
                                 [&](const Key& k) { return compare_prefix(k, range->upper) <= 0; }) -
            keys.begin());
    }
    return {first, last};
}

} // namespace

struct ColumnTable::Segment {
    std::uint64_t id = 0;
    std::filesystem::path path;
    std::uint64_t file_bytes = 0;
    std::uint64_t image_bytes = 0;
    std::size_t records = 0;
    Key first;
    Key last;

    /// Keys plus projected rows restricted to `range`. Only the key run and
    /// the runs of projected non-key columns are read.
    SourceRows read(const TableSchema& schema, const std::vector<std::size_t>& projection,
                    const std::optional<KeyRange>& range) const {
        ImageSource src(path, false);
        const Bytes head = src.read(0, image_header_bytes(schema));
        const ImageHeader h = parse_image_header(schema, head);

        SourceRows out;
        const auto key_pos = schema.key_positions();
        {
            const Bytes run = src.read(h.runs[key_pos[0]].first, h.runs[key_pos[0]].second);
            encoding::Reader r(run);
            out.keys.reserve(h.records);
            for (std::uint32_t i = 0; i < h.records; ++i) out.keys.push_back(encoding::read_key(r, schema));
        }
        const auto [first, last] = clip(out.keys, range);

        std::map<std::size_t, std::vector<Value>> columns;
        for (std::size_t p : projection) {
            if (schema.is_key_column(p) || columns.contains(p)) continue;
            const Bytes run = src.read(h.runs[p].first, h.runs[p].second);
            encoding::Reader r(run);
            const ColumnType type = schema.columns()[p].type;
            for (std::size_t i = 0; i < first; ++i) r.skip_value(type);
            auto& values = columns[p];
            values.reserve(last - first);
            for (std::size_t i = first; i < last; ++i) values.push_back(r.value(type));
        }

        std::vector<std::size_t> key_index(schema.columns().size(), 0);
        for (std::size_t k = 0; k < key_pos.size(); ++k) key_index[key_pos[k]] = k;
        out.rows.reserve(last - first);
        for (std::size_t i = first; i < last; ++i) {
            Row row;
            row.reserve(projection.size());
            for (std::size_t p : projection) {
                if (schema.is_key_column(p)) {
                    row.push_back(out.keys[i][key_index[p]]);
                } else {
                    row.push_back(columns[p][i - first]);
                }
            }
            out.rows.push_back(std::move(row));
        }
        out.keys.erase(out.keys.begin() + static_cast<std::ptrdiff_t>(last), out.keys.end());
        out.keys.erase(out.keys.begin(), out.keys.begin() + static_cast<std::ptrdiff_t>(first));
        return out;
    }

    /// Every record, after verifying the trailer checksum.
    std::vector<Record> read_all(const TableSchema& schema) const {
        ImageSource src(path, true);
        const Bytes& image = src.image();
        if (image.size() < kTrailerBytes) throw Error(Errc::corruption, "segment too short");
        encoding::Reader tr(ByteView(image).subspan(image.size() - kTrailerBytes));
        if (tr.u32() != kTrailerMagic) throw Error(Errc::corruption, "bad segment trailer");
        const std::uint32_t records = tr.u32();
        tr.u32();
        const std::uint32_t crc = tr.u32();
        if (crc_of(ByteView(image).first(image.size() - kTrailerBytes)) != crc) {
            throw Error(Errc::corruption, "segment checksum mismatch in " + path.string());
        }
        const ImageHeader h = parse_image_header(schema, image);
        if (h.records != records) throw Error(Errc::corruption, "segment record count mismatch");

        std::vector<Record> out(records);
        for (auto& rec : out) rec.values.resize(schema.columns().size());
        const auto key_pos = schema.key_positions();
        {
            encoding::Reader r(ByteView(image).subspan(h.runs[key_pos[0]].first, h.runs[key_pos[0]].second));
            for (auto& rec : out) {
                for (std::size_t p : key_pos) rec.values[p] = r.value(schema.columns()[p].type);
            }
        }
        for (std::size_t c = 0; c < schema.columns().size(); ++c) {
            if (schema.is_key_column(c)) continue;
            encoding::Reader r(ByteView(image).subspan(h.runs[c].first, h.runs[c].second));
            for (auto& rec : out) rec.values[c] = r.value(schema.columns()[c].type);
        }
        return out;
    }
};

class ColumnTable::Wal {
public:
    File file;
    std::uint64_t size = 0;
    Bytes pending;  // async mode: acknowledged but not yet handed to the OS
};

namespace {

std::shared_ptr<const ColumnTable::Segment> write_segment(const std::filesystem::path& dir, std::uint64_t id,
                                                          const TableSchema& schema, Codec codec,
                                                          const std::vector<EntryRef>& group) {
    const Bytes image = build_image(schema, group);
    const Bytes file = wrap_file(codec, image);
    auto seg = std::make_shared<ColumnTable::Segment>();
    seg->id = id;
    seg->path = dir / ("seg-" + std::to_string(id) + ".dat");
    write_file_durable(seg->path, file);
    seg->file_bytes = file.size();
    seg->image_bytes = kFileHeaderBytes + image.size();
    seg->records = group.size();
    seg->first = *group.front().key;
    seg->last = *group.back().key;
    return seg;
}

} // namespace

ColumnTable::ColumnTable(std::filesystem::path dir, TableSchema schema, Codec codec, const EngineConfig& config,
                         Instrumentation& instrumentation, bool create)
    : dir_(std::move(dir)),
      schema_(std::move(schema)),
      codec_(codec),
      config_(config),
      instrumentation_(instrumentation) {
    if (create) {
        wal_ = std::make_unique<Wal>();
        wal_->file = File::create(dir_ / "wal.log");
    } else {
        crashed_ = true;
        recover();
    }
}

ColumnTable::~ColumnTable() {
    // A clean shutdown hands any buffered async WAL bytes to the OS.
    if (wal_ && !wal_->pending.empty()) {
        try {
            wal_->file.pwrite_all(wal_->pending, wal_->size);
        } catch (...) {
        }
    }
}

void ColumnTable::ensure_open() const {
    if (crashed_) throw Error(Errc::unsupported, "table '" + schema_.name() + "' needs recover() after a crash");
}

void ColumnTable::check_records(std::span<const Record> records) const {
    const std::size_t budget = segment_budget(schema_);
    for (const Record& r : records) {
        validate_record(schema_, r);
        if (entry_bytes(r) > budget) {
            throw Error(Errc::schema, "record does not fit a 64 KiB segment");
        }
    }
}

void ColumnTable::append_wal(const Bytes& entries) {
    if (config_.durability == Durability::fsync) {
        wal_->file.pwrite_all(entries, wal_->size);
        wal_->size += entries.size();
        wal_->file.sync();
        return;
    }
    wal_->pending.insert(wal_->pending.end(), entries.begin(), entries.end());
    if (wal_->pending.size() >= kAsyncWalBufferBytes) {
        wal_->file.pwrite_all(wal_->pending, wal_->size);
        wal_->size += wal_->pending.size();
        wal_->pending.clear();
    }
}

void ColumnTable::apply_to_memstore(const Record& record) {
    Key key = key_of(schema_, record);
    const std::size_t bytes = entry_bytes(record);
    auto [it, fresh] = memstore_.try_emplace(std::move(key), record);
    if (!fresh) {
        memstore_bytes_ -= entry_bytes(it->second);
        it->second = record;
    }
    memstore_bytes_ += bytes;
}

void ColumnTable::maybe_flush() {
    if (memstore_bytes_ >= config_.flush_threshold_bytes) flush_locked();
}

void ColumnTable::insert(const Record& record) {
    std::unique_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::write);
    check_records(std::span<const Record>(&record, 1));
    append_wal(wal_entry(schema_, record));
    apply_to_memstore(record);
    maybe_flush();
}

void ColumnTable::insert_batch(std::span<const Record> records, std::size_t batch_size) {
    if (batch_size == 0) throw Error(Errc::argument, "batch_size must be positive");
    std::unique_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::write);
    check_records(records);
    std::size_t begin = 0;
    while (begin < records.size()) {
        Bytes frames;
        std::size_t end = begin;
        while (end < records.size() && end - begin < batch_size && frames.size() < config_.column_buffer_bytes) {
            const Bytes f = wal_entry(schema_, records[end]);
            frames.insert(frames.end(), f.begin(), f.end());
            ++end;
        }
        append_wal(frames);
        for (std::size_t i = begin; i < end; ++i) apply_to_memstore(records[i]);
        maybe_flush();
        begin = end;
    }
}

LoadReport ColumnTable::bulk_load(std::span<const Record> records) {
    std::unique_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::write);
    const auto start = instrumentation_.now();
    check_records(records);
    if (records.empty()) return {0, std::chrono::nanoseconds{instrumentation_.now() - start}};

    std::vector<Key> keys;
    keys.reserve(records.size());
    for (const Record& r : records) keys.push_back(key_of(schema_, r));

    // Two key-range partitions, each sorted and packed independently.
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto mid = order.begin();
    if (order.size() >= 2) {
        std::vector<std::size_t> probe = order;
        std::nth_element(probe.begin(), probe.begin() + static_cast<std::ptrdiff_t>(probe.size() / 2), probe.end(),
                         [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
        const Key& pivot = keys[probe[probe.size() / 2]];
        mid = std::stable_partition(order.begin(), order.end(), [&](std::size_t i) { return keys[i] < pivot; });
    }

    auto prepare = [&](std::vector<std::size_t>::iterator first, std::vector<std::size_t>::iterator last) {
        std::stable_sort(first, last, [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
        std::vector<EntryRef> sorted;
        for (auto it = first; it != last; ++it) {
            // Equal keys are adjacent in input order; the last write wins.
            if (std::next(it) != last && keys[*std::next(it)] == keys[*it]) continue;
            sorted.push_back({&keys[*it], &records[*it]});
        }
        return pack(schema_, sorted);
    };
    auto left_groups = std::async(std::launch::async, prepare, order.begin(), mid);
    auto right = prepare(mid, order.end());
    auto left = left_groups.get();

    const std::uint64_t base = next_segment_id_;
    next_segment_id_ += left.size() + right.size();
    auto write_all = [&](const std::vector<std::vector<EntryRef>>& groups, std::uint64_t first_id) {
        std::vector<std::shared_ptr<const Segment>> out;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            out.push_back(write_segment(dir_, first_id + g, schema_, codec_, groups[g]));
        }
        return out;
    };
    auto left_written = std::async(std::launch::async, write_all, std::cref(left), base);
    auto right_segments = write_all(right, base + left.size());
    auto left_segments = left_written.get();
    segments_.insert(segments_.end(), left_segments.begin(), left_segments.end());
    segments_.insert(segments_.end(), right_segments.begin(), right_segments.end());
    return {records.size(), std::chrono::nanoseconds{instrumentation_.now() - start}};
}

std::vector<std::uint64_t> ColumnTable::flush() {
    std::unique_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::write);
    return flush_locked();
}

void ColumnTable::commit() {
    std::unique_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::write);
    flush_locked();
}

std::vector<std::uint64_t> ColumnTable::flush_locked() {
    if (memstore_.empty()) return {};
    std::vector<EntryRef> sorted;
    sorted.reserve(memstore_.size());
    for (const auto& [key, record] : memstore_) sorted.push_back({&key, &record});

    std::vector<std::uint64_t> ids;
    for (const auto& group : pack(schema_, sorted)) {
        segments_.push_back(write_segment(dir_, next_segment_id_++, schema_, codec_, group));
        ids.push_back(segments_.back()->id);
    }
    memstore_.clear();
    memstore_bytes_ = 0;
    // Everything the WAL protected now lives in durable segments.
    wal_->pending.clear();
    wal_->file.truncate(0);
    wal_->size = 0;
    wal_->file.sync();
    return ids;
}

std::vector<std::uint64_t> ColumnTable::compact() {
    std::unique_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::write);
    if (segments_.empty()) return {};

    std::map<Key, Record> merged;
    for (const auto& seg : segments_) {  // oldest first; newer overwrite
        for (Record& rec : seg->read_all(schema_)) {
            Key key = key_of(schema_, rec);
            merged.insert_or_assign(std::move(key), std::move(rec));
        }
    }
    std::vector<EntryRef> sorted;
    sorted.reserve(merged.size());
    for (const auto& [key, record] : merged) sorted.push_back({&key, &record});

    std::vector<std::shared_ptr<const Segment>> fresh;
    std::vector<std::uint64_t> ids;
    for (const auto& group : pack(schema_, sorted)) {
        fresh.push_back(write_segment(dir_, next_segment_id_++, schema_, codec_, group));
        ids.push_back(fresh.back()->id);
    }
    for (const auto& seg : segments_) std::filesystem::remove(seg->path);
    segments_ = std::move(fresh);
    return ids;
}

std::vector<Row> ColumnTable::scan(const ScanSpec& spec) const {
    std::shared_lock lock(mutex_);
    ensure_open();
    Instrumentation::Span span(instrumentation_, Instrumentation::Kind::read);
    return scan_locked(spec);
}

std::vector<Row> ColumnTable::scan_locked(const ScanSpec& spec) const {
    const auto projection = resolve_projection(schema_, spec.projection);

    // Source 0 is the memstore; then segments newest to oldest.
    std::vector<SourceRows> sources;
    {
        SourceRows mem;
        auto it = memstore_.begin();
        if (spec.range && !spec.range->lower.empty()) it = memstore_.lower_bound(spec.range->lower);
        for (; it != memstore_.end(); ++it) {
            if (spec.range && !spec.range->upper.empty() && compare_prefix(it->first, spec.range->upper) > 0) break;
            Row row;
            row.reserve(projection.size());
            for (std::size_t p : projection) row.push_back(it->second.values[p]);
            mem.keys.push_back(it->first);
            mem.rows.push_back(std::move(row));
        }
        sources.push_back(std::move(mem));
    }

    std::vector<const Segment*> candidates;
    for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
        const Segment& seg = **it;
        if (spec.range && !spec.range->lower.empty() && compare_prefix(seg.last, spec.range->lower) < 0) continue;
        if (spec.range && !spec.range->upper.empty() && compare_prefix(seg.first, spec.range->upper) > 0) continue;
        candidates.push_back(&seg);
    }

    // Segment reads fan out over a few workers; results land in fixed slots
    // so the merge below never depends on scheduling.
    std::vector<SourceRows> seg_rows(candidates.size());
    const std::size_t workers =
        candidates.size() < 4 ? 1 : std::min<std::size_t>(4, std::max(2u, std::thread::hardware_concurrency()));
    auto work = [&](std::size_t w) {
        for (std::size_t i = w; i < candidates.size(); i += workers) {
            seg_rows[i] = candidates[i]->read(schema_, projection, spec.range);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::future<void>> pending;
        for (std::size_t w = 1; w < workers; ++w) pending.push_back(std::async(std::launch::async, work, w));
        work(0);
        for (auto& f : pending) f.get();
    }
    for (auto& s : seg_rows) sources.push_back(std::move(s));

    // K-way merge; on equal keys the lower source index (newer) wins.
    using Cursor = std::pair<std::size_t, std::size_t>;  // source, position
    auto later = [&](const Cursor& a, const Cursor& b) {
        const Key& ka = sources[a.first].keys[a.second];
        const Key& kb = sources[b.first].keys[b.second];
        if (ka != kb) return kb < ka;
        return b.first < a.first;
    };
    std::priority_queue<Cursor, std::vector<Cursor>, decltype(later)> heap(later);
    std::size_t total = 0;
    for (std::size_t s = 0; s < sources.size(); ++s) {
        total += sources[s].keys.size();
        if (!sources[s].keys.empty()) heap.emplace(s, 0);
    }
    std::vector<Row> out;
    out.reserve(total);
    const Key* last_key = nullptr;
    while (!heap.empty()) {
        auto [s, pos] = heap.top();
        heap.pop();
        const Key& key = sources[s].keys[pos];
        if (!last_key || *last_key != key) {
            out.push_back(std::move(sources[s].rows[pos]));
            last_key = &key;
        }
        if (pos + 1 < sources[s].keys.size()) heap.emplace(s, pos + 1);
    }
    return out;
}

std::uint64_t ColumnTable::disk_usage() const {
    std::shared_lock lock(mutex_);
    std::uint64_t total = 0;
    for (const auto& seg : segments_) total += seg->file_bytes;
    return total;
}

std::size_t ColumnTable::record_count() const {
    std::shared_lock lock(mutex_);
    ensure_open();
    ScanSpec spec;
    spec.projection = {schema_.primary_key().front()};
    return scan_locked(spec).size();
}

std::vector<ColumnTable::SegmentInfo> ColumnTable::segments() const {
    std::shared_lock lock(mutex_);
    std::vector<SegmentInfo> out;
    for (const auto& seg : segments_) out.push_back({seg->id, seg->file_bytes, seg->image_bytes, seg->records});
    return out;
}

std::size_t ColumnTable::memstore_bytes() const {
    std::shared_lock lock(mutex_);
    return memstore_bytes_;
}

std::size_t ColumnTable::memstore_entries() const {
    std::shared_lock lock(mutex_);
    return memstore_.size();
}

std::uint64_t ColumnTable::wal_bytes() const {
    std::shared_lock lock(mutex_);
    return wal_ ? wal_->size : 0;
}

void ColumnTable::simulate_crash() {
    std::unique_lock lock(mutex_);
    memstore_.clear();
    memstore_bytes_ = 0;
    segments_.clear();
    wal_.reset();  // the async buffer dies with the process
    crashed_ = true;
}

void ColumnTable::recover() {
    std::unique_lock lock(mutex_);
    if (!crashed_) return;

    std::vector<std::pair<std::uint64_t, std::filesystem::path>> found;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
        const std::string name = entry.path().filename().string();
        if (name.starts_with("seg-") && name.ends_with(".dat")) {
            found.emplace_back(std::stoull(name.substr(4, name.size() - 8)), entry.path());
        }
    }
    std::sort(found.begin(), found.end());

    std::vector<std::shared_ptr<const Segment>> segments;
    std::uint64_t next_id = 1;
    for (const auto& [id, path] : found) {
        next_id = std::max(next_id, id + 1);
        auto seg = std::make_shared<Segment>();
        seg->id = id;
        seg->path = path;
        std::vector<Record> records;
        try {
            records = seg->read_all(schema_);
        } catch (const Error& e) {
            if (e.code() != Errc::corruption) throw;
            // A flush that never completed; the WAL still holds its records.
            std::filesystem::remove(path);
            continue;
        }
        if (records.empty()) throw Error(Errc::corruption, "empty segment " + path.string());
        ImageSource src(path, true);
        seg->image_bytes = kFileHeaderBytes + src.image_len();
        seg->file_bytes = std::filesystem::file_size(path);
        seg->records = records.size();
        seg->first = key_of(schema_, records.front());
        seg->last = key_of(schema_, records.back());
        segments.push_back(std::move(seg));
    }

    auto wal = std::make_unique<Wal>();
    wal->file = File::open_rw(dir_ / "wal.log");
    const Bytes log = wal->file.read_all();
    auto [records, valid] = replay_wal(schema_, log);
    if (valid != log.size()) {
        wal->file.truncate(valid);
        wal->file.sync();
    }
    wal->size = valid;

    segments_ = std::move(segments);
    next_segment_id_ = next_id;
    wal_ = std::move(wal);
    memstore_.clear();
    memstore_bytes_ = 0;
    for (const Record& r : records) apply_to_memstore(r);
    crashed_ = false;
}

} // namespace alphamine::storage
