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

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "alphamine/error.hpp"
#include "alphamine/storage/codec.hpp"
#include "alphamine/storage/schema.hpp"

// Little-endian fixed-width integers and u32-length-prefixed strings.
namespace alphamine::storage::encoding {

class Writer {
public:
    explicit Writer(Bytes& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { fixed(v, 2); }
    void u32(std::uint32_t v) { fixed(v, 4); }
    void u64(std::uint64_t v) { fixed(v, 8); }
    void i64(std::int64_t v) { fixed(static_cast<std::uint64_t>(v), 8); }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.insert(out_.end(), s.begin(), s.end());
    }
    void raw(ByteView bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }
    void zeros(std::size_t n) { out_.insert(out_.end(), n, 0); }

    void value(const Value& v, ColumnType type) {
        if (type == ColumnType::string) {
            str(std::get<std::string>(v));
        } else {
            i64(std::get<std::int64_t>(v));
        }
    }

    std::size_t size() const noexcept { return out_.size(); }

private:
    void fixed(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    Bytes& out_;
};

/// Bounds-checked reader; running past the end raises Errc::corruption.
class Reader {
public:
    explicit Reader(ByteView in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(fixed(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(fixed(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(fixed(4)); }
    std::uint64_t u64() { return fixed(8); }
    std::int64_t i64() { return static_cast<std::int64_t>(fixed(8)); }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    ByteView raw(std::size_t n) {
        need(n);
        auto view = in_.subspan(pos_, n);
        pos_ += n;
        return view;
    }
    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }

    Value value(ColumnType type) {
        if (type == ColumnType::string) return str();
        return i64();
    }
    void skip_value(ColumnType type) {
        if (type == ColumnType::string) {
            skip(u32());
        } else {
            skip(8);
        }
    }

    std::size_t pos() const noexcept { return pos_; }
    void seek(std::size_t pos) {
        if (pos > in_.size()) throw Error(Errc::corruption, "seek past end of buffer");
        pos_ = pos;
    }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw Error(Errc::corruption, "truncated encoding");
    }
    std::uint64_t fixed(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    ByteView in_;
    std::size_t pos_ = 0;
};

inline std::size_t encoded_size(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return 4 + s->size();
    return 8;
}

inline std::size_t encoded_size(const Record& r) {
    std::size_t n = 0;
    for (const auto& v : r.values) n += encoded_size(v);
    return n;
}

inline void write_record(Writer& w, const TableSchema& schema, const Record& r) {
    for (std::size_t i = 0; i < r.values.size(); ++i) w.value(r.values[i], schema.columns()[i].type);
}

inline Record read_record(Reader& r, const TableSchema& schema) {
    Record rec;
    rec.values.reserve(schema.columns().size());
    for (const auto& c : schema.columns()) rec.values.push_back(r.value(c.type));
    return rec;
}

inline void write_key(Writer& w, const TableSchema& schema, const Key& key) {
    for (std::size_t i = 0; i < key.size(); ++i) {
        w.value(key[i], schema.columns()[schema.key_positions()[i]].type);
    }
}

inline Key read_key(Reader& r, const TableSchema& schema) {
    Key key;
    key.reserve(schema.key_positions().size());
    for (std::size_t p : schema.key_positions()) key.push_back(r.value(schema.columns()[p].type));
    return key;
}

inline std::size_t encoded_key_size(const Key& key) {
    std::size_t n = 0;
    for (const auto& v : key) n += encoded_size(v);
    return n;
}

inline std::uint32_t magic(const char (&tag)[5]) {
    return std::uint32_t(std::uint8_t(tag[0])) | std::uint32_t(std::uint8_t(tag[1])) << 8 |
           std::uint32_t(std::uint8_t(tag[2])) << 16 | std::uint32_t(std::uint8_t(tag[3])) << 24;
}

} // namespace alphamine::storage::encoding
