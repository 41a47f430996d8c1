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
#include "alphamine/storage/engine.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "alphamine/error.hpp"
#include "alphamine/storage/column_table.hpp"
#include "alphamine/storage/row_table.hpp"
#include "file.hpp"

namespace alphamine::storage {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::size_t parse_size(std::string_view key, std::string_view value) {
    std::size_t out = 0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || end != value.data() + value.size() || out == 0) {
        throw Error(Errc::argument, "bad value '" + std::string(value) + "' for " + std::string(key));
    }
    return out;
}

constexpr std::string_view kMetaFile = "table.meta";

void write_meta(const std::filesystem::path& dir, const TableSchema& schema, Codec codec) {
    std::string text = "name=" + schema.name() + "\ncodec=" + std::string(to_string(codec)) + "\n";
    for (const auto& c : schema.columns()) {
        text += "column=" + c.name + ":" + (c.type == ColumnType::timestamp ? "timestamp" : "string") + "\n";
    }
    text += "key=";
    for (std::size_t i = 0; i < schema.primary_key().size(); ++i) {
        if (i) text += ',';
        text += schema.primary_key()[i];
    }
    text += "\n";
    write_file_durable(dir / kMetaFile, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::pair<TableSchema, Codec> read_meta(const std::filesystem::path& dir) {
    std::ifstream in(dir / kMetaFile);
    if (!in) throw Error(Errc::corruption, "missing " + (dir / kMetaFile).string());
    std::string name;
    Codec codec = Codec::none;
    std::vector<Column> columns;
    std::vector<std::string> key;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string k = line.substr(0, eq);
        const std::string v = line.substr(eq + 1);
        if (k == "name") {
            name = v;
        } else if (k == "codec") {
            codec = parse_codec(v);
        } else if (k == "column") {
            const auto colon = v.rfind(':');
            if (colon == std::string::npos) throw Error(Errc::corruption, "bad column entry in table.meta");
            columns.push_back(
                {v.substr(0, colon), v.substr(colon + 1) == "timestamp" ? ColumnType::timestamp : ColumnType::string});
        } else if (k == "key") {
            std::stringstream ss(v);
            std::string part;
            while (std::getline(ss, part, ',')) key.push_back(part);
        }
    }
    return {TableSchema(name, std::move(columns), std::move(key)), codec};
}

} // namespace

std::string_view to_string(EngineKind kind) noexcept { return kind == EngineKind::row ? "row" : "column"; }

EngineKind parse_engine_kind(std::string_view name) {
    if (name == "row") return EngineKind::row;
    if (name == "column") return EngineKind::column;
    throw Error(Errc::argument, "unknown engine '" + std::string(name) + "' (expected row or column)");
}

void EngineConfig::set(std::string_view key, std::string_view value) {
    if (key == "flush_threshold_bytes") {
        flush_threshold_bytes = parse_size(key, value);
    } else if (key == "row_buffer_bytes") {
        row_buffer_bytes = parse_size(key, value);
    } else if (key == "column_buffer_bytes") {
        column_buffer_bytes = parse_size(key, value);
    } else if (key == "durability") {
        if (value == "fsync") {
            durability = Durability::fsync;
        } else if (value == "async") {
            durability = Durability::async;
        } else {
            throw Error(Errc::argument, "durability must be fsync or async");
        }
    } else if (key == "compression") {
        try {
            compression = parse_codec(value);
        } catch (const Error& e) {
            throw Error(Errc::argument, e.what());
        }
    } else if (key == "compressed_page_bytes") {
        const std::size_t n = parse_size(key, value);
        if (n != 1024 && n != 2048 && n != 4096 && n != 8192 && n != 16384) {
            throw Error(Errc::argument, "compressed_page_bytes must be 1024, 2048, 4096, 8192 or 16384");
        }
        compressed_page_bytes = n;
    } else {
        throw Error(Errc::argument, "unknown config key '" + std::string(key) + "'");
    }
}

EngineConfig EngineConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::argument, "cannot open config '" + path.string() + "'");
    EngineConfig config;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw LineError(Errc::argument, n, "expected key=value in '" + path.string() + "'");
        }
        try {
            config.set(trim(std::string_view(text).substr(0, eq)), trim(std::string_view(text).substr(eq + 1)));
        } catch (const LineError&) {
            throw;
        } catch (const Error& e) {
            throw LineError(Errc::argument, n, e.what());
        }
    }
    return config;
}

std::int64_t steady_now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Instrumentation::Instrumentation(Clock clock) : clock_(clock ? std::move(clock) : Clock(steady_now_ns)) {}

std::vector<std::uint64_t> Table::flush() {
    throw Error(Errc::unsupported, "flush is only defined for column tables");
}

std::vector<std::uint64_t> Table::compact() {
    throw Error(Errc::unsupported, "compact is only defined for column tables");
}

StorageEngine::StorageEngine(EngineKind kind, std::filesystem::path root, EngineConfig config, Clock clock)
    : kind_(kind), root_(std::move(root)), config_(config), instrumentation_(std::move(clock)) {
    std::filesystem::create_directories(root_);
    for (const auto& entry : std::filesystem::directory_iterator(root_)) {
        if (!entry.is_directory() || !std::filesystem::exists(entry.path() / kMetaFile)) continue;
        auto [schema, codec] = read_meta(entry.path());
        auto table = open_table(schema, codec, false);
        tables_.emplace(schema.name(), std::move(table));
    }
}

StorageEngine::~StorageEngine() = default;

std::unique_ptr<Table> StorageEngine::open_table(const TableSchema& schema, Codec codec, bool create) {
    const auto dir = root_ / schema.name();
    if (kind_ == EngineKind::row) {
        return std::make_unique<RowTable>(dir, schema, codec, config_, instrumentation_, create);
    }
    return std::make_unique<ColumnTable>(dir, schema, codec, config_, instrumentation_, create);
}

Table& StorageEngine::create_table(const TableSchema& schema, Codec codec) {
    if (tables_.contains(schema.name())) {
        throw Error(Errc::duplicate_table, "table '" + schema.name() + "' already exists");
    }
    const auto dir = root_ / schema.name();
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto table = open_table(schema, codec, true);
    write_meta(dir, schema, codec);
    return *tables_.emplace(schema.name(), std::move(table)).first->second;
}

Table& StorageEngine::table(std::string_view name) {
    auto it = tables_.find(name);
    if (it == tables_.end()) throw Error(Errc::unknown_table, "no table '" + std::string(name) + "'");
    return *it->second;
}

const Table& StorageEngine::table(std::string_view name) const {
    auto it = tables_.find(name);
    if (it == tables_.end()) throw Error(Errc::unknown_table, "no table '" + std::string(name) + "'");
    return *it->second;
}

bool StorageEngine::has_table(std::string_view name) const { return tables_.find(name) != tables_.end(); }

void StorageEngine::drop_table(std::string_view name) {
    auto it = tables_.find(name);
    if (it == tables_.end()) throw Error(Errc::unknown_table, "no table '" + std::string(name) + "'");
    tables_.erase(it);
    std::filesystem::remove_all(root_ / std::string(name));
}

std::vector<std::string> StorageEngine::table_names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : tables_) out.push_back(name);
    return out;
}

} // namespace alphamine::storage
