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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace alphamine::storage {

enum class ColumnType : std::uint8_t { string = 0, timestamp = 1 };

/// A cell. Timestamps are seconds since the Unix epoch.
using Value = std::variant<std::string, std::int64_t>;

/// Primary-key tuple, or a prefix of one when used as a scan bound.
using Key = std::vector<Value>;

/// Projected scan output, in projection order.
using Row = std::vector<Value>;

struct Column {
    std::string name;
    ColumnType type = ColumnType::string;

    bool operator==(const Column&) const = default;
};

class TableSchema {
public:
    /// Throws Errc::schema if the key is empty or names an unknown column,
    /// or if column names repeat.
    TableSchema(std::string name, std::vector<Column> columns, std::vector<std::string> primary_key);

    /// CaseID, Timestamp, Status, Activity, Actor keyed by
    /// (CaseID, Timestamp, Status).
    static TableSchema eventlog(std::string name = "eventlog");

    /// All-string table keyed by every column, for set-valued result tables.
    static TableSchema string_set(std::string name, std::vector<std::string> columns);

    const std::string& name() const noexcept { return name_; }
    const std::vector<Column>& columns() const noexcept { return columns_; }
    const std::vector<std::string>& primary_key() const noexcept { return primary_key_; }
    /// Positions of the key columns, in key order.
    const std::vector<std::size_t>& key_positions() const noexcept { return key_positions_; }
    bool is_key_column(std::size_t position) const noexcept;

    std::optional<std::size_t> find(std::string_view column) const noexcept;
    /// Throws Errc::schema naming the column.
    std::size_t position(std::string_view column) const;

    bool operator==(const TableSchema&) const = default;

private:
    std::string name_;
    std::vector<Column> columns_;
    std::vector<std::string> primary_key_;
    std::vector<std::size_t> key_positions_;
};

/// One value per schema column, in schema order.
struct Record {
    std::vector<Value> values;

    bool operator==(const Record&) const = default;
};

/// Throws Errc::schema if arity or value types disagree with the schema.
void validate_record(const TableSchema& schema, const Record& record);

Key key_of(const TableSchema& schema, const Record& record);

/// Compares `key` against `bound` over the first bound.size() components
/// only; a shorter key that matches so far sorts first.
std::strong_ordering compare_prefix(const Key& key, const Key& bound);

/// Inclusive bounds compared by prefix. An empty bound is open, so
/// {lower = {c}, upper = {c}} selects every key starting with c.
struct KeyRange {
    Key lower;
    Key upper;

    bool contains(const Key& key) const;
};

struct ScanSpec {
    std::vector<std::string> projection;  // empty selects all columns
    std::optional<KeyRange> range;
};

/// Resolves a projection against the schema, expanding empty to all columns.
std::vector<std::size_t> resolve_projection(const TableSchema& schema, const std::vector<std::string>& projection);

std::string to_display(const Value& value);
std::string to_display(const Key& key);

} // namespace alphamine::storage
