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
#include "alphamine/storage/schema.hpp"

#include <algorithm>
#include <set>

#include "alphamine/error.hpp"

namespace alphamine::storage {

TableSchema::TableSchema(std::string name, std::vector<Column> columns, std::vector<std::string> primary_key)
    : name_(std::move(name)), columns_(std::move(columns)), primary_key_(std::move(primary_key)) {
    if (name_.empty()) throw Error(Errc::schema, "table name is empty");
    std::set<std::string_view> seen;
    for (const Column& c : columns_) {
        if (c.name.empty() || !seen.insert(c.name).second) {
            throw Error(Errc::schema, "table '" + name_ + "': empty or repeated column name '" + c.name + "'");
        }
    }
    if (primary_key_.empty()) throw Error(Errc::schema, "table '" + name_ + "' has no primary key");
    for (const std::string& k : primary_key_) key_positions_.push_back(position(k));
}

TableSchema TableSchema::eventlog(std::string name) {
    return TableSchema(std::move(name),
                       {{"CaseID", ColumnType::string},
                        {"Timestamp", ColumnType::timestamp},
                        {"Status", ColumnType::string},
                        {"Activity", ColumnType::string},
                        {"Actor", ColumnType::string}},
                       {"CaseID", "Timestamp", "Status"});
}

TableSchema TableSchema::string_set(std::string name, std::vector<std::string> columns) {
    std::vector<Column> cols;
    for (const auto& c : columns) cols.push_back({c, ColumnType::string});
    return TableSchema(std::move(name), std::move(cols), std::move(columns));
}

bool TableSchema::is_key_column(std::size_t position) const noexcept {
    return std::find(key_positions_.begin(), key_positions_.end(), position) != key_positions_.end();
}

std::optional<std::size_t> TableSchema::find(std::string_view column) const noexcept {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == column) return i;
    }
    return std::nullopt;
}

std::size_t TableSchema::position(std::string_view column) const {
    if (auto p = find(column)) return *p;
    throw Error(Errc::schema, "unknown column '" + std::string(column) + "' in table '" + name_ + "'");
}

void validate_record(const TableSchema& schema, const Record& record) {
    const auto& cols = schema.columns();
    if (record.values.size() != cols.size()) {
        throw Error(Errc::schema, "record for '" + schema.name() + "' has " + std::to_string(record.values.size()) +
                                      " values, expected " + std::to_string(cols.size()));
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const bool is_string = std::holds_alternative<std::string>(record.values[i]);
        if (is_string != (cols[i].type == ColumnType::string)) {
            throw Error(Errc::schema, "column '" + cols[i].name + "' has the wrong value type");
        }
    }
}

Key key_of(const TableSchema& schema, const Record& record) {
    Key key;
    key.reserve(schema.key_positions().size());
    for (std::size_t p : schema.key_positions()) key.push_back(record.values[p]);
    return key;
}

std::strong_ordering compare_prefix(const Key& key, const Key& bound) {
    const std::size_t n = std::min(key.size(), bound.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (key[i] < bound[i]) return std::strong_ordering::less;
        if (bound[i] < key[i]) return std::strong_ordering::greater;
    }
    return key.size() < bound.size() ? std::strong_ordering::less : std::strong_ordering::equal;
}

bool KeyRange::contains(const Key& key) const {
    if (!lower.empty() && compare_prefix(key, lower) < 0) return false;
    if (!upper.empty() && compare_prefix(key, upper) > 0) return false;
    return true;
}

std::vector<std::size_t> resolve_projection(const TableSchema& schema, const std::vector<std::string>& projection) {
    std::vector<std::size_t> out;
    if (projection.empty()) {
        for (std::size_t i = 0; i < schema.columns().size(); ++i) out.push_back(i);
        return out;
    }
    for (const auto& name : projection) out.push_back(schema.position(name));
    return out;
}

std::string to_display(const Value& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return *s;
    return std::to_string(std::get<std::int64_t>(value));
}

std::string to_display(const Key& key) {
    std::string out = "(";
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) out += ", ";
        out += to_display(key[i]);
    }
    return out + ")";
}

} // namespace alphamine::storage
