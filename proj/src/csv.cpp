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
#include "alphamine/csv.hpp"

#include "alphamine/error.hpp"

namespace alphamine::csv {

std::optional<CsvRow> Reader::next() {
    std::string line;
    while (true) {
        if (!std::getline(in_, line)) return std::nullopt;
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) break;
    }

    CsvRow row;
    row.line = line_;
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    std::size_t i = 0;
    while (true) {
        if (i == line.size()) {
            if (!quoted) break;
            // Quoted field spans a line break.
            std::string more;
            if (!std::getline(in_, more)) {
                throw LineError(Errc::row, row.line, "unterminated quoted field");
            }
            ++line_;
            if (!more.empty() && more.back() == '\r') more.pop_back();
            field.push_back('\n');
            line = std::move(more);
            i = 0;
            continue;
        }
        char c = line[i++];
        if (quoted) {
            if (c == '"') {
                if (i < line.size() && line[i] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                    after_quote = true;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == ',') {
            row.fields.push_back(std::move(field));
            field.clear();
            after_quote = false;
        } else if (c == '"' && field.empty() && !after_quote) {
            quoted = true;
        } else {
            if (after_quote) throw LineError(Errc::row, row.line, "text after closing quote");
            field.push_back(c);
        }
    }
    row.fields.push_back(std::move(field));
    return row;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    return out;
}

} // namespace alphamine::csv
