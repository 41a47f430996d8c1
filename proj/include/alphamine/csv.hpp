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

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alphamine::csv {

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line = 0;  // physical line the record starts on
};

/// RFC-4180 reader. Quoted fields may contain commas, doubled quotes and
/// line breaks; CRLF and LF line endings are both accepted.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Blank lines are skipped.
    std::optional<CsvRow> next();

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

/// Quote a field only when it needs it.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

} // namespace alphamine::csv
