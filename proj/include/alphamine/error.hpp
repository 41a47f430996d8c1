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
#include <stdexcept>
#include <string>

namespace alphamine {

enum class Errc : std::uint8_t {
    schema,          // missing/unknown column, malformed record
    row,             // unparseable CSV row
    uniqueness,      // duplicate composite key
    empty_input,
    argument,
    duplicate_table,
    unknown_table,
    unsupported,     // operation not offered by this engine
    corruption,      // bad frame, torn file, checksum mismatch
    io,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

    // Errors caused by the caller's input rather than by the program.
    bool is_input_error() const noexcept {
        switch (code_) {
        case Errc::schema:
        case Errc::row:
        case Errc::uniqueness:
        case Errc::empty_input:
        case Errc::argument:
            return true;
        default:
            return false;
        }
    }

private:
    Errc code_;
};

/// Input failure tied to a 1-based physical line of a CSV file.
class LineError : public Error {
public:
    LineError(Errc code, std::size_t line, const std::string& what)
        : Error(code, "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace alphamine
