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
#include "alphamine/error.hpp"

namespace alphamine {

const char* to_string(Errc code) noexcept {
    switch (code) {
    case Errc::schema: return "schema error";
    case Errc::row: return "row error";
    case Errc::uniqueness: return "uniqueness error";
    case Errc::empty_input: return "empty input";
    case Errc::argument: return "argument error";
    case Errc::duplicate_table: return "duplicate table";
    case Errc::unknown_table: return "unknown table";
    case Errc::unsupported: return "unsupported operation";
    case Errc::corruption: return "corruption";
    case Errc::io: return "i/o error";
    }
    return "unknown error";
}

} // namespace alphamine
