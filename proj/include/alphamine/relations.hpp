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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alphamine/eventlog.hpp"

namespace alphamine {

enum class Relation : std::uint8_t {
    causality_forward,   // a -> b
    causality_backward,  // a <- b
    parallel,            // a || b
    choice,              // a # b
};

/// "->", "<-", "||" or "#".
std::string_view symbol(Relation r) noexcept;

using ActivityPair = std::pair<std::string, std::string>;
using PairSet = std::set<ActivityPair>;

/// Ordering relations over the distinct activities of a log.
///
/// Dense |T_L| x |T_L| cell table, self pairs included. A self-loop makes the
/// diagonal cell Parallel; otherwise it is Choice.
class FootprintMatrix {
public:
    FootprintMatrix() = default;
    /// `activities` may arrive in any order with duplicates; every pair in
    /// `follows` must name known activities.
    FootprintMatrix(std::vector<std::string> activities, PairSet follows);

    const std::vector<std::string>& activities() const noexcept { return activities_; }
    const PairSet& follows() const noexcept { return follows_; }
    std::size_t size() const noexcept { return activities_.size(); }

    std::optional<std::size_t> index_of(std::string_view activity) const;

    Relation at(std::size_t from, std::size_t to) const { return cells_[from * size() + to]; }
    /// Throws Errc::argument for an unknown activity.
    Relation at(std::string_view from, std::string_view to) const;

    bool operator==(const FootprintMatrix&) const = default;

private:
    std::vector<std::string> activities_;  // sorted, unique
    PairSet follows_;
    std::vector<Relation> cells_;
};

/// All (a, b) with a immediately followed by b in some trace.
PairSet directly_follows(const TraceMap& traces);
PairSet directly_follows(const EventLog& log);

FootprintMatrix footprint(const TraceMap& traces);
FootprintMatrix footprint(const EventLog& log);

/// Every (a, b) whose cell is CausalityForward.
PairSet causality_pairs(const FootprintMatrix& fp);

/// Every unordered {a, b} whose cell is Choice, stored with first <= second.
/// Includes {a, a} for activities that never follow themselves.
PairSet not_connected(const FootprintMatrix& fp);

/// Header row and column of activity names; cells "->", "<-", "||", "#".
std::string footprint_csv(const FootprintMatrix& fp);

} // namespace alphamine
