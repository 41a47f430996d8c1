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

#include <array>
#include <chrono>
#include <compare>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "alphamine/eventlog.hpp"
#include "alphamine/relations.hpp"
#include "alphamine/storage/engine.hpp"

namespace alphamine {

using ActivitySet = std::set<std::string>;

/// (A, B): every a in A causes every b in B, and the members of each side
/// are pairwise in Choice.
struct ActivitySetPair {
    ActivitySet set_a;
    ActivitySet set_b;

    auto operator<=>(const ActivitySetPair&) const = default;
};

/// Sorted members joined with ','.
std::string join_set(const ActivitySet& set);
/// Inverse of join_set.
ActivitySet split_set(std::string_view text);

struct Place {
    enum class Kind : std::uint8_t { source, sink, internal };

    Kind kind = Kind::internal;
    ActivitySetPair pair;  // empty unless internal

    static Place source() { return {Kind::source, {}}; }
    static Place sink() { return {Kind::sink, {}}; }
    static Place internal(ActivitySetPair pair) { return {Kind::internal, std::move(pair)}; }

    /// "i", "o", or "A&B" with both sides comma-joined.
    std::string name() const;

    auto operator<=>(const Place&) const = default;
};

struct Node {
    enum class Kind : std::uint8_t { place, transition };

    Kind kind = Kind::transition;
    std::string name;

    static Node place(const Place& p) { return {Kind::place, p.name()}; }
    static Node transition(std::string activity) { return {Kind::transition, std::move(activity)}; }

    auto operator<=>(const Node&) const = default;
};

struct FlowArc {
    Node from;
    Node to;

    auto operator<=>(const FlowArc&) const = default;
};

struct PetriNet {
    std::set<std::string> transitions;
    std::set<Place> places;
    std::set<FlowArc> flow;

    bool operator==(const PetriNet&) const = default;
};

// Pure steps.

/// X_L over a footprint. Supports up to 64 activities.
std::set<ActivitySetPair> step4_xl(const FootprintMatrix& fp);
/// Y_L: members of `xl` not componentwise contained in another member.
std::set<ActivitySetPair> step5_yl(const std::set<ActivitySetPair>& xl);
std::set<Place> step6_places(const std::set<ActivitySetPair>& yl);
std::set<FlowArc> step7_flow(const std::set<ActivitySetPair>& yl, const std::set<std::string>& t_i,
                             const std::set<std::string>& t_o);

// Engine-backed steps. Each reads its inputs from tables written by the
// earlier steps and persists its result. Table names: eventlog, totalEvent,
// initialEvent, finalEvent, causality, notconnected, XL, YL, PL, FL.

inline constexpr std::array<std::string_view, 10> kMiningTables = {
    "eventlog", "totalEvent", "initialEvent", "finalEvent", "causality",
    "notconnected", "XL", "YL", "PL", "FL"};

/// Result tables written by each step, indexed by step - 1.
const std::vector<std::string_view>& step_tables(int step);

std::vector<storage::Record> to_records(const EventLog& log);

/// Drops any earlier mining tables and bulk-loads `log` as `eventlog`, using
/// the engine's configured compression.
storage::LoadReport load_eventlog(storage::StorageEngine& engine, const EventLog& log);

std::set<std::string> step1_total_events(storage::StorageEngine& engine);
std::set<std::string> step2_initial_events(storage::StorageEngine& engine);
std::set<std::string> step3_final_events(storage::StorageEngine& engine);
/// Also persists `causality` and `notconnected`.
std::set<ActivitySetPair> step4_xl(storage::StorageEngine& engine);
std::set<ActivitySetPair> step5_yl(storage::StorageEngine& engine);
std::set<Place> step6_places(storage::StorageEngine& engine);
std::set<FlowArc> step7_flow(storage::StorageEngine& engine);

struct StepReport {
    int step = 0;
    std::chrono::nanoseconds elapsed{0};
    std::chrono::nanoseconds read{0};   // inside table scans
    std::chrono::nanoseconds write{0};  // inside inserts, loads and commits
};

struct MiningRun {
    PetriNet net;
    storage::LoadReport load;
    std::array<StepReport, 7> steps;
};

/// Loads the log and runs steps 1 to 7, timing each with the engine clock.
MiningRun mine_instrumented(const EventLog& log, storage::StorageEngine& engine);

/// Throws Errc::empty_input on an empty log.
PetriNet mine(const EventLog& log, storage::StorageEngine& engine);

/// Graphviz digraph; places are circles, transitions boxes.
std::string export_dot(const PetriNet& net);
std::string export_pnml(const PetriNet& net);
/// Reads PNML written by export_pnml. Throws Errc::schema on malformed input.
PetriNet parse_pnml(std::string_view text);

} // namespace alphamine
