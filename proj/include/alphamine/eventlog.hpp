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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace alphamine {

using Timestamp = std::chrono::sys_seconds;

inline constexpr std::string_view kDefaultTimestampFormat = "%Y-%m-%d %H:%M:%S";

/// One row of an event log. (case_id, timestamp, status) is the composite key.
struct Event {
    std::string case_id;
    Timestamp timestamp{};
    std::string status;
    std::string activity;
    std::string actor;

    bool operator==(const Event&) const = default;
};

struct Trace {
    std::string case_id;
    std::vector<std::string> activities;

    bool operator==(const Trace&) const = default;
};

using TraceMap = std::map<std::string, Trace>;

/// Immutable collection of events plus the per-case traces derived from them.
///
/// Construction validates the event invariants: activities are non-empty and
/// comma free, and composite keys are unique.
class EventLog {
public:
    EventLog() = default;
    explicit EventLog(std::vector<Event> events);

    const std::vector<Event>& events() const noexcept { return events_; }
    const TraceMap& traces() const noexcept { return traces_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }

    bool operator==(const EventLog& other) const { return events_ == other.events_; }

private:
    std::vector<Event> events_;
    TraceMap traces_;
};

/// Which CSV columns feed which event fields. Empty `status` means Status is
/// synthesized as a zero-padded per-case sequence number in file order; empty
/// `actor` leaves Actor blank.
struct SchemaMapping {
    std::string case_id = "CaseID";
    std::string timestamp = "Timestamp";
    std::string status = "Status";
    std::string activity = "Activity";
    std::string actor = "Actor";
    std::string timestamp_format{kDefaultTimestampFormat};

    static SchemaMapping native() { return {}; }
    /// Incident activity export: Incident ID, DateTimeStamp,
    /// IncidentActivity_Type, Assignment Group.
    static SchemaMapping bpi();
};

EventLog parse_csv(const std::filesystem::path& path, const SchemaMapping& mapping = {});
EventLog parse_csv(std::istream& in, const SchemaMapping& mapping = {});

/// Writes the native `CaseID,Timestamp,Status,Activity,Actor` format.
void write_csv(const EventLog& log, std::ostream& out,
               std::string_view timestamp_format = kDefaultTimestampFormat);
void write_csv(const EventLog& log, const std::filesystem::path& path,
               std::string_view timestamp_format = kDefaultTimestampFormat);

/// Per-case traces ordered by (timestamp, status). Throws on an empty log.
TraceMap build_traces(const EventLog& log);

Timestamp parse_timestamp(std::string_view text, std::string_view format = kDefaultTimestampFormat);
std::string format_timestamp(Timestamp ts, std::string_view format = kDefaultTimestampFormat);

/// Checks the activity-name rule shared by ingestion and storage.
bool valid_activity_name(std::string_view name) noexcept;

enum class ProcessModel { sequence, xor_split, and_split };

ProcessModel parse_process_model(std::string_view name);
std::string_view to_string(ProcessModel model) noexcept;

/// The distinct traces a model can produce.
std::vector<std::vector<std::string>> model_variants(ProcessModel model);

/// Deterministic log of `n_cases` executions of `model`. With two or more
/// cases every variant of the model appears at least once.
EventLog generate_synthetic_log(ProcessModel model, std::size_t n_cases, std::uint64_t seed);

} // namespace alphamine
