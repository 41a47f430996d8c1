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
#include "alphamine/eventlog.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "alphamine/csv.hpp"
#include "alphamine/error.hpp"

namespace alphamine {

namespace {

using EventKey = std::tuple<std::string_view, Timestamp, std::string_view>;

EventKey key_of(const Event& e) { return {e.case_id, e.timestamp, e.status}; }

std::string describe_key(const Event& e) {
    return "(" + e.case_id + ", " + format_timestamp(e.timestamp) + ", " + e.status + ")";
}

std::string zero_pad(std::size_t value, std::size_t width) {
    std::string digits = std::to_string(value);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return digits;
}

TraceMap derive_traces(const std::vector<Event>& events) {
    std::map<std::string, std::vector<const Event*>> by_case;
    for (const Event& e : events) by_case[e.case_id].push_back(&e);

    TraceMap traces;
    for (auto& [case_id, group] : by_case) {
        std::sort(group.begin(), group.end(), [](const Event* a, const Event* b) {
            return std::tie(a->timestamp, a->status) < std::tie(b->timestamp, b->status);
        });
        Trace trace{case_id, {}};
        trace.activities.reserve(group.size());
        for (const Event* e : group) trace.activities.push_back(e->activity);
        traces.emplace(case_id, std::move(trace));
    }
    return traces;
}

} // namespace

bool valid_activity_name(std::string_view name) noexcept {
    return !name.empty() && name.find(',') == std::string_view::npos;
}

EventLog::EventLog(std::vector<Event> events) : events_(std::move(events)) {
    std::set<EventKey> seen;
    for (const Event& e : events_) {
        if (!valid_activity_name(e.activity)) {
            throw Error(Errc::schema, "activity name must be non-empty and comma free: '" + e.activity + "'");
        }
        if (!seen.insert(key_of(e)).second) {
            throw Error(Errc::uniqueness, "duplicate composite key " + describe_key(e));
        }
    }
    traces_ = derive_traces(events_);
}

SchemaMapping SchemaMapping::bpi() {
    SchemaMapping m;
    m.case_id = "Incident ID";
    m.timestamp = "DateTimeStamp";
    m.status.clear();
    m.activity = "IncidentActivity_Type";
    m.actor = "Assignment Group";
    return m;
}

Timestamp parse_timestamp(std::string_view text, std::string_view format) {
    std::tm tm{};
    std::istringstream in{std::string(text)};
    in >> std::get_time(&tm, std::string(format).c_str());
    if (in.fail()) {
        throw Error(Errc::row, "unparseable timestamp '" + std::string(text) + "'");
    }
    in >> std::ws;
    if (!in.eof()) {
        throw Error(Errc::row, "trailing characters in timestamp '" + std::string(text) + "'");
    }
    return Timestamp{std::chrono::seconds{timegm(&tm)}};
}

std::string format_timestamp(Timestamp ts, std::string_view format) {
    std::time_t t = ts.time_since_epoch().count();
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[128];
    std::size_t n = std::strftime(buf, sizeof buf, std::string(format).c_str(), &tm);
    return std::string(buf, n);
}

EventLog parse_csv(const std::filesystem::path& path, const SchemaMapping& mapping) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::argument, "cannot open event log '" + path.string() + "'");
    return parse_csv(in, mapping);
}

EventLog parse_csv(std::istream& in, const SchemaMapping& mapping) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw Error(Errc::schema, "event log has no header row");

    auto column = [&](const std::string& name, bool required) -> std::ptrdiff_t {
        if (name.empty()) {
            if (required) throw Error(Errc::schema, "required column mapping is empty");
            return -1;
        }
        auto it = std::find(header->fields.begin(), header->fields.end(), name);
        if (it == header->fields.end()) throw Error(Errc::schema, "missing column '" + name + "'");
        return it - header->fields.begin();
    };
    const auto case_col = column(mapping.case_id, true);
    const auto ts_col = column(mapping.timestamp, true);
    const auto status_col = column(mapping.status, false);
    const auto activity_col = column(mapping.activity, true);
    const auto actor_col = column(mapping.actor, false);

    std::vector<Event> events;
    std::vector<std::size_t> lines;
    while (auto row = reader.next()) {
        if (row->fields.size() != header->fields.size()) {
            throw LineError(Errc::row, row->line,
                            "expected " + std::to_string(header->fields.size()) + " fields, found " +
                                std::to_string(row->fields.size()));
        }
        Event e;
        e.case_id = row->fields[case_col];
        try {
            e.timestamp = parse_timestamp(row->fields[ts_col], mapping.timestamp_format);
        } catch (const Error& err) {
            throw LineError(Errc::row, row->line, err.what());
        }
        if (status_col >= 0) e.status = row->fields[status_col];
        e.activity = row->fields[activity_col];
        if (actor_col >= 0) e.actor = row->fields[actor_col];
        if (!valid_activity_name(e.activity)) {
            throw LineError(Errc::row, row->line, "activity name must be non-empty and comma free");
        }
        events.push_back(std::move(e));
        lines.push_back(row->line);
    }

    if (status_col < 0) {
        std::unordered_map<std::string, std::size_t> counts;
        for (const Event& e : events) ++counts[e.case_id];
        std::size_t widest = 0;
        for (const auto& [_, n] : counts) widest = std::max(widest, n);
        const std::size_t width = std::max<std::size_t>(3, std::to_string(widest).size());
        std::unordered_map<std::string, std::size_t> next;
        for (Event& e : events) e.status = zero_pad(++next[e.case_id], width);
    }

    std::map<EventKey, std::size_t> first_line;
    for (std::size_t i = 0; i < events.size(); ++i) {
        auto [it, fresh] = first_line.emplace(key_of(events[i]), lines[i]);
        if (!fresh) {
            throw LineError(Errc::uniqueness, lines[i],
                            "duplicate composite key " + describe_key(events[i]) + " (first seen on line " +
                                std::to_string(it->second) + ")");
        }
    }
    return EventLog(std::move(events));
}

void write_csv(const EventLog& log, std::ostream& out, std::string_view timestamp_format) {
    out << "CaseID,Timestamp,Status,Activity,Actor\n";
    for (const Event& e : log.events()) {
        out << csv::join_row({e.case_id, format_timestamp(e.timestamp, timestamp_format), e.status, e.activity,
                              e.actor})
            << '\n';
    }
}

void write_csv(const EventLog& log, const std::filesystem::path& path, std::string_view timestamp_format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
    write_csv(log, out, timestamp_format);
    if (!out.flush()) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

TraceMap build_traces(const EventLog& log) {
    if (log.empty()) throw Error(Errc::empty_input, "event log is empty");
    return log.traces();
}

ProcessModel parse_process_model(std::string_view name) {
    if (name == "sequence") return ProcessModel::sequence;
    if (name == "xor-split") return ProcessModel::xor_split;
    if (name == "and-split") return ProcessModel::and_split;
    throw Error(Errc::argument, "unknown process model '" + std::string(name) + "'");
}

std::string_view to_string(ProcessModel model) noexcept {
    switch (model) {
    case ProcessModel::sequence: return "sequence";
    case ProcessModel::xor_split: return "xor-split";
    case ProcessModel::and_split: return "and-split";
    }
    return "unknown";
}

std::vector<std::vector<std::string>> model_variants(ProcessModel model) {
    switch (model) {
    case ProcessModel::sequence: return {{"a", "b", "c"}};
    case ProcessModel::xor_split: return {{"a", "b", "d"}, {"a", "c", "d"}};
    case ProcessModel::and_split: return {{"a", "b", "c", "d"}, {"a", "c", "b", "d"}};
    }
    return {};
}

EventLog generate_synthetic_log(ProcessModel model, std::size_t n_cases, std::uint64_t seed) {
    if (n_cases == 0) throw Error(Errc::empty_input, "n_cases must be at least 1");

    const auto variants = model_variants(model);
    // Raw engine output with modulo reduction keeps the stream identical across
    // standard libraries, unlike the <random> distributions.
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](std::uint64_t bound) { return rng() % bound; };

    const std::size_t width = std::max<std::size_t>(6, std::to_string(n_cases).size());
    // 2013-01-07 00:00:00 UTC
    Timestamp case_start{std::chrono::seconds{1357516800}};

    std::vector<Event> events;
    for (std::size_t i = 0; i < n_cases; ++i) {
        case_start += std::chrono::seconds{30 + uniform(270)};
        const std::size_t variant = i < variants.size() ? i : uniform(variants.size());
        const std::string case_id = "case-" + zero_pad(i + 1, width);
        Timestamp t = case_start;
        std::size_t seq = 0;
        for (const std::string& activity : variants[variant]) {
            Event e;
            e.case_id = case_id;
            e.timestamp = t;
            e.status = zero_pad(++seq, 3);
            e.activity = activity;
            e.actor = "group-" + std::to_string(1 + uniform(8));
            events.push_back(std::move(e));
            t += std::chrono::seconds{1 + uniform(3600)};
        }
    }
    // Arrival order: cases overlap in time, so traces interleave in the file.
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    return EventLog(std::move(events));
}

} // namespace alphamine
