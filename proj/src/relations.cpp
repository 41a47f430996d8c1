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
#include "alphamine/relations.hpp"

#include <algorithm>

#include "alphamine/csv.hpp"
#include "alphamine/error.hpp"

namespace alphamine {

std::string_view symbol(Relation r) noexcept {
    switch (r) {
    case Relation::causality_forward: return "->";
    case Relation::causality_backward: return "<-";
    case Relation::parallel: return "||";
    case Relation::choice: return "#";
    }
    return "?";
}

FootprintMatrix::FootprintMatrix(std::vector<std::string> activities, PairSet follows)
    : activities_(std::move(activities)), follows_(std::move(follows)) {
    std::sort(activities_.begin(), activities_.end());
    activities_.erase(std::unique(activities_.begin(), activities_.end()), activities_.end());

    const std::size_t n = activities_.size();
    std::vector<bool> succ(n * n, false);
    for (const auto& [a, b] : follows_) {
        auto i = index_of(a);
        auto j = index_of(b);
        if (!i || !j) throw Error(Errc::argument, "directly-follows pair names unknown activity");
        succ[*i * n + *j] = true;
    }
    cells_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const bool fwd = succ[i * n + j];
            const bool bwd = succ[j * n + i];
            cells_[i * n + j] = fwd && bwd ? Relation::parallel
                                : fwd      ? Relation::causality_forward
                                : bwd      ? Relation::causality_backward
                                           : Relation::choice;
        }
    }
}

std::optional<std::size_t> FootprintMatrix::index_of(std::string_view activity) const {
    auto it = std::lower_bound(activities_.begin(), activities_.end(), activity);
    if (it == activities_.end() || *it != activity) return std::nullopt;
    return static_cast<std::size_t>(it - activities_.begin());
}

Relation FootprintMatrix::at(std::string_view from, std::string_view to) const {
    auto i = index_of(from);
    auto j = index_of(to);
    if (!i || !j) throw Error(Errc::argument, "activity not in footprint");
    return at(*i, *j);
}

PairSet directly_follows(const TraceMap& traces) {
    if (traces.empty()) throw Error(Errc::empty_input, "event log is empty");
    PairSet out;
    for (const auto& [_, trace] : traces) {
        for (std::size_t k = 1; k < trace.activities.size(); ++k) {
            out.emplace(trace.activities[k - 1], trace.activities[k]);
        }
    }
    return out;
}

PairSet directly_follows(const EventLog& log) { return directly_follows(build_traces(log)); }

FootprintMatrix footprint(const TraceMap& traces) {
    PairSet follows = directly_follows(traces);
    std::vector<std::string> activities;
    for (const auto& [_, trace] : traces) {
        activities.insert(activities.end(), trace.activities.begin(), trace.activities.end());
    }
    return FootprintMatrix(std::move(activities), std::move(follows));
}

FootprintMatrix footprint(const EventLog& log) { return footprint(build_traces(log)); }

PairSet causality_pairs(const FootprintMatrix& fp) {
    PairSet out;
    const auto& acts = fp.activities();
    for (std::size_t i = 0; i < fp.size(); ++i) {
        for (std::size_t j = 0; j < fp.size(); ++j) {
            if (fp.at(i, j) == Relation::causality_forward) out.emplace(acts[i], acts[j]);
        }
    }
    return out;
}

PairSet not_connected(const FootprintMatrix& fp) {
    PairSet out;
    const auto& acts = fp.activities();
    for (std::size_t i = 0; i < fp.size(); ++i) {
        for (std::size_t j = i; j < fp.size(); ++j) {
            if (fp.at(i, j) == Relation::choice) out.emplace(acts[i], acts[j]);
        }
    }
    return out;
}

std::string footprint_csv(const FootprintMatrix& fp) {
    std::vector<std::string> row{""};
    row.insert(row.end(), fp.activities().begin(), fp.activities().end());
    std::string out = csv::join_row(row) + "\n";
    for (std::size_t i = 0; i < fp.size(); ++i) {
        row.assign({fp.activities()[i]});
        for (std::size_t j = 0; j < fp.size(); ++j) row.emplace_back(symbol(fp.at(i, j)));
        out += csv::join_row(row) + "\n";
    }
    return out;
}

} // namespace alphamine
