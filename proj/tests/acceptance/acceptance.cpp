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
// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and workload sizes are fixed below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "alphamine/alphaminer.hpp"
#include "alphamine/benchmark.hpp"
#include "alphamine/csv.hpp"
#include "alphamine/error.hpp"
#include "alphamine/storage/column_table.hpp"
#include "alphamine/storage/row_table.hpp"
#include "support/oracles.hpp"
#include "support/records.hpp"

using namespace alphamine;
using namespace alphamine::storage;
using namespace alphamine::testing;

namespace {

// 1
constexpr int kOracleLogs = 200;
constexpr std::size_t kOracleMaxActivities = 6;
constexpr std::size_t kOracleMaxTraces = 20;
constexpr double kOracleBudgetSeconds = 60.0;
// 3
constexpr int kIndependenceRandomLogs = 100;
// 4
constexpr std::size_t kScanRecords = 100000;
constexpr int kScanQueries = 50;
// 5
constexpr int kCrashSchedules = 1000;
// 7
constexpr int kCodecPayloads = 1000;
constexpr std::size_t kFramingDelta = 12;
// 8
constexpr std::size_t kTrendScale = 100;
constexpr std::size_t kTrendReps = 5;
constexpr double kBatchSpeedup = 2.0;
constexpr std::size_t kMinBatchForSpeedup = 1000;
constexpr double kBenchBudgetSeconds = 600.0;

using WallClock = std::chrono::steady_clock;

double seconds_since(WallClock::time_point start) {
    return std::chrono::duration<double>(WallClock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

int failures = 0;

void report(int number, const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << number << " " << name << ": " << o.detail << std::endl;
}

std::string fmt(double v, const char* spec = "%.3f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// Expected nets, written out by hand.

Node t(const std::string& a) { return Node::transition(a); }
Node p(std::set<std::string> a, std::set<std::string> b) { return Node::place(Place::internal(pair_of(a, b))); }
Node source() { return Node::place(Place::source()); }
Node sink() { return Node::place(Place::sink()); }

PetriNet net(std::set<std::string> transitions, std::vector<ActivitySetPair> internal, std::vector<FlowArc> arcs) {
    PetriNet n;
    n.transitions = std::move(transitions);
    n.places = {Place::source(), Place::sink()};
    for (auto& pr : internal) n.places.insert(Place::internal(pr));
    n.flow.insert(arcs.begin(), arcs.end());
    return n;
}

PetriNet expected_sequence() {
    return net({"a", "b", "c"}, {pair_of({"a"}, {"b"}), pair_of({"b"}, {"c"})},
               {{source(), t("a")}, {t("a"), p({"a"}, {"b"})}, {p({"a"}, {"b"}), t("b")},
                {t("b"), p({"b"}, {"c"})}, {p({"b"}, {"c"}), t("c")}, {t("c"), sink()}});
}

PetriNet expected_xor() {
    return net({"a", "b", "c", "d"}, {pair_of({"a"}, {"b", "c"}), pair_of({"b", "c"}, {"d"})},
               {{source(), t("a")},
                {t("a"), p({"a"}, {"b", "c"})},
                {p({"a"}, {"b", "c"}), t("b")},
                {p({"a"}, {"b", "c"}), t("c")},
                {t("b"), p({"b", "c"}, {"d"})},
                {t("c"), p({"b", "c"}, {"d"})},
                {p({"b", "c"}, {"d"}), t("d")},
                {t("d"), sink()}});
}

PetriNet expected_and() {
    return net({"a", "b", "c", "d"},
               {pair_of({"a"}, {"b"}), pair_of({"a"}, {"c"}), pair_of({"b"}, {"d"}), pair_of({"c"}, {"d"})},
               {{source(), t("a")},
                {t("a"), p({"a"}, {"b"})},
                {t("a"), p({"a"}, {"c"})},
                {p({"a"}, {"b"}), t("b")},
                {p({"a"}, {"c"}), t("c")},
                {t("b"), p({"b"}, {"d"})},
                {t("c"), p({"c"}, {"d"})},
                {p({"b"}, {"d"}), t("d")},
                {p({"c"}, {"d"}), t("d")},
                {t("d"), sink()}});
}

PetriNet expected_lpar() {
    return net({"a", "b", "c", "d", "e"},
               {pair_of({"a"}, {"b", "e"}), pair_of({"a"}, {"c", "e"}), pair_of({"b", "e"}, {"d"}),
                pair_of({"c", "e"}, {"d"})},
               {{source(), t("a")},
                {t("a"), p({"a"}, {"b", "e"})},
                {t("a"), p({"a"}, {"c", "e"})},
                {p({"a"}, {"b", "e"}), t("b")},
                {p({"a"}, {"b", "e"}), t("e")},
                {p({"a"}, {"c", "e"}), t("c")},
                {p({"a"}, {"c", "e"}), t("e")},
                {t("b"), p({"b", "e"}, {"d"})},
                {t("e"), p({"b", "e"}, {"d"})},
                {t("c"), p({"c", "e"}, {"d"})},
                {t("e"), p({"c", "e"}, {"d"})},
                {p({"b", "e"}, {"d"}), t("d")},
                {p({"c", "e"}, {"d"}), t("d")},
                {t("d"), sink()}});
}

std::string shape(const PetriNet& n) {
    return std::to_string(n.transitions.size()) + "/" + std::to_string(n.places.size()) + "/" +
           std::to_string(n.flow.size());
}

PetriNet mine_on(EngineKind kind, const EventLog& log, Codec codec = Codec::none) {
    TempDir dir("acc-mine");
    EngineConfig config;
    config.compression = codec;
    StorageEngine engine(kind, dir.path(), config);
    return mine(log, engine);
}

// 1
Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937_64 rng(1001);
    const auto start = WallClock::now();
    std::size_t xl_total = 0;
    for (int i = 0; i < kOracleLogs; ++i) {
        const auto alphabet = 1 + rng() % kOracleMaxActivities;
        const auto traces = i % 2 ? random_traces(rng, alphabet, kOracleMaxTraces, 8)
                                  : random_ordered_traces(rng, alphabet, kOracleMaxTraces);
        const auto fp = footprint(make_log(traces));
        if (fp.size() > kOracleMaxActivities) o.fail("generator exceeded activity bound");
        const auto xl = step4_xl(fp);
        const auto oracle_xl = brute_force_xl(traces);
        if (xl != oracle_xl) o.fail("X_L mismatch on log " + std::to_string(i));
        if (step5_yl(xl) != brute_force_yl(oracle_xl)) o.fail("Y_L mismatch on log " + std::to_string(i));
        xl_total += xl.size();
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= kOracleBudgetSeconds) o.fail("took " + fmt(elapsed) + " s");
    if (o.pass) {
        o.detail = std::to_string(kOracleLogs) + " logs, " + std::to_string(xl_total) + " X_L pairs, " +
                   fmt(elapsed) + " s (limit " + fmt(kOracleBudgetSeconds, "%.0f") + " s)";
    }
    return o;
}

// 2
Outcome rediscovery() {
    Outcome o;
    struct Case {
        std::string name;
        EventLog log;
        PetriNet expected;
    };
    const std::vector<Case> cases{
        {"sequence", generate_synthetic_log(ProcessModel::sequence, 25, 7), expected_sequence()},
        {"xor-split", generate_synthetic_log(ProcessModel::xor_split, 25, 7), expected_xor()},
        {"and-split", generate_synthetic_log(ProcessModel::and_split, 25, 7), expected_and()},
        {"L_xor", make_log(kLxor), expected_xor()},
        {"L_par", make_log(kLpar), expected_lpar()},
    };
    std::string shapes;
    for (const auto& c : cases) {
        for (auto kind : {EngineKind::row, EngineKind::column}) {
            const auto got = mine_on(kind, c.log);
            if (got != c.expected) {
                o.fail(c.name + " on " + std::string(to_string(kind)) + " mined " + shape(got) + ", expected " +
                       shape(c.expected));
            }
        }
        shapes += (shapes.empty() ? "" : ", ") + c.name + " " + shape(c.expected);
    }
    if (expected_xor().flow.size() != 8 || expected_xor().places.size() != 4) o.fail("L_xor reference shape");
    if (shape(expected_lpar()) != "5/6/14") o.fail("L_par reference shape");
    if (o.pass) o.detail = "transitions/places/arcs: " + shapes;
    return o;
}

// 3
Outcome engine_independence() {
    Outcome o;
    std::vector<EventLog> logs{make_log(kLxor), make_log(kLpar),
                               generate_synthetic_log(ProcessModel::sequence, 40, 3),
                               generate_synthetic_log(ProcessModel::xor_split, 40, 3),
                               generate_synthetic_log(ProcessModel::and_split, 40, 3)};
    std::mt19937_64 rng(3003);
    for (int i = 0; i < kIndependenceRandomLogs; ++i) {
        logs.push_back(make_log(random_traces(rng, 1 + rng() % 7, 15, 9)));
    }
    std::size_t compared = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const auto row = mine_on(EngineKind::row, logs[i]);
        const auto col = mine_on(EngineKind::column, logs[i]);
        if (row != col) o.fail("nets differ on log " + std::to_string(i));
        if (i % 10 == 0) {
            if (mine_on(EngineKind::row, logs[i], Codec::zlib) != row ||
                mine_on(EngineKind::column, logs[i], Codec::gzip) != col) {
                o.fail("compressed tables change the net on log " + std::to_string(i));
            }
        }
        ++compared;
    }
    if (o.pass) o.detail = std::to_string(compared) + " logs, row and column nets identical element for element";
    return o;
}

// 4
Outcome scan_equivalence() {
    Outcome o;
    std::mt19937_64 rng(4004);
    const auto records = distinct_events(rng, kScanRecords);
    TempDir row_dir("acc-row"), col_dir("acc-col");
    StorageEngine row_engine(EngineKind::row, row_dir.path());
    StorageEngine col_engine(EngineKind::column, col_dir.path());
    auto& row = row_engine.create_table(TableSchema::eventlog());
    auto& col = col_engine.create_table(TableSchema::eventlog());
    const std::size_t loaded = kScanRecords * 9 / 10;
    row.bulk_load(std::span(records).first(loaded));
    col.bulk_load(std::span(records).first(loaded));
    row.insert_batch(std::span(records).subspan(loaded), 1000);
    col.insert_batch(std::span(records).subspan(loaded), 1000);  // part stays in the memstore

    static const std::vector<std::string> names{"CaseID", "Timestamp", "Status", "Activity", "Actor"};
    const std::size_t cases = kScanRecords / 4;
    std::size_t rows_compared = 0;
    for (int q = 0; q < kScanQueries; ++q) {
        ScanSpec spec;
        for (const auto& n : names) {
            if (rng() % 2) spec.projection.push_back(n);
        }
        std::shuffle(spec.projection.begin(), spec.projection.end(), rng);
        if (q % 5 != 0) {
            char lo[32], hi[32];
            const std::size_t a = rng() % cases;
            const std::size_t b = std::min(cases - 1, a + rng() % (cases / 4));
            std::snprintf(lo, sizeof lo, "c%06zu", a);
            std::snprintf(hi, sizeof hi, "c%06zu", b);
            Key lower{std::string(lo)};
            if (rng() % 3 == 0) lower.push_back(std::int64_t{1'600'050'000});
            spec.range = KeyRange{q % 7 == 1 ? Key{} : lower, q % 7 == 2 ? Key{} : Key{std::string(hi)}};
        }
        const auto r = row.scan(spec);
        const auto c = col.scan(spec);
        if (r != c) o.fail("query " + std::to_string(q) + " differs between engines");
        if (q % 10 == 0 && r != reference_scan(TableSchema::eventlog(), records, spec)) {
            o.fail("query " + std::to_string(q) + " differs from the reference");
        }
        rows_compared += r.size();
    }
    if (row.record_count() != kScanRecords || col.record_count() != kScanRecords) o.fail("record counts");
    if (o.pass) {
        o.detail = std::to_string(kScanRecords) + " records, " + std::to_string(kScanQueries) + " queries, " +
                   std::to_string(rows_compared) + " rows identical";
    }
    return o;
}

// 5
Outcome durability() {
    Outcome o;
    std::mt19937_64 rng(5005);
    std::size_t crashes = 0;
    std::size_t torn = 0;
    const auto schema = TableSchema::eventlog();
    for (int s = 0; s < kCrashSchedules && o.pass; ++s) {
        TempDir dir("acc-crash");
        EngineConfig config;
        config.flush_threshold_bytes = 512 + rng() % 8192;
        StorageEngine engine(EngineKind::column, dir.path(), config);
        auto& table = engine.create_table(schema, rng() % 4 == 0 ? Codec::gzip : Codec::none);
        auto& col = dynamic_cast<ColumnTable&>(table);
        const auto wal_path = dir.path() / "eventlog" / "wal.log";
        std::vector<Record> acknowledged;

        auto crash_and_check = [&](bool tear) {
            if (tear) {
                // An append that was in flight when the process died.
                std::ofstream wal(wal_path, std::ios::binary | std::ios::app);
                const std::size_t n = 1 + rng() % 40;
                for (std::size_t i = 0; i < n; ++i) wal.put(static_cast<char>(rng()));
                ++torn;
            }
            table.simulate_crash();
            table.recover();
            ++crashes;
            if (table.scan() != reference_scan(schema, acknowledged, {})) {
                o.fail("schedule " + std::to_string(s) + " lost or invented records after recovery");
            }
        };

        const int ops = 5 + static_cast<int>(rng() % 20);
        const std::size_t key_space = 5 + rng() % 60;
        for (int i = 0; i < ops && o.pass; ++i) {
            switch (rng() % 10) {
            case 0:
            case 1:
            case 2: {
                const auto r = random_event(rng, key_space);
                table.insert(r);
                acknowledged.push_back(r);
                break;
            }
            case 3:
            case 4:
            case 5: {
                std::vector<Record> batch;
                const std::size_t n = 1 + rng() % 40;
                for (std::size_t k = 0; k < n; ++k) batch.push_back(random_event(rng, key_space));
                table.insert_batch(batch, 1 + rng() % 16);
                acknowledged.insert(acknowledged.end(), batch.begin(), batch.end());
                break;
            }
            case 6: table.flush(); break;
            case 7: table.compact(); break;
            case 8: crash_and_check(false); break;
            case 9: crash_and_check(true); break;
            }
        }
        crash_and_check(rng() % 2 == 0);
        (void)col;
    }
    if (o.pass) {
        o.detail = std::to_string(kCrashSchedules) + " schedules, " + std::to_string(crashes) + " crashes (" +
                   std::to_string(torn) + " with a torn WAL tail), every recovery matched the acknowledged writes";
    }
    return o;
}

// 6
Outcome block_accounting() {
    Outcome o;
    std::mt19937_64 rng(6006);
    std::size_t checks = 0;
    {
        TempDir dir("acc-blocks");
        StorageEngine engine(EngineKind::row, dir.path());
        auto& table = engine.create_table(TableSchema::eventlog());
        const auto records = distinct_events(rng, 20000);
        std::size_t at = 0;
        while (at < records.size()) {
            const std::size_t n = std::min<std::size_t>(records.size() - at, 1 + rng() % 2000);
            rng() % 2 ? table.bulk_load(std::span(records).subspan(at, n))
                      : (table.insert_batch(std::span(records).subspan(at, n), 1 + rng() % 500), LoadReport{});
            at += n;
            if (table.disk_usage() % kRowPageBytes != 0) o.fail("row usage " + std::to_string(table.disk_usage()));
            ++checks;
        }
    }
    const std::vector<std::size_t> allowed{1024, 2048, 4096, 8192, 16384};
    std::size_t pages = 0;
    for (std::size_t target : allowed) {
        for (Codec codec : {Codec::zlib, Codec::gzip}) {
            TempDir dir("acc-slots");
            EngineConfig config;
            config.compressed_page_bytes = target;
            StorageEngine engine(EngineKind::row, dir.path(), config);
            auto& table = engine.create_table(TableSchema::eventlog(), codec);
            std::vector<Record> records;
            for (std::size_t i = 0; i < 2000; ++i) {
                // Mix of repetitive and random text so some pages split.
                records.push_back(Record{{"c" + std::to_string(100000 + i), std::int64_t{1}, "0", "act",
                                          i % 3 ? std::string(60, 'x') : random_text(rng, 50, 300)}});
            }
            table.bulk_load(records);
            std::uint64_t sum = 0;
            for (auto s : dynamic_cast<RowTable&>(table).page_disk_sizes()) {
                if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
                    o.fail("compressed page of " + std::to_string(s) + " bytes");
                }
                sum += s;
                ++pages;
            }
            if (sum != table.disk_usage()) o.fail("compressed usage disagrees with page sizes");
        }
    }
    std::size_t segments = 0;
    std::size_t largest = 0;
    for (Codec codec : {Codec::none, Codec::gzip}) {
        TempDir dir("acc-segs");
        EngineConfig config;
        config.flush_threshold_bytes = 300 * 1024;
        StorageEngine engine(EngineKind::column, dir.path(), config);
        auto& table = engine.create_table(TableSchema::eventlog(), codec);
        const auto records = distinct_events(rng, 30000);
        table.bulk_load(std::span(records).first(15000));
        table.insert_batch(std::span(records).subspan(15000), 700);
        table.commit();
        table.compact();
        for (const auto& s : dynamic_cast<ColumnTable&>(table).segments()) {
            if (s.image_bytes > kMaxSegmentBytes || s.file_bytes > kMaxSegmentBytes) {
                o.fail("segment of " + std::to_string(s.image_bytes) + " bytes");
            }
            largest = std::max<std::size_t>(largest, s.image_bytes);
            ++segments;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(checks) + " row usages multiple of 16384; " + std::to_string(pages) +
                   " compressed pages in {1,2,4,8,16} KiB; " + std::to_string(segments) +
                   " segments, largest " + std::to_string(largest) + " bytes";
    }
    return o;
}

// 7
Outcome compression() {
    Outcome o;
    std::mt19937_64 rng(7007);
    for (int i = 0; i < kCodecPayloads; ++i) {
        Bytes data(rng() % (64 * 1024 + 1));
        const bool text = i % 2 == 0;
        for (auto& b : data) b = static_cast<std::uint8_t>(text ? 'a' + rng() % 6 : rng());
        for (Codec c : {Codec::zlib, Codec::gzip}) {
            if (decompress_block(c, compress_block(c, data)) != data) o.fail("round trip " + std::to_string(i));
        }
    }
    const auto delta = compress_block(Codec::gzip, {}).size() - compress_block(Codec::zlib, {}).size();
    if (delta != kFramingDelta) o.fail("empty-payload framing delta " + std::to_string(delta));

    const auto log = generate_synthetic_log(ProcessModel::and_split, 2000, 11);
    std::string smallest;
    double smallest_ratio = 1e300;
    for (auto kind : {EngineKind::row, EngineKind::column}) {
        TempDir plain_dir("acc-plain"), packed_dir("acc-packed");
        EngineConfig plain_cfg, packed_cfg;
        packed_cfg.compression = kind == EngineKind::row ? Codec::zlib : Codec::gzip;
        StorageEngine plain(kind, plain_dir.path(), plain_cfg);
        StorageEngine packed(kind, packed_dir.path(), packed_cfg);
        if (mine(log, plain) != mine(log, packed)) o.fail("compression changed the mined net");
        for (auto name : kMiningTables) {
            const double u = static_cast<double>(plain.table(name).disk_usage());
            const double c = static_cast<double>(packed.table(name).disk_usage());
            if (!(c < u)) {
                o.fail(std::string(to_string(kind)) + " table " + std::string(name) + ": " + fmt(c, "%.0f") +
                       " >= " + fmt(u, "%.0f") + " bytes");
            }
            if (c > 0 && u / c < smallest_ratio) {
                smallest_ratio = u / c;
                smallest = std::string(to_string(kind)) + "/" + std::string(name);
            }
        }
    }
    if (o.pass) {
        o.detail = std::to_string(kCodecPayloads) + " payloads round trip; framing delta " + std::to_string(delta) +
                   " bytes; every step table smaller compressed (lowest ratio " + fmt(smallest_ratio, "%.2f") +
                   " on " + smallest + ")";
    }
    return o;
}

bench::BenchmarkReport trend_report;

// 8
Outcome trends() {
    Outcome o;
    TempDir work("acc-bench");
    auto cfg = bench::BenchmarkConfig::scaled(kTrendScale);
    cfg.repetitions = kTrendReps;
    cfg.work_dir = work.path();
    const auto start = WallClock::now();
    for (auto suite : bench::all_suites()) {
        cfg.suite = suite;
        trend_report.append(bench::run(cfg));
    }
    const double elapsed = seconds_since(start);
    trend_report.sort();
    if (elapsed >= kBenchBudgetSeconds) o.fail("full bench took " + fmt(elapsed, "%.1f") + " s");

    const std::string largest = std::to_string(cfg.sizes.back());
    const auto* row_load = trend_report.find("load", "row", largest, "load_time");
    const auto* col_load = trend_report.find("load", "column", largest, "load_time");
    if (!row_load || !col_load) {
        o.fail("missing load rows");
        return o;
    }
    if (!(col_load->mean <= row_load->mean)) {
        o.fail("column load " + fmt(col_load->mean, "%.4f") + " s > row load " + fmt(row_load->mean, "%.4f") +
               " s at " + largest);
    }

    double worst = 1e300;
    std::string worst_at;
    for (auto kind : {"row", "column"}) {
        for (auto size : cfg.batch_sizes) {
            if (size < kMinBatchForSpeedup) continue;
            const auto param = std::to_string(size);
            const auto* batch = trend_report.find("batch", kind, param, "per_record");
            const auto* single = trend_report.find("single", kind, param, "per_record");
            if (!batch || !single) {
                o.fail(std::string("missing insert rows for ") + kind + " " + param);
                continue;
            }
            const double speedup = single->mean / batch->mean;
            if (speedup < worst) {
                worst = speedup;
                worst_at = std::string(kind) + " at " + param;
            }
            if (speedup < kBatchSpeedup) {
                o.fail(std::string(kind) + " batch " + param + " only " + fmt(speedup, "%.2f") + "x faster per record");
            }
        }
    }
    if (o.pass) {
        o.detail = "column load " + fmt(col_load->mean, "%.4f") + " s <= row " + fmt(row_load->mean, "%.4f") +
                   " s at " + largest + "; batch per-record speedup >= " + fmt(worst, "%.1f") + "x (" + worst_at +
                   "); full bench " + fmt(elapsed, "%.1f") + " s (limit " + fmt(kBenchBudgetSeconds, "%.0f") + " s)";
    }
    return o;
}

// 9
Outcome report_format() {
    Outcome o;
    bench::BenchmarkReport report = trend_report;
    if (report.rows.empty()) report.add(bench::Suite::load, EngineKind::row, "1", "load_time", {1, 2}, "s");
    std::ostringstream a, b;
    bench::write_report_csv(report, a);
    bench::write_report_csv(report, b);
    auto shuffled = report;
    std::mt19937_64 rng(9009);
    std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), rng);
    std::ostringstream c;
    bench::write_report_csv(shuffled, c);
    if (a.str() != b.str()) o.fail("two writes of one report differ");
    if (a.str() != c.str()) o.fail("row order leaks into the CSV");

    std::size_t cells = 0;
    for (int i = 0; i < 200; ++i) {
        const auto traces = random_traces(rng, 1 + rng() % 8, 12, 10);
        const auto follows = adjacent_pairs(traces);
        const auto fp = footprint(make_log(traces));
        std::istringstream csv_in(footprint_csv(fp));
        csv::Reader reader(csv_in);
        const auto header = reader.next();
        const auto acts = activities_of(traces);
        if (!header || header->fields.size() != acts.size() + 1) {
            o.fail("footprint header");
            continue;
        }
        while (auto row = reader.next()) {
            const std::string& from = row->fields[0];
            for (std::size_t j = 1; j < row->fields.size(); ++j) {
                const std::string& to = header->fields[j];
                const bool ab = follows.count({from, to}) > 0;
                const bool ba = follows.count({to, from}) > 0;
                // Exactly one of the four relations holds.
                const int holds = (ab && !ba) + (!ab && ba) + (ab && ba) + (!ab && !ba);
                const std::string expected = ab && ba ? "||" : ab ? "->" : ba ? "<-" : "#";
                if (holds != 1 || row->fields[j] != expected) o.fail("cell " + from + "," + to);
                const auto mirror = fp.at(to, from);
                const auto cell = fp.at(from, to);
                const bool consistent =
                    (cell == Relation::causality_forward) == (mirror == Relation::causality_backward) &&
                    (cell == Relation::parallel) == (mirror == Relation::parallel) &&
                    (cell == Relation::choice) == (mirror == Relation::choice);
                if (!consistent) o.fail("mirror cell " + to + "," + from);
                ++cells;
            }
        }
    }
    if (o.pass) {
        o.detail = "CSV of " + std::to_string(report.rows.size()) + " rows byte-identical across writes and row order; " +
                   std::to_string(cells) + " footprint cells each in exactly one relation";
    }
    return o;
}

} // namespace

int main() {
    const auto start = WallClock::now();
    report(1, "alpha-miner oracle equivalence", oracle_equivalence);
    report(2, "rediscovery of generator models", rediscovery);
    report(3, "engine independence", engine_independence);
    report(4, "cross-engine scan equivalence", scan_equivalence);
    report(5, "column engine durability", durability);
    report(6, "block accounting", block_accounting);
    report(7, "compression", compression);
    report(8, "benchmark trends", trends);
    report(9, "report format and footprint trichotomy", report_format);
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << " in "
              << fmt(seconds_since(start), "%.1f") << " s" << std::endl;
    return failures == 0 ? 0 : 1;
}
