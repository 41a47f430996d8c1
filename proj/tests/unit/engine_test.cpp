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
#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "alphamine/error.hpp"
#include "alphamine/storage/engine.hpp"
#include "support/oracles.hpp"
#include "support/records.hpp"

using namespace alphamine;
using namespace alphamine::storage;
using alphamine::testing::reference_scan;
using alphamine::testing::TempDir;

namespace {

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return Errc::io;
}

} // namespace

TEST(Schema, Validation) {
    EXPECT_EQ(code_of([] { TableSchema("t", {{"a", ColumnType::string}}, {}); }), Errc::schema);
    EXPECT_EQ(code_of([] { TableSchema("t", {{"a", ColumnType::string}}, {"b"}); }), Errc::schema);
    EXPECT_EQ(code_of([] { TableSchema("t", {{"a", ColumnType::string}, {"a", ColumnType::string}}, {"a"}); }),
              Errc::schema);
    const auto s = TableSchema::eventlog();
    EXPECT_EQ(s.primary_key(), (std::vector<std::string>{"CaseID", "Timestamp", "Status"}));
    EXPECT_EQ(s.key_positions(), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(code_of([&] { s.position("Missing"); }), Errc::schema);
    EXPECT_EQ(code_of([&] { validate_record(s, Record{{"c", std::int64_t{1}}}); }), Errc::schema);
}

TEST(Schema, PrefixRanges) {
    EXPECT_EQ(compare_prefix({std::string("a"), std::int64_t{5}}, {std::string("a")}), std::strong_ordering::equal);
    EXPECT_EQ(compare_prefix({std::string("a")}, {std::string("a"), std::int64_t{1}}), std::strong_ordering::less);
    const KeyRange r{{std::string("b")}, {std::string("b")}};
    EXPECT_TRUE(r.contains({std::string("b"), std::int64_t{9}}));
    EXPECT_FALSE(r.contains({std::string("c"), std::int64_t{0}}));
    EXPECT_TRUE(KeyRange{}.contains({std::string("z")}));
}

TEST(EngineConfig, SetAndLoad) {
    EngineConfig c;
    c.set("flush_threshold_bytes", "4096");
    c.set("durability", "async");
    c.set("compression", "gzip");
    c.set("compressed_page_bytes", "4096");
    EXPECT_EQ(c.flush_threshold_bytes, 4096u);
    EXPECT_EQ(c.durability, Durability::async);
    EXPECT_EQ(c.compression, Codec::gzip);
    EXPECT_EQ(c.compressed_page_bytes, 4096u);
    EXPECT_EQ(code_of([&] { c.set("bogus", "1"); }), Errc::argument);
    EXPECT_EQ(code_of([&] { c.set("row_buffer_bytes", "-3"); }), Errc::argument);
    EXPECT_EQ(code_of([&] { c.set("compressed_page_bytes", "3000"); }), Errc::argument);
    EXPECT_EQ(code_of([&] { c.set("durability", "sometimes"); }), Errc::argument);
    EXPECT_EQ(code_of([&] { c.set("compression", "lz4"); }), Errc::argument);

    TempDir dir("cfg");
    {
        std::ofstream out(dir / "engine.conf");
        out << "# tuned\n\nrow_buffer_bytes = 1024\ncolumn_buffer_bytes=2048\n";
    }
    const auto loaded = EngineConfig::load(dir / "engine.conf");
    EXPECT_EQ(loaded.row_buffer_bytes, 1024u);
    EXPECT_EQ(loaded.column_buffer_bytes, 2048u);
    {
        std::ofstream out(dir / "bad.conf");
        out << "row_buffer_bytes=1\nnonsense\n";
    }
    try {
        EngineConfig::load(dir / "bad.conf");
        FAIL();
    } catch (const LineError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.code(), Errc::argument);
    }
    EXPECT_EQ(code_of([&] { EngineConfig::load(dir / "absent.conf"); }), Errc::argument);
}

TEST(EngineKind, Names) {
    EXPECT_EQ(parse_engine_kind("row"), EngineKind::row);
    EXPECT_EQ(to_string(EngineKind::column), "column");
    EXPECT_EQ(code_of([] { parse_engine_kind("graph"); }), Errc::argument);
}

class Engines : public ::testing::TestWithParam<EngineKind> {};

TEST_P(Engines, TableCatalog) {
    TempDir dir("catalog");
    StorageEngine engine(GetParam(), dir.path());
    engine.create_table(TableSchema::eventlog());
    engine.create_table(TableSchema::string_set("XL", {"setA", "setB"}));
    EXPECT_EQ(engine.table_names(), (std::vector<std::string>{"XL", "eventlog"}));
    EXPECT_EQ(code_of([&] { engine.create_table(TableSchema::eventlog()); }), Errc::duplicate_table);
    EXPECT_EQ(code_of([&] { engine.table("nope"); }), Errc::unknown_table);
    EXPECT_EQ(code_of([&] { engine.drop_table("nope"); }), Errc::unknown_table);
    engine.drop_table("XL");
    EXPECT_FALSE(engine.has_table("XL"));
    EXPECT_FALSE(std::filesystem::exists(dir / "XL"));
    EXPECT_EQ(engine.table("eventlog").kind(), GetParam());
}

TEST_P(Engines, ReopenRecoversTables) {
    TempDir dir("reopen");
    std::mt19937_64 rng(41);
    const auto records = alphamine::testing::distinct_events(rng, 700);
    {
        StorageEngine engine(GetParam(), dir.path());
        auto& t = engine.create_table(TableSchema::eventlog(), Codec::zlib);
        t.insert_batch(std::span(records).first(500), 100);
        t.commit();
        t.insert_batch(std::span(records).subspan(500), 100);
        auto& s = engine.create_table(TableSchema::string_set("PL", {"place"}));
        s.insert(Record{{"a&b"}});
        s.commit();
    }
    StorageEngine engine(GetParam(), dir.path());
    EXPECT_EQ(engine.table_names(), (std::vector<std::string>{"PL", "eventlog"}));
    EXPECT_EQ(engine.table("eventlog").schema(), TableSchema::eventlog());
    EXPECT_EQ(engine.table("eventlog").codec(), Codec::zlib);
    EXPECT_EQ(engine.table("eventlog").scan(), reference_scan(TableSchema::eventlog(), records, {}));
    EXPECT_EQ(engine.table("PL").scan(), (std::vector<Row>{{std::string("a&b")}}));
}

TEST_P(Engines, InstrumentationWithInjectedClock) {
    TempDir dir("clock");
    std::int64_t ticks = 0;
    StorageEngine engine(GetParam(), dir.path(), {}, [&ticks] { return ticks += 10; });
    auto& t = engine.create_table(TableSchema::string_set("S", {"v"}));
    EXPECT_EQ(engine.instrumentation().totals().write_ns, 0);
    t.insert(Record{{"x"}});
    const auto after_write = engine.instrumentation().totals();
    EXPECT_GT(after_write.write_ns, 0);
    EXPECT_EQ(after_write.read_ns, 0);
    EXPECT_EQ(after_write.write_ns % 10, 0);
    t.scan();
    const auto after_read = engine.instrumentation().totals();
    EXPECT_GT(after_read.read_ns, 0);
    EXPECT_EQ(after_read.write_ns, after_write.write_ns);
}

TEST_P(Engines, EmptyBulkLoadAndEmptyScan) {
    TempDir dir("empty");
    StorageEngine engine(GetParam(), dir.path());
    auto& t = engine.create_table(TableSchema::eventlog());
    EXPECT_EQ(t.bulk_load({}).records_loaded, 0u);
    t.commit();
    EXPECT_TRUE(t.scan().empty());
    EXPECT_EQ(t.record_count(), 0u);
    EXPECT_EQ(t.disk_usage(), 0u);
}

INSTANTIATE_TEST_SUITE_P(Storage, Engines, ::testing::Values(EngineKind::row, EngineKind::column),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(CrossEngine, ScansAgreeOnRandomWorkloads) {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 8; ++round) {
        TempDir row_dir("x-row"), col_dir("x-col");
        EngineConfig config;
        config.flush_threshold_bytes = 2048 + rng() % 16384;
        StorageEngine row(EngineKind::row, row_dir.path(), config);
        StorageEngine col(EngineKind::column, col_dir.path(), config);
        const Codec codec = static_cast<Codec>(rng() % 3);
        auto& r = row.create_table(TableSchema::eventlog(), codec);
        auto& c = col.create_table(TableSchema::eventlog(), codec);

        const auto records = alphamine::testing::distinct_events(rng, 400 + rng() % 1200);
        const std::size_t split = records.size() / 2;
        r.bulk_load(std::span(records).first(split));
        c.bulk_load(std::span(records).first(split));
        const std::size_t batch = 1 + rng() % 200;
        r.insert_batch(std::span(records).subspan(split), batch);
        c.insert_batch(std::span(records).subspan(split), batch);
        if (rng() % 2) c.commit();

        static const std::vector<std::string> names{"CaseID", "Timestamp", "Status", "Activity", "Actor"};
        for (int q = 0; q < 25; ++q) {
            ScanSpec spec;
            for (const auto& n : names) {
                if (rng() % 2) spec.projection.push_back(n);
            }
            if (rng() % 3) {
                char lo[32], hi[32];
                const std::size_t cases = records.size() / 4 + 1;
                std::snprintf(lo, sizeof lo, "c%06zu", static_cast<std::size_t>(rng() % cases));
                std::snprintf(hi, sizeof hi, "c%06zu", static_cast<std::size_t>(rng() % cases));
                spec.range = KeyRange{rng() % 5 ? Key{std::string(lo)} : Key{},
                                      rng() % 5 ? Key{std::string(hi)} : Key{}};
            }
            const auto expected = reference_scan(TableSchema::eventlog(), records, spec);
            EXPECT_EQ(r.scan(spec), expected);
            EXPECT_EQ(c.scan(spec), expected);
        }
        EXPECT_EQ(r.record_count(), records.size());
        EXPECT_EQ(c.record_count(), records.size());
    }
}
