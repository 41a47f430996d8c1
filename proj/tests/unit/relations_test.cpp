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

#include <random>
#include <sstream>

#include "alphamine/csv.hpp"
#include "alphamine/error.hpp"
#include "alphamine/relations.hpp"
#include "../support/oracles.hpp"

using namespace alphamine;
using namespace alphamine::testing;

TEST(DirectlyFollows, Lxor) {
    EXPECT_EQ(directly_follows(make_log(kLxor)), (PairSet{{"a", "b"}, {"b", "d"}, {"a", "c"}, {"c", "d"}}));
}

TEST(DirectlyFollows, SingleEventIsEmpty) { EXPECT_TRUE(directly_follows(make_log({{"a"}})).empty()); }

TEST(DirectlyFollows, Lpar) {
    EXPECT_EQ(directly_follows(make_log(kLpar)), (PairSet{{"a", "b"}, {"b", "c"}, {"c", "d"}, {"a", "c"}, {"c", "b"},
                                                          {"b", "d"}, {"a", "e"}, {"e", "d"}}));
}

TEST(DirectlyFollows, EmptyLogThrows) {
    try {
        directly_follows(EventLog{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::empty_input);
    }
}

TEST(Footprint, LxorCells) {
    const auto fp = footprint(make_log(kLxor));
    EXPECT_EQ(fp.at("b", "c"), Relation::choice);
    EXPECT_EQ(fp.at("a", "b"), Relation::causality_forward);
    EXPECT_EQ(fp.at("b", "a"), Relation::causality_backward);
    EXPECT_EQ(fp.at("d", "a"), Relation::choice);
    EXPECT_EQ(fp.at("a", "a"), Relation::choice);
}

TEST(Footprint, ParallelAndSelfLoop) {
    EXPECT_EQ(footprint(make_log({{"a", "b", "c", "d"}, {"a", "c", "b", "d"}})).at("b", "c"), Relation::parallel);
    EXPECT_EQ(footprint(make_log({{"a", "a", "b"}})).at("a", "a"), Relation::parallel);
}

TEST(Footprint, UnknownActivityIsArgumentError) {
    const auto fp = footprint(make_log(kLxor));
    EXPECT_THROW(fp.at("a", "zz"), Error);
}

TEST(CausalityAndNotConnected, Lxor) {
    const auto fp = footprint(make_log(kLxor));
    EXPECT_EQ(causality_pairs(fp), (PairSet{{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}}));
    EXPECT_TRUE(not_connected(fp).count({"b", "c"}));
}

TEST(CausalityAndNotConnected, SingleActivity) {
    const auto fp = footprint(make_log({{"a"}}));
    EXPECT_TRUE(causality_pairs(fp).empty());
    EXPECT_EQ(not_connected(fp), (PairSet{{"a", "a"}}));
}

TEST(CausalityAndNotConnected, Lpar) {
    const auto fp = footprint(make_log(kLpar));
    EXPECT_EQ(causality_pairs(fp),
              (PairSet{{"a", "b"}, {"a", "c"}, {"a", "e"}, {"b", "d"}, {"c", "d"}, {"e", "d"}}));
    const auto nc = not_connected(fp);
    EXPECT_TRUE(nc.count({"b", "e"}));
    EXPECT_TRUE(nc.count({"c", "e"}));
    EXPECT_FALSE(nc.count({"b", "c"}));
}

// Properties over random logs: every cell matches the definition, the
// relation is total with the stated symmetries, and the matrix depends only
// on (T_L, directly-follows).
TEST(FootprintProperties, RandomLogsAgainstDefinition) {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 300; ++round) {
        const auto traces = random_traces(rng, 6, 8, 7);
        const auto fp = footprint(make_log(traces));
        const auto follows = adjacent_pairs(traces);
        const auto acts = activities_of(traces);

        ASSERT_EQ(fp.size(), acts.size());
        EXPECT_EQ(fp.follows(), follows);
        std::size_t cells = 0;
        for (const auto& a : acts) {
            for (const auto& b : acts) {
                ++cells;
                const Relation r = fp.at(a, b);
                EXPECT_EQ(r, relation_by_definition(follows, a, b));
                const Relation m = fp.at(b, a);
                switch (r) {
                case Relation::parallel: EXPECT_EQ(m, Relation::parallel); break;
                case Relation::choice: EXPECT_EQ(m, Relation::choice); break;
                case Relation::causality_forward: EXPECT_EQ(m, Relation::causality_backward); break;
                case Relation::causality_backward: EXPECT_EQ(m, Relation::causality_forward); break;
                }
            }
        }
        EXPECT_EQ(cells, fp.size() * fp.size());

        // Same (T_L, follows) from a different log gives the same matrix:
        // one two-event trace per pair plus singleton traces.
        TraceList rebuilt;
        for (const auto& [a, b] : follows) rebuilt.push_back({a, b});
        for (const auto& a : acts) rebuilt.push_back({a});
        EXPECT_EQ(footprint(make_log(rebuilt)), fp);
    }
}

TEST(FootprintCsv, ShapeAndSymbols) {
    const auto fp = footprint(make_log(kLpar));
    std::istringstream in(footprint_csv(fp));
    csv::Reader r(in);
    auto header = r.next();
    ASSERT_TRUE(header);
    EXPECT_EQ(header->fields, (std::vector<std::string>{"", "a", "b", "c", "d", "e"}));
    std::size_t rows = 0;
    while (auto row = r.next()) {
        ++rows;
        ASSERT_EQ(row->fields.size(), 6u);
        for (std::size_t j = 1; j < row->fields.size(); ++j) {
            EXPECT_EQ(row->fields[j], symbol(fp.at(row->fields[0], header->fields[j])));
        }
    }
    EXPECT_EQ(rows, 5u);
}
