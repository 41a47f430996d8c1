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

#include "alphamine/error.hpp"
#include "alphamine/storage/codec.hpp"

using namespace alphamine;
using namespace alphamine::storage;

namespace {

Bytes random_bytes(std::mt19937_64& rng, std::size_t n, bool compressible) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(compressible ? 'a' + rng() % 4 : rng());
    return out;
}

Bytes text_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

} // namespace

TEST(Codec, RoundTripRandomPayloads) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const auto data = random_bytes(rng, rng() % (64 * 1024 + 1), i % 2 == 0);
        for (auto c : {Codec::none, Codec::zlib, Codec::gzip}) {
            EXPECT_EQ(decompress_block(c, compress_block(c, data)), data);
        }
    }
}

TEST(Codec, EmptyPayloadFramingDelta) {
    const auto z = compress_block(Codec::zlib, {});
    const auto g = compress_block(Codec::gzip, {});
    EXPECT_EQ(g.size() - z.size(), 12u);
    EXPECT_EQ(framing_overhead(Codec::zlib), 6u);
    EXPECT_EQ(framing_overhead(Codec::gzip), 18u);
    EXPECT_EQ(framing_overhead(Codec::none), 0u);
    // An empty deflate stream is 2 bytes: 2 + 6 and 2 + 18.
    EXPECT_EQ(z.size(), 8u);
    EXPECT_EQ(g.size(), 20u);
}

TEST(Codec, FramingHeaders) {
    const auto z = compress_block(Codec::zlib, text_bytes("hello"));
    const auto g = compress_block(Codec::gzip, text_bytes("hello"));
    EXPECT_EQ(z[0] & 0x0f, 8);  // CM = deflate
    EXPECT_EQ((z[0] * 256 + z[1]) % 31, 0);
    EXPECT_EQ(g[0], 0x1f);
    EXPECT_EQ(g[1], 0x8b);
}

TEST(Codec, CorruptAndTruncatedFrames) {
    const auto data = text_bytes(std::string(5000, 'x') + "tail");
    for (auto c : {Codec::zlib, Codec::gzip}) {
        auto frame = compress_block(c, data);
        auto truncated = frame;
        truncated.resize(frame.size() / 2);
        try {
            decompress_block(c, truncated);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::corruption);
        }
        frame[frame.size() - 2] ^= 0xff;  // checksum trailer
        EXPECT_THROW(decompress_block(c, frame), Error);
    }
    EXPECT_THROW(decompress_block(Codec::zlib, text_bytes("not a frame")), Error);
}

TEST(Codec, TrailingPaddingIgnored) {
    const auto data = text_bytes("padded slot contents");
    for (auto c : {Codec::zlib, Codec::gzip}) {
        auto frame = compress_block(c, data);
        frame.resize(frame.size() + 100, 0);
        EXPECT_EQ(decompress_block(c, frame), data);
    }
}

TEST(Codec, RepeatedTextPageFitsHalfPage) {
    std::string page;
    while (page.size() < 16384) page += "case-000123,2013-01-07 08:17:17,001,Assignment,TEAM0001\n";
    page.resize(16384);
    for (auto c : {Codec::zlib, Codec::gzip}) EXPECT_LE(compress_block(c, text_bytes(page)).size(), 8192u);
}

TEST(Codec, LevelZeroStoresUncompressed) {
    std::mt19937_64 rng(3);
    const auto data = random_bytes(rng, 16384, false);
    const auto stored = compress_block(Codec::zlib, data, 0);
    EXPECT_GT(stored.size(), data.size());
    EXPECT_EQ(decompress_block(Codec::zlib, stored), data);
}

TEST(Codec, Names) {
    EXPECT_EQ(parse_codec("gzip"), Codec::gzip);
    EXPECT_EQ(to_string(Codec::zlib), "zlib");
    EXPECT_THROW(parse_codec("lz4"), Error);
}
