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
#include "alphamine/storage/codec.hpp"

#include <zlib.h>

#include <string>

#include "alphamine/error.hpp"

namespace alphamine::storage {

namespace {

// zlib's windowBits selects the wrapper: 15 = zlib, 15 + 16 = gzip.
int window_bits(Codec codec) { return codec == Codec::gzip ? 31 : 15; }

} // namespace

std::string_view to_string(Codec codec) noexcept {
    switch (codec) {
    case Codec::none: return "none";
    case Codec::zlib: return "zlib";
    case Codec::gzip: return "gzip";
    }
    return "unknown";
}

Codec parse_codec(std::string_view name) {
    if (name == "none") return Codec::none;
    if (name == "zlib") return Codec::zlib;
    if (name == "gzip") return Codec::gzip;
    throw Error(Errc::argument, "unknown compression '" + std::string(name) + "'");
}

std::size_t framing_overhead(Codec codec) noexcept {
    switch (codec) {
    case Codec::none: return 0;
    case Codec::zlib: return 6;
    case Codec::gzip: return 18;
    }
    return 0;
}

Bytes compress_block(Codec codec, ByteView data, int level) {
    if (codec == Codec::none) return Bytes(data.begin(), data.end());

    z_stream zs{};
    if (deflateInit2(&zs, level, Z_DEFLATED, window_bits(codec), 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        throw Error(Errc::io, "deflateInit2 failed");
    }
    Bytes out(deflateBound(&zs, data.size()) + 32);
    zs.next_in = const_cast<Bytef*>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    const auto written = zs.total_out;
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw Error(Errc::io, "deflate did not finish");
    out.resize(written);
    return out;
}

Bytes decompress_block(Codec codec, ByteView frame) {
    if (codec == Codec::none) return Bytes(frame.begin(), frame.end());

    z_stream zs{};
    if (inflateInit2(&zs, window_bits(codec)) != Z_OK) throw Error(Errc::io, "inflateInit2 failed");
    zs.next_in = const_cast<Bytef*>(frame.data());
    zs.avail_in = static_cast<uInt>(frame.size());

    Bytes out(frame.size() * 4 + 64);
    int rc = Z_OK;
    while (true) {
        zs.next_out = out.data() + zs.total_out;
        zs.avail_out = static_cast<uInt>(out.size() - zs.total_out);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc == Z_STREAM_END) break;
        if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;  // truncated input
        if (rc != Z_OK && rc != Z_BUF_ERROR) break;
        if (zs.avail_out == 0) out.resize(out.size() * 2);
    }
    const auto produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END) {
        throw Error(Errc::corruption, std::string("corrupt ") + std::string(to_string(codec)) + " frame");
    }
    out.resize(produced);
    return out;
}

} // namespace alphamine::storage
