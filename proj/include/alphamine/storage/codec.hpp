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
#include <span>
#include <string_view>
#include <vector>

namespace alphamine::storage {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Framing around a deflate stream. Zlib adds a 2-byte header and a 4-byte
/// Adler-32 trailer; gzip adds a 10-byte header and an 8-byte CRC/size trailer.
enum class Codec : std::uint8_t { none = 0, zlib = 1, gzip = 2 };

std::string_view to_string(Codec codec) noexcept;
Codec parse_codec(std::string_view name);

/// Header plus trailer bytes the framing adds around the deflate payload.
std::size_t framing_overhead(Codec codec) noexcept;

/// `level` follows zlib: -1 default, 0 stored (no compression) .. 9 best.
Bytes compress_block(Codec codec, ByteView data, int level = -1);

/// Throws Errc::corruption on a damaged or truncated frame. Bytes after the
/// end of the stream are ignored, so a frame may sit inside a padded slot.
Bytes decompress_block(Codec codec, ByteView frame);

} // namespace alphamine::storage
