#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eyesec {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Lowercase hex, no separators.
std::string to_hex(ByteView bytes);

/// Inverse of to_hex. Accepts upper or lower case; throws std::invalid_argument
/// on odd length or non-hex characters.
Bytes from_hex(std::string_view text);

inline ByteView as_bytes(std::string_view s)
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

} // namespace eyesec
