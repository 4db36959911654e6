#pragma once

#include <cstdint>
#include <optional>

#include "eyesec/common/bytes.hpp"

namespace eyesec::codec {

// UDP echo workload: clients send a 4-byte big-endian counter to the server
// port, the server answers with the same counter.
inline constexpr std::uint16_t kEchoServerPort = 3000;
inline constexpr std::uint16_t kEchoClientPort = 3001;
inline constexpr std::size_t kEchoBodySize = 4;

inline Bytes encode_echo(std::uint32_t seq)
{
    return {static_cast<std::uint8_t>(seq >> 24), static_cast<std::uint8_t>(seq >> 16),
            static_cast<std::uint8_t>(seq >> 8), static_cast<std::uint8_t>(seq)};
}

inline std::optional<std::uint32_t> parse_echo(ByteView body)
{
    if (body.size() != kEchoBodySize) return std::nullopt;
    return static_cast<std::uint32_t>(body[0]) << 24 | static_cast<std::uint32_t>(body[1]) << 16
        | static_cast<std::uint32_t>(body[2]) << 8 | body[3];
}

} // namespace eyesec::codec
