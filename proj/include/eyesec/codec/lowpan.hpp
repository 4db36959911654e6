#pragma once

#include <cstdint>

#include "eyesec/codec/address.hpp"
#include "eyesec/codec/error.hpp"
#include "eyesec/common/bytes.hpp"

namespace eyesec::codec {

/// UDP over IPv6 as carried in one 802.15.4 frame.
struct Datagram6LoWPAN {
    Ipv6Address src_ip;
    Ipv6Address dst_ip;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint8_t hop_limit = 64;
    Bytes payload;

    friend bool operator==(const Datagram6LoWPAN&, const Datagram6LoWPAN&) = default;
};

// Compression profile: IPHC with traffic class and flow label elided, hop
// limit inline, next header compressed as UDP NHC (ports and checksum
// inline). Each address uses the shortest stateless mode that applies:
// fully elided when it equals mac_to_ipv6() of the link-layer address,
// 64-bit IID when link-local, otherwise all 128 bits inline.
inline constexpr std::uint8_t kIphcDispatch = 0x7c;
inline constexpr std::uint8_t kUdpNhc = 0xf0;

/// `link_src`/`link_dst` are the MAC addresses of the frame that will carry
/// the datagram. Throws CodecError(MalformedDatagram) when the datagram
/// violates its invariants (unspecified source, zero port).
Bytes encode_datagram(const Datagram6LoWPAN& dgram, const MacAddress& link_src, const MacAddress& link_dst);

/// Throws CodecError(MalformedDatagram) or CodecError(BadUdpChecksum).
Datagram6LoWPAN decode_datagram(ByteView bytes, const MacAddress& link_src, const MacAddress& link_dst);

/// Size of the compressed header for the given addressing, without payload.
std::size_t datagram_overhead(const Datagram6LoWPAN& dgram, const MacAddress& link_src, const MacAddress& link_dst);

/// RFC 8200 UDP checksum over the pseudo-header, UDP header and payload.
std::uint16_t udp_checksum(const Datagram6LoWPAN& dgram);

} // namespace eyesec::codec
