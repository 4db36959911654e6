#pragma once

#include <cstdint>

#include "eyesec/codec/address.hpp"
#include "eyesec/codec/error.hpp"
#include "eyesec/common/bytes.hpp"

namespace eyesec::codec {

// Fixed 802.15.4 data-frame layout (see docs/frame-format.md):
//
//   off len field
//    0   2  frame control, always 0xcc01 (data, no security, no PAN-ID
//           compression, 2003 version, extended dst and src addressing)
//    2   1  sequence number
//    3   2  destination PAN id
//    5   8  destination extended address
//   13   2  source PAN id (must equal destination PAN id)
//   15   8  source extended address
//   23   n  payload (6LoWPAN datagram), n <= 102
//   23+n 2  FCS, CRC-16/KERMIT over bytes [0, 23+n)
//
// Multi-byte fields are little-endian, addresses are byte-reversed on air.
inline constexpr std::uint16_t kFrameControl = 0xcc01;
inline constexpr std::size_t kFrameHeaderSize = 23;
inline constexpr std::size_t kFcsSize = 2;
inline constexpr std::size_t kMaxPhyPayload = 127;
inline constexpr std::size_t kMaxFramePayload = kMaxPhyPayload - kFrameHeaderSize - kFcsSize;
inline constexpr std::size_t kMinFrameSize = kFrameHeaderSize + kFcsSize;

struct Frame802154 {
    std::uint8_t seq_no = 0;
    MacAddress src_mac;
    MacAddress dst_mac;
    std::uint16_t pan_id = 0;
    Bytes payload;
    std::uint16_t fcs = 0;

    friend bool operator==(const Frame802154&, const Frame802154&) = default;
};

/// CRC-16 with polynomial 0x1021 (reflected), init 0x0000: the 802.15.4 FCS.
std::uint16_t crc16_kermit(ByteView bytes);

/// Serializes with a freshly computed FCS (frame.fcs is ignored).
/// Throws CodecError(PayloadTooLarge).
Bytes encode_frame(const Frame802154& frame);

/// Throws CodecError: TruncatedFrame, PayloadTooLarge (over 127 bytes),
/// MalformedFrame (unsupported frame control or PAN ids differ), BadChecksum.
Frame802154 decode_frame(ByteView bytes);

} // namespace eyesec::codec
