#include "eyesec/codec/frame.hpp"

#include <algorithm>

namespace eyesec::codec {

namespace {

void put_le16(Bytes& out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint16_t get_le16(ByteView b, std::size_t off)
{
    return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

void put_address(Bytes& out, const MacAddress& mac)
{
    const auto& o = mac.octets();
    out.insert(out.end(), o.rbegin(), o.rend());
}

MacAddress get_address(ByteView b, std::size_t off)
{
    MacAddress::Octets o{};
    std::reverse_copy(b.begin() + off, b.begin() + off + 8, o.begin());
    return MacAddress(o);
}

} // namespace

std::uint16_t crc16_kermit(ByteView bytes)
{
    std::uint16_t crc = 0x0000;
    for (auto byte : bytes) {
        crc ^= byte;
        for (int i = 0; i < 8; ++i) crc = (crc & 1) ? static_cast<std::uint16_t>((crc >> 1) ^ 0x8408) : crc >> 1;
    }
    return crc;
}

Bytes encode_frame(const Frame802154& frame)
{
    if (frame.payload.size() > kMaxFramePayload) {
        throw CodecError(CodecErrc::PayloadTooLarge,
                         "frame payload of " + std::to_string(frame.payload.size()) + " bytes exceeds "
                             + std::to_string(kMaxFramePayload));
    }
    Bytes out;
    out.reserve(kMinFrameSize + frame.payload.size());
    put_le16(out, kFrameControl);
    out.push_back(frame.seq_no);
    put_le16(out, frame.pan_id);
    put_address(out, frame.dst_mac);
    put_le16(out, frame.pan_id);
    put_address(out, frame.src_mac);
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    put_le16(out, crc16_kermit(out));
    return out;
}

Frame802154 decode_frame(ByteView bytes)
{
    if (bytes.size() < kMinFrameSize) {
        throw CodecError(CodecErrc::TruncatedFrame, "frame of " + std::to_string(bytes.size()) + " bytes is shorter than "
                                                        + std::to_string(kMinFrameSize));
    }
    if (bytes.size() > kMaxPhyPayload) {
        throw CodecError(CodecErrc::PayloadTooLarge, "frame exceeds 127-byte PHY payload");
    }
    const std::size_t body = bytes.size() - kFcsSize;
    const std::uint16_t fcs = get_le16(bytes, body);
    if (crc16_kermit(bytes.first(body)) != fcs) throw CodecError(CodecErrc::BadChecksum, "FCS mismatch");
    if (get_le16(bytes, 0) != kFrameControl) throw CodecError(CodecErrc::MalformedFrame, "unsupported frame control field");

    Frame802154 f;
    f.seq_no = bytes[2];
    f.pan_id = get_le16(bytes, 3);
    f.dst_mac = get_address(bytes, 5);
    if (get_le16(bytes, 13) != f.pan_id) throw CodecError(CodecErrc::MalformedFrame, "source and destination PAN ids differ");
    f.src_mac = get_address(bytes, 15);
    f.payload.assign(bytes.begin() + kFrameHeaderSize, bytes.begin() + body);
    f.fcs = fcs;
    return f;
}

} // namespace eyesec::codec
