#include "eyesec/codec/trailer.hpp"

#include <algorithm>

namespace eyesec::codec {

Bytes signed_message(const Ipv6Address& src_ip, const Ipv6Address& dst_ip, ByteView body)
{
    Bytes msg;
    msg.reserve(32 + body.size());
    msg.insert(msg.end(), src_ip.octets().begin(), src_ip.octets().end());
    msg.insert(msg.end(), dst_ip.octets().begin(), dst_ip.octets().end());
    msg.insert(msg.end(), body.begin(), body.end());
    return msg;
}

Bytes append_trailer(ByteView body, const crypto::Ed25519Signature& signature)
{
    Bytes out(body.begin(), body.end());
    out.push_back(static_cast<std::uint8_t>(signature.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(signature.size() & 0xff));
    out.insert(out.end(), signature.begin(), signature.end());
    return out;
}

SplitPayload split_trailer(ByteView payload)
{
    if (payload.size() < kTrailerSize) return {payload, std::nullopt};
    const std::size_t len_off = payload.size() - kTrailerSize;
    const std::size_t len = static_cast<std::size_t>(payload[len_off] << 8 | payload[len_off + 1]);
    if (len != crypto::kEd25519SignatureSize) return {payload, std::nullopt};
    crypto::Ed25519Signature sig{};
    std::copy(payload.begin() + static_cast<std::ptrdiff_t>(len_off + 2), payload.end(), sig.begin());
    return {payload.first(len_off), sig};
}

} // namespace eyesec::codec
