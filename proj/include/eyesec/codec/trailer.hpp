#pragma once

#include <optional>

#include "eyesec/codec/address.hpp"
#include "eyesec/common/bytes.hpp"
#include "eyesec/crypto/crypto.hpp"

namespace eyesec::codec {

// Signed UDP payloads end in a trailer: a 2-byte big-endian length (always 64)
// followed by the Ed25519 signature. Unsigned payloads carry no trailer.
inline constexpr std::size_t kTrailerSize = 2 + crypto::kEd25519SignatureSize;

/// The byte string that is signed: src_ip || dst_ip || body.
Bytes signed_message(const Ipv6Address& src_ip, const Ipv6Address& dst_ip, ByteView body);

Bytes append_trailer(ByteView body, const crypto::Ed25519Signature& signature);

struct SplitPayload {
    ByteView body;
    std::optional<crypto::Ed25519Signature> signature;
};

/// A payload is considered signed iff it is at least kTrailerSize long and
/// the length field in front of the last 64 bytes reads 64.
SplitPayload split_trailer(ByteView payload);

} // namespace eyesec::codec
