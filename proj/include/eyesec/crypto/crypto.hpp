#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eyesec/common/bytes.hpp"

namespace eyesec::crypto {

using Md5Digest = std::array<std::uint8_t, 16>;
using Sha256Digest = std::array<std::uint8_t, 32>;

Md5Digest md5(ByteView data);
Sha256Digest sha256(ByteView data);

std::string base64_encode(ByteView data);
/// Throws std::invalid_argument on malformed input.
Bytes base64_decode(std::string_view text);

/// Fills `out` from the OS CSPRNG.
void random_bytes(std::span<std::uint8_t> out);

class CryptoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Ed25519 (RFC 8032). Signing is deterministic: same key and message always
// produce the same signature.
inline constexpr std::size_t kEd25519SeedSize = 32;
inline constexpr std::size_t kEd25519PublicKeySize = 32;
inline constexpr std::size_t kEd25519SignatureSize = 64;

using Ed25519Seed = std::array<std::uint8_t, kEd25519SeedSize>;
using Ed25519PublicKey = std::array<std::uint8_t, kEd25519PublicKeySize>;
using Ed25519Signature = std::array<std::uint8_t, kEd25519SignatureSize>;

class Ed25519Keypair {
public:
    static Ed25519Keypair from_seed(const Ed25519Seed& seed);
    static Ed25519Keypair generate();

    const Ed25519Seed& seed() const { return seed_; }
    const Ed25519PublicKey& public_key() const { return public_key_; }

    Ed25519Signature sign(ByteView message) const;

    friend bool operator==(const Ed25519Keypair&, const Ed25519Keypair&) = default;

private:
    Ed25519Keypair() = default;
    Ed25519Seed seed_{};
    Ed25519PublicKey public_key_{};
};

/// False for any malformed or non-matching signature; never throws on bad input.
bool ed25519_verify(const Ed25519PublicKey& key, ByteView message, ByteView signature);

} // namespace eyesec::crypto
