#include "eyesec/crypto/crypto.hpp"

#include <memory>

#include <openssl/evp.h>
#include <openssl/rand.h>

namespace eyesec::crypto {

namespace {

struct PkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

template <std::size_t N>
std::array<std::uint8_t, N> digest(const EVP_MD* md, ByteView data)
{
    std::array<std::uint8_t, N> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1 || len != N) {
        throw CryptoError("EVP_Digest failed");
    }
    return out;
}

PkeyPtr private_key(const Ed25519Seed& seed)
{
    PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size()));
    if (!key) throw CryptoError("cannot load Ed25519 private key");
    return key;
}

} // namespace

Md5Digest md5(ByteView data) { return digest<16>(EVP_md5(), data); }

Sha256Digest sha256(ByteView data) { return digest<32>(EVP_sha256(), data); }

std::string base64_encode(ByteView data)
{
    std::string out(4 * ((data.size() + 2) / 3), '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(), static_cast<int>(data.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

Bytes base64_decode(std::string_view text)
{
    if (text.size() % 4 != 0) throw std::invalid_argument("base64 length must be a multiple of 4");
    Bytes out(3 * text.size() / 4);
    int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
    if (n < 0) throw std::invalid_argument("malformed base64");
    // EVP_DecodeBlock keeps the bytes produced by '=' padding.
    std::size_t pad = 0;
    if (!text.empty() && text.back() == '=') ++pad;
    if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

void random_bytes(std::span<std::uint8_t> out)
{
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) throw CryptoError("RAND_bytes failed");
}

Ed25519Keypair Ed25519Keypair::from_seed(const Ed25519Seed& seed)
{
    Ed25519Keypair kp;
    kp.seed_ = seed;
    auto key = private_key(seed);
    std::size_t len = kp.public_key_.size();
    if (EVP_PKEY_get_raw_public_key(key.get(), kp.public_key_.data(), &len) != 1 || len != kp.public_key_.size()) {
        throw CryptoError("cannot derive Ed25519 public key");
    }
    return kp;
}

Ed25519Keypair Ed25519Keypair::generate()
{
    Ed25519Seed seed{};
    random_bytes(seed);
    return from_seed(seed);
}

Ed25519Signature Ed25519Keypair::sign(ByteView message) const
{
    auto key = private_key(seed_);
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) {
        throw CryptoError("EVP_DigestSignInit failed");
    }
    Ed25519Signature sig{};
    std::size_t len = sig.size();
    if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1 || len != sig.size()) {
        throw CryptoError("EVP_DigestSign failed");
    }
    return sig;
}

bool ed25519_verify(const Ed25519PublicKey& key, ByteView message, ByteView signature)
{
    if (signature.size() != kEd25519SignatureSize) return false;
    PkeyPtr pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, key.data(), key.size()));
    if (!pkey) return false;
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) return false;
    return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(), message.size()) == 1;
}

} // namespace eyesec::crypto
