#include "eyesec/codec/address.hpp"

#include <algorithm>
#include <stdexcept>

#include <arpa/inet.h>

#include "eyesec/codec/error.hpp"

namespace eyesec::codec {

namespace {

int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// U/L bit of the first EUI-64 octet.
constexpr std::uint8_t kUniversalLocalBit = 0x02;

} // namespace

const char* to_string(CodecErrc code)
{
    switch (code) {
    case CodecErrc::TruncatedFrame: return "TruncatedFrame";
    case CodecErrc::BadChecksum: return "BadChecksum";
    case CodecErrc::PayloadTooLarge: return "PayloadTooLarge";
    case CodecErrc::MalformedFrame: return "MalformedFrame";
    case CodecErrc::MalformedDatagram: return "MalformedDatagram";
    case CodecErrc::BadUdpChecksum: return "BadUdpChecksum";
    case CodecErrc::NonDerivableAddress: return "NonDerivableAddress";
    case CodecErrc::BadMagic: return "BadMagic";
    case CodecErrc::UnsupportedLinkType: return "UnsupportedLinkType";
    case CodecErrc::MalformedCapture: return "MalformedCapture";
    }
    return "unknown";
}

MacAddress MacAddress::parse(std::string_view text)
{
    std::string digits;
    for (char c : text) {
        if (c == ':' || c == '-') continue;
        digits.push_back(c);
    }
    if (digits.size() != 16) throw std::invalid_argument("MAC address must have 8 octets: " + std::string(text));
    Octets octets{};
    for (std::size_t i = 0; i < 8; ++i) {
        int hi = hex_value(digits[2 * i]);
        int lo = hex_value(digits[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid MAC address: " + std::string(text));
        octets[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return MacAddress(octets);
}

std::string MacAddress::to_string() const
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(23);
    for (std::size_t i = 0; i < octets_.size(); ++i) {
        if (i) out.push_back(':');
        out.push_back(kDigits[octets_[i] >> 4]);
        out.push_back(kDigits[octets_[i] & 0x0f]);
    }
    return out;
}

Ipv6Address Ipv6Address::parse(std::string_view text)
{
    Octets octets{};
    std::string s(text);
    if (inet_pton(AF_INET6, s.c_str(), octets.data()) != 1) throw std::invalid_argument("invalid IPv6 address: " + s);
    return Ipv6Address(octets);
}

std::string Ipv6Address::to_string() const
{
    char buf[INET6_ADDRSTRLEN];
    inet_ntop(AF_INET6, octets_.data(), buf, sizeof buf);
    return buf;
}

bool Ipv6Address::is_unspecified() const
{
    return std::all_of(octets_.begin(), octets_.end(), [](auto b) { return b == 0; });
}

bool Ipv6Address::is_link_local() const
{
    return octets_[0] == 0xfe && octets_[1] == 0x80
        && std::all_of(octets_.begin() + 2, octets_.begin() + 8, [](auto b) { return b == 0; });
}

Ipv6Address mac_to_ipv6(const MacAddress& mac)
{
    Ipv6Address::Octets o{};
    o[0] = 0xfe;
    o[1] = 0x80;
    std::copy(mac.octets().begin(), mac.octets().end(), o.begin() + 8);
    o[8] ^= kUniversalLocalBit;
    return Ipv6Address(o);
}

MacAddress ipv6_to_mac(const Ipv6Address& addr)
{
    if (addr.is_multicast()) {
        throw CodecError(CodecErrc::NonDerivableAddress, "multicast address has no device identity: " + addr.to_string());
    }
    if (addr.is_unspecified()) {
        throw CodecError(CodecErrc::NonDerivableAddress, "unspecified address has no device identity");
    }
    MacAddress::Octets m{};
    std::copy(addr.octets().begin() + 8, addr.octets().end(), m.begin());
    m[0] ^= kUniversalLocalBit;
    return MacAddress(m);
}

} // namespace eyesec::codec
