#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace eyesec::codec {

/// 802.15.4 extended (EUI-64) address, most significant byte first.
class MacAddress {
public:
    using Octets = std::array<std::uint8_t, 8>;

    constexpr MacAddress() = default;
    constexpr explicit MacAddress(const Octets& octets) : octets_(octets) {}

    /// Accepts "00:12:4b:00:aa:bb:cc:dd" or 16 bare hex digits.
    static MacAddress parse(std::string_view text);

    const Octets& octets() const { return octets_; }

    /// Canonical text: 16 lowercase hex digits, colon-grouped per byte.
    std::string to_string() const;

    friend auto operator<=>(const MacAddress&, const MacAddress&) = default;

private:
    Octets octets_{};
};

class Ipv6Address {
public:
    using Octets = std::array<std::uint8_t, 16>;

    constexpr Ipv6Address() = default;
    constexpr explicit Ipv6Address(const Octets& octets) : octets_(octets) {}

    static Ipv6Address parse(std::string_view text);

    const Octets& octets() const { return octets_; }

    /// RFC 5952 text form.
    std::string to_string() const;

    bool is_unspecified() const;
    bool is_multicast() const { return octets_[0] == 0xff; }
    /// fe80::/64 with the remaining prefix bits zero.
    bool is_link_local() const;

    friend auto operator<=>(const Ipv6Address&, const Ipv6Address&) = default;

private:
    Octets octets_{};
};

/// Link-local fe80::/64 address whose interface identifier is the modified
/// EUI-64 form of `mac` (universal/local bit inverted).
Ipv6Address mac_to_ipv6(const MacAddress& mac);

/// Recovers the MAC from a modified-EUI-64 interface identifier. Throws
/// CodecError(NonDerivableAddress) for multicast or unspecified addresses.
MacAddress ipv6_to_mac(const Ipv6Address& addr);

} // namespace eyesec::codec

template <>
struct std::hash<eyesec::codec::MacAddress> {
    std::size_t operator()(const eyesec::codec::MacAddress& m) const noexcept
    {
        std::size_t h = 0;
        for (auto b : m.octets()) h = h * 131 + b;
        return h;
    }
};

template <>
struct std::hash<eyesec::codec::Ipv6Address> {
    std::size_t operator()(const eyesec::codec::Ipv6Address& a) const noexcept
    {
        std::size_t h = 0;
        for (auto b : a.octets()) h = h * 131 + b;
        return h;
    }
};
