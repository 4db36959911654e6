#include "eyesec/codec/lowpan.hpp"

#include <algorithm>

namespace eyesec::codec {

namespace {

enum AddressMode : std::uint8_t {
    kInline128 = 0b00,
    kInline64 = 0b01,
    kElided = 0b11,
};

AddressMode address_mode(const Ipv6Address& addr, const MacAddress& link)
{
    if (addr == mac_to_ipv6(link)) return kElided;
    if (addr.is_link_local()) return kInline64;
    return kInline128;
}

std::size_t inline_size(AddressMode mode)
{
    switch (mode) {
    case kInline128: return 16;
    case kInline64: return 8;
    case kElided: return 0;
    }
    return 0;
}

void put_address(Bytes& out, const Ipv6Address& addr, AddressMode mode)
{
    const auto& o = addr.octets();
    out.insert(out.end(), o.end() - static_cast<std::ptrdiff_t>(inline_size(mode)), o.end());
}

void put_be16(Bytes& out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

class Reader {
public:
    explicit Reader(ByteView bytes) : bytes_(bytes) {}

    ByteView take(std::size_t n)
    {
        if (bytes_.size() - pos_ < n) throw CodecError(CodecErrc::MalformedDatagram, "datagram truncated");
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t be16()
    {
        auto b = take(2);
        return static_cast<std::uint16_t>(b[0] << 8 | b[1]);
    }
    ByteView rest() { return take(bytes_.size() - pos_); }

private:
    ByteView bytes_;
    std::size_t pos_ = 0;
};

Ipv6Address read_address(Reader& r, std::uint8_t mode, const MacAddress& link)
{
    switch (mode) {
    case kElided: return mac_to_ipv6(link);
    case kInline64: {
        Ipv6Address::Octets o{};
        o[0] = 0xfe;
        o[1] = 0x80;
        auto iid = r.take(8);
        std::copy(iid.begin(), iid.end(), o.begin() + 8);
        return Ipv6Address(o);
    }
    case kInline128: {
        Ipv6Address::Octets o{};
        auto full = r.take(16);
        std::copy(full.begin(), full.end(), o.begin());
        return Ipv6Address(o);
    }
    default: throw CodecError(CodecErrc::MalformedDatagram, "unsupported IPHC address mode");
    }
}

void validate(const Datagram6LoWPAN& d)
{
    if (d.src_ip.is_unspecified()) throw CodecError(CodecErrc::MalformedDatagram, "unspecified source address");
    if (d.src_port == 0 || d.dst_port == 0) throw CodecError(CodecErrc::MalformedDatagram, "UDP port must be nonzero");
}

} // namespace

std::uint16_t udp_checksum(const Datagram6LoWPAN& d)
{
    const std::uint32_t udp_len = static_cast<std::uint32_t>(8 + d.payload.size());
    std::uint32_t sum = 0;
    auto add16 = [&sum](std::uint16_t w) { sum += w; };
    auto add_bytes = [&add16](ByteView b) {
        for (std::size_t i = 0; i < b.size(); i += 2) {
            std::uint16_t hi = b[i];
            std::uint16_t lo = i + 1 < b.size() ? b[i + 1] : 0;
            add16(static_cast<std::uint16_t>(hi << 8 | lo));
        }
    };
    add_bytes(d.src_ip.octets());
    add_bytes(d.dst_ip.octets());
    add16(static_cast<std::uint16_t>(udp_len >> 16));
    add16(static_cast<std::uint16_t>(udp_len & 0xffff));
    add16(17);
    add16(d.src_port);
    add16(d.dst_port);
    add16(static_cast<std::uint16_t>(udp_len));
    add_bytes(d.payload);
    while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
    auto csum = static_cast<std::uint16_t>(~sum);
    return csum == 0 ? 0xffff : csum;
}

std::size_t datagram_overhead(const Datagram6LoWPAN& d, const MacAddress& link_src, const MacAddress& link_dst)
{
    // dispatch + IPHC byte + hop limit + NHC + ports + checksum
    return 2 + 1 + inline_size(address_mode(d.src_ip, link_src)) + inline_size(address_mode(d.dst_ip, link_dst)) + 1 + 4
        + 2;
}

Bytes encode_datagram(const Datagram6LoWPAN& d, const MacAddress& link_src, const MacAddress& link_dst)
{
    validate(d);
    const auto sam = address_mode(d.src_ip, link_src);
    const auto dam = address_mode(d.dst_ip, link_dst);
    Bytes out;
    out.reserve(datagram_overhead(d, link_src, link_dst) + d.payload.size());
    out.push_back(kIphcDispatch);
    out.push_back(static_cast<std::uint8_t>(sam << 4 | dam));
    out.push_back(d.hop_limit);
    put_address(out, d.src_ip, sam);
    put_address(out, d.dst_ip, dam);
    out.push_back(kUdpNhc);
    put_be16(out, d.src_port);
    put_be16(out, d.dst_port);
    put_be16(out, udp_checksum(d));
    out.insert(out.end(), d.payload.begin(), d.payload.end());
    return out;
}

Datagram6LoWPAN decode_datagram(ByteView bytes, const MacAddress& link_src, const MacAddress& link_dst)
{
    Reader r(bytes);
    if (r.u8() != kIphcDispatch) throw CodecError(CodecErrc::MalformedDatagram, "unsupported 6LoWPAN dispatch");
    const std::uint8_t modes = r.u8();
    // CID, SAC, M and DAC must all be clear.
    if (modes & 0b1100'1100) throw CodecError(CodecErrc::MalformedDatagram, "unsupported IPHC context/multicast flags");

    Datagram6LoWPAN d;
    d.hop_limit = r.u8();
    d.src_ip = read_address(r, (modes >> 4) & 0b11, link_src);
    d.dst_ip = read_address(r, modes & 0b11, link_dst);
    if (r.u8() != kUdpNhc) throw CodecError(CodecErrc::MalformedDatagram, "unsupported next-header compression");
    d.src_port = r.be16();
    d.dst_port = r.be16();
    const std::uint16_t checksum = r.be16();
    auto payload = r.rest();
    d.payload.assign(payload.begin(), payload.end());
    validate(d);
    if (udp_checksum(d) != checksum) throw CodecError(CodecErrc::BadUdpChecksum, "UDP checksum mismatch");
    return d;
}

} // namespace eyesec::codec
