#include "eyesec/sniffer/sniffer.hpp"

#include "eyesec/codec/echo.hpp"
#include "eyesec/codec/trailer.hpp"

namespace eyesec::sniffer {

Digest dedup_digest(ByteView frame_bytes) { return crypto::md5(frame_bytes); }

Sniffer::Sniffer(SnifferConfig config) : config_(std::move(config))
{
    if (config_.id.empty()) throw std::invalid_argument("sniffer id must not be empty");
}

CapturedPacket Sniffer::capture(const RawCapture& raw)
{
    CapturedPacket p;
    p.sniffer_id = config_.id;
    p.ts = std::max(raw.time + config_.skew, Micros(1));
    p.rssi = raw.rssi;
    p.raw = raw.bytes;
    p.digest = dedup_digest(raw.bytes);
    try {
        p.frame = codec::decode_frame(raw.bytes);
        p.datagram = codec::decode_datagram(p.frame->payload, p.frame->src_mac, p.frame->dst_mac);
    } catch (const codec::CodecError& e) {
        p.failure = e.code();
        ++corrupt_;
    }
    ++captured_;
    return p;
}

HopRecord extract_hop(const CapturedPacket& p)
{
    if (!p.decoded()) {
        throw SnifferError(std::string("NotDecodable: ") + (p.failure ? codec::to_string(*p.failure) : "no datagram"));
    }
    const auto& f = *p.frame;
    const auto& d = *p.datagram;
    HopRecord h;
    h.src_mac = f.src_mac;
    h.dst_mac = f.dst_mac;
    h.src_ip = d.src_ip;
    h.dst_ip = d.dst_ip;
    h.src_port = d.src_port;
    h.dst_port = d.dst_port;
    h.hop_limit = d.hop_limit;
    h.frame_seq = f.seq_no;
    h.payload = d.payload;
    h.seq_payload = codec::parse_echo(codec::split_trailer(d.payload).body);
    h.digest = p.digest;
    h.ts = p.ts;
    h.rssi = p.rssi;
    if (h.src_mac == h.dst_mac) throw SnifferError("NotDecodable: frame source equals destination");
    return h;
}

} // namespace eyesec::sniffer
