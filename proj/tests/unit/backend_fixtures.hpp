#pragma once

#include "eyesec/codec/echo.hpp"
#include "eyesec/codec/trailer.hpp"
#include "eyesec/sniffer/records.hpp"
#include "sim_fixtures.hpp"

namespace eyesec::test {

using std::chrono::microseconds;

/// A first-hop echo request from node `from` to node `to`, optionally signed.
inline sniffer::HopRecord echo_hop(std::uint8_t from, std::uint8_t to, std::uint32_t seq,
                                   const crypto::Ed25519Keypair* key = nullptr)
{
    sniffer::HopRecord h;
    h.src_mac = mac_n(from);
    h.dst_mac = mac_n(to);
    h.src_ip = codec::mac_to_ipv6(h.src_mac);
    h.dst_ip = codec::mac_to_ipv6(h.dst_mac);
    h.src_port = codec::kEchoClientPort;
    h.dst_port = codec::kEchoServerPort;
    h.hop_limit = 64;
    h.frame_seq = static_cast<std::uint8_t>(seq);
    h.seq_payload = seq;
    auto body = codec::encode_echo(seq);
    h.payload = key ? codec::append_trailer(body, key->sign(codec::signed_message(h.src_ip, h.dst_ip, body))) : body;
    Bytes tag = h.payload;
    tag.push_back(from);
    tag.push_back(to);
    h.digest = crypto::md5(tag);
    return h;
}

/// The same datagram relayed by `via` towards `to`.
inline sniffer::HopRecord relay(sniffer::HopRecord h, std::uint8_t via, std::uint8_t to)
{
    h.src_mac = mac_n(via);
    h.dst_mac = mac_n(to);
    Bytes tag = h.payload;
    tag.push_back(via);
    tag.push_back(to);
    h.digest = crypto::md5(tag);
    return h;
}

inline sniffer::PacketReport witness(sniffer::HopRecord h, std::string sniffer_id, std::int64_t ts_us,
                                     double rssi = -60.0)
{
    h.ts = microseconds(ts_us);
    h.rssi = rssi;
    return {std::move(sniffer_id), std::move(h)};
}

} // namespace eyesec::test
