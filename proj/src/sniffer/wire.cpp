#include "eyesec/sniffer/wire.hpp"

#include <algorithm>

namespace eyesec::sniffer {

using nlohmann::json;

std::string digest_hex(const Digest& d) { return to_hex(d); }

Digest parse_digest(const std::string& hex)
{
    auto bytes = from_hex(hex);
    if (bytes.size() != 16) throw std::invalid_argument("digest must be 16 bytes");
    Digest d{};
    std::copy(bytes.begin(), bytes.end(), d.begin());
    return d;
}

json to_json(const PacketReport& r)
{
    const auto& h = r.hop;
    json j{
        {"sniffer_id", r.sniffer_id},
        {"ts", h.ts.count()},
        {"rssi", h.rssi},
        {"digest", digest_hex(h.digest)},
        {"src_mac", h.src_mac.to_string()},
        {"dst_mac", h.dst_mac.to_string()},
        {"src_ip", h.src_ip.to_string()},
        {"dst_ip", h.dst_ip.to_string()},
        {"src_port", h.src_port},
        {"dst_port", h.dst_port},
        {"hop_limit", h.hop_limit},
        {"frame_seq", h.frame_seq},
        {"payload", to_hex(h.payload)},
        {"signature_status", to_string(h.signature_status)},
    };
    j["seq"] = h.seq_payload ? json(*h.seq_payload) : json(nullptr);
    return j;
}

PacketReport report_from_json(const json& j)
{
    PacketReport r;
    r.sniffer_id = j.at("sniffer_id").get<std::string>();
    if (r.sniffer_id.empty()) throw std::invalid_argument("sniffer_id must not be empty");
    auto& h = r.hop;
    h.ts = Micros(j.at("ts").get<std::int64_t>());
    h.rssi = j.at("rssi").get<double>();
    h.digest = parse_digest(j.at("digest").get<std::string>());
    h.src_mac = codec::MacAddress::parse(j.at("src_mac").get<std::string>());
    h.dst_mac = codec::MacAddress::parse(j.at("dst_mac").get<std::string>());
    h.src_ip = codec::Ipv6Address::parse(j.at("src_ip").get<std::string>());
    h.dst_ip = codec::Ipv6Address::parse(j.at("dst_ip").get<std::string>());
    h.src_port = j.at("src_port").get<std::uint16_t>();
    h.dst_port = j.at("dst_port").get<std::uint16_t>();
    h.hop_limit = j.at("hop_limit").get<std::uint8_t>();
    h.frame_seq = j.at("frame_seq").get<std::uint8_t>();
    h.payload = from_hex(j.at("payload").get<std::string>());
    if (j.contains("signature_status")) h.signature_status = parse_signature_status(j.at("signature_status").get<std::string>());
    if (j.contains("seq") && !j.at("seq").is_null()) h.seq_payload = j.at("seq").get<std::uint32_t>();
    if (h.src_mac == h.dst_mac) throw std::invalid_argument("hop endpoints must differ");
    return r;
}

json batch_to_json(const std::vector<PacketReport>& batch)
{
    json records = json::array();
    for (const auto& r : batch) records.push_back(to_json(r));
    return json{{"records", std::move(records)}};
}

std::vector<PacketReport> batch_from_json(const json& j)
{
    std::vector<PacketReport> out;
    for (const auto& r : j.at("records")) out.push_back(report_from_json(r));
    return out;
}

} // namespace eyesec::sniffer
