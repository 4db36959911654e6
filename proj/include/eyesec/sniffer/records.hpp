#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "eyesec/codec/error.hpp"
#include "eyesec/codec/frame.hpp"
#include "eyesec/codec/lowpan.hpp"
#include "eyesec/crypto/crypto.hpp"

namespace eyesec::sniffer {

using Micros = std::chrono::microseconds;
using Digest = crypto::Md5Digest;

enum class SignatureStatus { Unchecked, Valid, Invalid, UnknownKey, Unsigned };

const char* to_string(SignatureStatus s);
SignatureStatus parse_signature_status(const std::string& text);

/// One frame as overheard by one sniffer.
struct CapturedPacket {
    std::string sniffer_id;
    /// Sniffer clock, always > 0.
    Micros ts{1};
    double rssi = 0.0;
    Bytes raw;
    /// MD5 over `raw`, computed even when decoding failed.
    Digest digest{};
    std::optional<codec::Frame802154> frame;
    std::optional<codec::Datagram6LoWPAN> datagram;
    std::optional<codec::CodecErrc> failure;

    bool decoded() const { return datagram.has_value(); }
};

/// One MAC-layer transmission carrying an end-to-end datagram.
struct HopRecord {
    codec::MacAddress src_mac;
    codec::MacAddress dst_mac;
    codec::Ipv6Address src_ip;
    codec::Ipv6Address dst_ip;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint8_t hop_limit = 0;
    std::uint8_t frame_seq = 0;
    std::optional<std::uint32_t> seq_payload;
    /// UDP payload including any signature trailer.
    Bytes payload;
    Digest digest{};
    Micros ts{0};
    double rssi = 0.0;
    SignatureStatus signature_status = SignatureStatus::Unchecked;

    /// True when the transmitter is the datagram's origin (its MAC derives
    /// from the source IP), i.e. the first hop of the datagram.
    bool is_first_hop() const;

    friend bool operator==(const HopRecord&, const HopRecord&) = default;
};

/// A hop record attributed to the sniffer that heard it; the unit of upload.
struct PacketReport {
    std::string sniffer_id;
    HopRecord hop;

    friend bool operator==(const PacketReport&, const PacketReport&) = default;
};

enum class Admission { Admitted, Duplicate };

const char* to_string(Admission a);

} // namespace eyesec::sniffer
