#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "eyesec/codec/error.hpp"
#include "eyesec/common/bytes.hpp"

namespace eyesec::codec {

inline constexpr std::uint32_t kPcapMagic = 0xa1b2c3d4;
inline constexpr std::uint32_t kLinkTypeIeee802154WithFcs = 195;
inline constexpr std::size_t kPcapGlobalHeaderSize = 24;
inline constexpr std::size_t kPcapRecordHeaderSize = 16;
inline constexpr std::uint32_t kPcapSnapLen = 65535;

struct PcapRecord {
    std::chrono::microseconds timestamp{0};
    Bytes frame;

    friend bool operator==(const PcapRecord&, const PcapRecord&) = default;
};

/// Classic little-endian libpcap capture, version 2.4.
struct PcapCapture {
    std::uint32_t link_type = kLinkTypeIeee802154WithFcs;
    std::vector<PcapRecord> records;

    friend bool operator==(const PcapCapture&, const PcapCapture&) = default;
};

/// Throws CodecError: BadMagic, UnsupportedLinkType, MalformedCapture
/// (truncated records, timestamps going backwards).
PcapCapture read_pcap(ByteView bytes);

/// Throws CodecError: UnsupportedLinkType, MalformedCapture.
Bytes write_pcap(const PcapCapture& capture);

PcapCapture read_pcap_file(const std::filesystem::path& path);
void write_pcap_file(const std::filesystem::path& path, const PcapCapture& capture);

} // namespace eyesec::codec
