#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "eyesec/sniffer/records.hpp"

namespace eyesec::sniffer {

/// Frame bytes as they come off the radio (or out of a PCAP record), with
/// the true transmission time on the common clock.
struct RawCapture {
    Micros time{0};
    Bytes bytes;
    double rssi = 0.0;
};

struct SnifferConfig {
    std::string id;
    /// Offset of this sniffer's clock from the backend's.
    Micros skew{0};
};

class SnifferError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// MD5 over the complete frame bytes, MAC header through FCS.
Digest dedup_digest(ByteView frame_bytes);

/// Capture stage of the sniffer pipeline. Stateless apart from counters.
class Sniffer {
public:
    explicit Sniffer(SnifferConfig config);

    const SnifferConfig& config() const { return config_; }

    /// Never throws on malformed bytes: failures are tagged and counted.
    CapturedPacket capture(const RawCapture& raw);

    std::size_t captured() const { return captured_; }
    std::size_t corrupt() const { return corrupt_; }

private:
    SnifferConfig config_;
    std::size_t captured_ = 0;
    std::size_t corrupt_ = 0;
};

/// Throws SnifferError ("NotDecodable") for packets that failed decoding.
HopRecord extract_hop(const CapturedPacket& packet);

} // namespace eyesec::sniffer
