#pragma once

#include <functional>

#include "eyesec/codec/pcap.hpp"
#include "eyesec/sim/types.hpp"
#include "eyesec/sniffer/sniffer.hpp"
#include "eyesec/sniffer/uploader.hpp"

namespace eyesec::scenario {

using Micros = std::chrono::microseconds;

struct ReplaySummary {
    std::size_t frames = 0;
    std::size_t admitted = 0;
    std::size_t duplicate = 0;
    std::size_t corrupt = 0;
};

struct ReplayOptions {
    std::string sniffer_id = "replay";
    Micros skew{0};
    /// Playback rate relative to capture time; 0 feeds as fast as possible.
    double speed = 0.0;
    sniffer::UploadPolicy policy;
    /// Applied to every record; PCAP carries no signal strength.
    double rssi = 0.0;
};

/// Feeds every record of `capture` through one sniffer to `client`.
/// Throws codec::CodecError(UnsupportedLinkType) for non-802.15.4 captures
/// and sniffer::UploadError when the backend refuses or is unreachable.
ReplaySummary replay(const codec::PcapCapture& capture, sniffer::BackendClient& client, const ReplayOptions& options = {});

/// The radio stream as a capture file, one record per transmission.
codec::PcapCapture to_pcap(const std::vector<sim::RadioEvent>& events);

} // namespace eyesec::scenario
