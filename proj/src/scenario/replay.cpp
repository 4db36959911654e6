#include "eyesec/scenario/replay.hpp"

#include <chrono>
#include <thread>

namespace eyesec::scenario {

ReplaySummary replay(const codec::PcapCapture& capture, sniffer::BackendClient& client, const ReplayOptions& options)
{
    if (capture.link_type != codec::kLinkTypeIeee802154WithFcs) {
        throw codec::CodecError(codec::CodecErrc::UnsupportedLinkType,
                                "link type " + std::to_string(capture.link_type) + " is not IEEE 802.15.4 with FCS");
    }
    sniffer::Sniffer sniffer({options.sniffer_id, options.skew});
    sniffer::Uploader uploader(options.policy);
    ReplaySummary summary;
    auto tally = [&](const sniffer::FlushResult& r) {
        summary.admitted += r.admitted;
        summary.duplicate += r.duplicate;
    };

    auto wall_start = std::chrono::steady_clock::now();
    auto first = capture.records.empty() ? Micros::zero() : capture.records.front().timestamp;
    for (const auto& rec : capture.records) {
        if (options.speed > 0) {
            auto offset = std::chrono::duration<double, std::micro>((rec.timestamp - first).count() / options.speed);
            std::this_thread::sleep_until(wall_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(offset));
        }
        ++summary.frames;
        auto packet = sniffer.capture({rec.timestamp, rec.frame, options.rssi});
        if (packet.decoded()) uploader.enqueue({options.sniffer_id, sniffer::extract_hop(packet)});
        while (uploader.due(packet.ts)) tally(uploader.flush(client));
    }
    tally(uploader.flush_all(client));
    summary.corrupt = sniffer.corrupt();
    return summary;
}

codec::PcapCapture to_pcap(const std::vector<sim::RadioEvent>& events)
{
    codec::PcapCapture out;
    out.records.reserve(events.size());
    for (const auto& ev : events) out.records.push_back({ev.time, ev.bytes});
    return out;
}

} // namespace eyesec::scenario
