#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eyesec/sniffer/records.hpp"
#include "eyesec/verifier/verifier.hpp"

namespace eyesec::backend {

using Micros = std::chrono::microseconds;
using sniffer::Digest;

enum class BackendErrc { BadWindow, UnknownNode, Locked, BadRequest, Conflict };

class BackendError : public std::runtime_error {
public:
    BackendError(BackendErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    BackendErrc code() const noexcept { return code_; }

private:
    BackendErrc code_;
};

const char* to_string(BackendErrc code);

/// One sniffer's observation of a stored transmission.
struct Witness {
    Micros ts{0};
    std::string sniffer_id;
    double rssi = 0.0;

    friend auto operator<=>(const Witness&, const Witness&) = default;
};

struct StoredTransmission {
    std::uint64_t id = 0;
    Digest digest{};
    /// Earliest witness timestamp.
    Micros ts{0};
    sniffer::HopRecord hop;
    /// Sorted; never two entries with the same (sniffer_id, ts).
    std::vector<Witness> witnesses;

    friend bool operator==(const StoredTransmission&, const StoredTransmission&) = default;
};

enum class View { Ip, Mac };

const char* to_string(View v);
View parse_view(const std::string& text);

struct TrafficEdge {
    View view = View::Ip;
    /// IPv6 text in the IP view, MAC text in the MAC view.
    std::string src;
    std::string dst;
    std::uint64_t count = 0;
    Micros t0{0};
    Micros t1{0};

    friend bool operator==(const TrafficEdge&, const TrafficEdge&) = default;
};

/// Merged visual and digital identity of one device.
struct NodeRecord {
    codec::MacAddress mac;
    std::string name;
    std::string location;
    std::optional<crypto::Ed25519PublicKey> public_key;
    std::optional<Micros> first_seen_visual;
    std::optional<Micros> first_seen_digital;
    /// Distinct physical placements at which this MAC's marker was scanned.
    std::vector<std::string> placements;
    /// Metadata edits are refused while a duplicate-marker warning is open.
    bool locked = false;

    friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

enum class WarningKind { DuplicateMarker, FailedSignature, UnknownKey, SpoofClassified };

const char* to_string(WarningKind k);

struct Warning {
    std::uint64_t id = 0;
    WarningKind kind = WarningKind::DuplicateMarker;
    /// MAC text of the affected identity.
    std::string subject;
    Micros ts{0};
    std::string details;
    std::optional<verifier::SpoofCase> spoof_case;

    friend bool operator==(const Warning&, const Warning&) = default;
};

struct NodeStats {
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::vector<codec::MacAddress> neighbors;
};

struct NodeInfo {
    NodeRecord record;
    NodeStats stats;
};

struct Snapshot {
    Micros t0{0};
    Micros t1{0};
    std::vector<TrafficEdge> ip;
    std::vector<TrafficEdge> mac;

    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct RssiSample {
    Micros ts{0};
    double rssi = 0.0;
    std::string sniffer_id;
};

struct SpoofReport {
    codec::MacAddress mac;
    verifier::SpoofEvidence evidence;
    verifier::Classification classification;
    /// Per sniffer, when it holds at least 3 samples.
    std::vector<std::pair<std::string, verifier::Trend>> rssi_trends;
};

} // namespace eyesec::backend
