#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "eyesec/codec/frame.hpp"
#include "eyesec/crypto/crypto.hpp"

namespace eyesec::sim {

using Micros = std::chrono::microseconds;

inline double to_seconds(Micros t) { return static_cast<double>(t.count()) / 1e6; }
inline Micros from_seconds(double s) { return Micros(static_cast<std::int64_t>(s * 1e6 + (s >= 0 ? 0.5 : -0.5))); }

struct Position {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);

enum class NodeRole { Client, Server, Malicious };
enum class Firmware { EchoClient, EchoServer, Silent };

const char* to_string(NodeRole role);
const char* to_string(Firmware fw);

/// Optical marker attached to a node. Scanning yields embedded_mac.
struct MarkerToken {
    codec::MacAddress embedded_mac;

    friend bool operator==(const MarkerToken&, const MarkerToken&) = default;
};

struct SimNode {
    std::string name;
    codec::MacAddress mac;
    Position position;
    NodeRole role = NodeRole::Client;
    Firmware firmware = Firmware::EchoClient;
    Micros tx_interval{10'000'000};
    /// First send time. Unset means 3/4 of tx_interval plus 100 ms per
    /// preceding originating node, so exchanges never straddle whole intervals.
    std::optional<Micros> phase;
    std::optional<crypto::Ed25519Keypair> signing_key;
    std::optional<MarkerToken> marker;
};

enum class FaultKind { NodeDeath, MarkerDuplicate, MarkerForge, AddressCopy, Silence };

const char* to_string(FaultKind kind);
FaultKind parse_fault_kind(const std::string& text);

struct FaultSpec {
    Micros at{0};
    FaultKind kind = FaultKind::NodeDeath;
    std::string subject;
    /// Node whose identity is copied (MarkerDuplicate, AddressCopy).
    std::string target;
    /// MarkerForge only; defaults to the subject's own MAC.
    std::optional<codec::MacAddress> forged_mac;
};

/// One transmitted frame as seen on air.
struct RadioEvent {
    Micros time{0};
    codec::Frame802154 frame;
    Bytes bytes;
    Position origin_position;
    /// Ground truth, for tests and reports only; sniffers never read it.
    std::string transmitter;
};

/// Log-distance path loss: rssi = p0 - 10 n log10(d / d0), with d >= d0.
struct RadioModel {
    double p0_dbm = -40.0;
    double d0_m = 1.0;
    double exponent = 2.5;
};

double rssi_at(const Position& listener, const RadioEvent& event, const RadioModel& model = {});
double rssi_at_distance(double d, const RadioModel& model = {});

enum class SimErrc { UnknownSubject, NoKey, InvalidConfig };

class SimError : public std::runtime_error {
public:
    SimError(SimErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    SimErrc code() const noexcept { return code_; }

private:
    SimErrc code_;
};

} // namespace eyesec::sim
