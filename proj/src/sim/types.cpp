#include "eyesec/sim/types.hpp"

#include <algorithm>
#include <cmath>

namespace eyesec::sim {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

const char* to_string(NodeRole role)
{
    switch (role) {
    case NodeRole::Client: return "client";
    case NodeRole::Server: return "server";
    case NodeRole::Malicious: return "malicious";
    }
    return "?";
}

const char* to_string(Firmware fw)
{
    switch (fw) {
    case Firmware::EchoClient: return "echo-client";
    case Firmware::EchoServer: return "echo-server";
    case Firmware::Silent: return "silent";
    }
    return "?";
}

const char* to_string(FaultKind kind)
{
    switch (kind) {
    case FaultKind::NodeDeath: return "node_death";
    case FaultKind::MarkerDuplicate: return "marker_duplicate";
    case FaultKind::MarkerForge: return "marker_forge";
    case FaultKind::AddressCopy: return "address_copy";
    case FaultKind::Silence: return "silence";
    }
    return "?";
}

FaultKind parse_fault_kind(const std::string& text)
{
    for (auto k : {FaultKind::NodeDeath, FaultKind::MarkerDuplicate, FaultKind::MarkerForge, FaultKind::AddressCopy,
                   FaultKind::Silence}) {
        if (text == to_string(k)) return k;
    }
    throw SimError(SimErrc::InvalidConfig, "unknown fault kind: " + text);
}

double rssi_at_distance(double d, const RadioModel& model)
{
    d = std::max(d, model.d0_m);
    return model.p0_dbm - 10.0 * model.exponent * std::log10(d / model.d0_m);
}

double rssi_at(const Position& listener, const RadioEvent& event, const RadioModel& model)
{
    return rssi_at_distance(distance(listener, event.origin_position), model);
}

} // namespace eyesec::sim
