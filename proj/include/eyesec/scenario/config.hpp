#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eyesec/sim/simulator.hpp"

namespace eyesec::scenario {

using Micros = std::chrono::microseconds;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Point of a handheld sniffer's walk; position is interpolated linearly.
struct Waypoint {
    Micros at{0};
    sim::Position position;
};

struct SnifferSpec {
    std::string id;
    /// Fixed position, or the walk when `path` is nonempty.
    sim::Position position;
    std::vector<Waypoint> path;
    /// Unlimited when absent (full coverage).
    std::optional<double> range;
    Micros skew{0};

    sim::Position position_at(Micros t) const;
};

struct ScanSpec {
    Micros at{0};
    /// Node whose physical marker is scanned.
    std::string node;
    /// Declared physical placement; defaults to the node name.
    std::string placement;
};

struct EdgeExpectation {
    /// Node names or literal addresses.
    std::string src;
    std::string dst;
    std::uint64_t count = 0;
};

struct Expectations {
    std::optional<std::vector<EdgeExpectation>> ip_edges;
    std::optional<std::vector<EdgeExpectation>> mac_edges;
    std::optional<std::size_t> transmissions;
    std::optional<std::size_t> witnesses;
    /// Exact set of findings: subject (node name or MAC) -> SPOOF_CASE text.
    std::optional<std::map<std::string, std::string>> spoof;
    /// Exact number of warnings per kind for the kinds listed.
    std::map<std::string, std::size_t> warnings;
};

struct ScenarioConfig {
    std::string id;
    sim::SimConfig sim;
    Micros duration{0};
    Micros epsilon{5'000};
    std::vector<SnifferSpec> sniffers;
    std::vector<sim::FaultSpec> faults;
    std::vector<ScanSpec> scans;
    /// Nodes whose derived public key the operator registers at start.
    std::vector<std::string> registered_keys;
    Expectations expect;
};

/// Parses the YAML scenario format described in docs/scenarios.md.
/// Throws ConfigError with a path-qualified message.
ScenarioConfig parse_scenario(const std::string& yaml_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

} // namespace eyesec::scenario
