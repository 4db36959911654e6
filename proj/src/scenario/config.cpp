#include "eyesec/scenario/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace eyesec::scenario {

namespace {

Micros seconds(const YAML::Node& n) { return sim::from_seconds(n.as<double>()); }

Micros millis(const YAML::Node& n) { return Micros(static_cast<std::int64_t>(n.as<double>() * 1000.0)); }

sim::Position position(const YAML::Node& n, const std::string& where)
{
    if (!n.IsSequence() || n.size() != 2) throw ConfigError(where + ": position must be [x, y]");
    return {n[0].as<double>(), n[1].as<double>()};
}

template <typename T>
T get(const YAML::Node& parent, const char* key, T fallback)
{
    auto n = parent[key];
    return n ? n.as<T>() : fallback;
}

sim::NodeRole parse_role(const std::string& s, const std::string& where)
{
    if (s == "client") return sim::NodeRole::Client;
    if (s == "server") return sim::NodeRole::Server;
    if (s == "malicious") return sim::NodeRole::Malicious;
    throw ConfigError(where + ": unknown role " + s);
}

sim::Firmware parse_firmware(const std::string& s, const std::string& where)
{
    if (s == "echo_client") return sim::Firmware::EchoClient;
    if (s == "echo_server") return sim::Firmware::EchoServer;
    if (s == "silent") return sim::Firmware::Silent;
    throw ConfigError(where + ": unknown firmware " + s);
}

std::vector<EdgeExpectation> edge_list(const YAML::Node& n)
{
    std::vector<EdgeExpectation> out;
    for (const auto& e : n) out.push_back({e["src"].as<std::string>(), e["dst"].as<std::string>(), e["count"].as<std::uint64_t>()});
    return out;
}

void parse_nodes(const YAML::Node& list, ScenarioConfig& cfg, std::set<std::string>& signed_nodes)
{
    std::size_t i = 0;
    for (const auto& n : list) {
        std::string where = "nodes[" + std::to_string(i++) + "]";
        sim::SimNode node;
        node.name = n["name"].as<std::string>();
        node.mac = codec::MacAddress::parse(n["mac"].as<std::string>());
        node.position = position(n["pos"], where);
        node.role = parse_role(get<std::string>(n, "role", "client"), where);
        auto default_fw = node.role == sim::NodeRole::Server ? "echo_server"
                          : node.role == sim::NodeRole::Malicious ? "silent"
                                                                 : "echo_client";
        node.firmware = parse_firmware(get<std::string>(n, "firmware", default_fw), where);
        if (n["interval_s"]) node.tx_interval = seconds(n["interval_s"]);
        if (n["phase_s"]) node.phase = seconds(n["phase_s"]);
        if (get<bool>(n, "marker", node.role != sim::NodeRole::Malicious)) node.marker = sim::MarkerToken{node.mac};
        if (get<bool>(n, "signed", false)) signed_nodes.insert(node.name);
        cfg.sim.nodes.push_back(std::move(node));
    }
}

ScenarioConfig parse(const YAML::Node& root)
{
    if (!root.IsMap()) throw ConfigError("scenario must be a mapping");
    ScenarioConfig cfg;
    cfg.id = get<std::string>(root, "id", "");
    if (cfg.id.empty()) throw ConfigError("id is required");
    cfg.sim.seed = get<std::uint64_t>(root, "seed", 1);
    cfg.sim.link_range = get<double>(root, "link_range_m", cfg.sim.link_range);
    cfg.sim.loss_probability = get<double>(root, "loss", 0.0);
    if (root["hop_delay_ms"]) cfg.sim.hop_delay = millis(root["hop_delay_ms"]);
    if (!root["duration_s"]) throw ConfigError("duration_s is required");
    cfg.duration = seconds(root["duration_s"]);
    if (cfg.duration < Micros::zero()) throw ConfigError("duration_s must be nonnegative");
    if (root["epsilon_ms"]) cfg.epsilon = millis(root["epsilon_ms"]);

    std::set<std::string> signed_nodes;
    if (root["nodes"]) parse_nodes(root["nodes"], cfg, signed_nodes);
    std::set<std::string> names;
    for (const auto& n : cfg.sim.nodes) names.insert(n.name);

    for (const auto& name : signed_nodes) {
        for (auto& n : cfg.sim.nodes) {
            if (n.name == name) n.signing_key = sim::derive_node_key(cfg.sim.seed, name);
        }
    }
    auto keys = root["register_keys"];
    if (!keys || (keys.IsScalar() && keys.as<std::string>() == "signed")) {
        for (const auto& n : cfg.sim.nodes) {
            if (n.signing_key && n.role != sim::NodeRole::Malicious) cfg.registered_keys.push_back(n.name);
        }
    } else if (keys.IsSequence()) {
        for (const auto& k : keys) {
            auto name = k.as<std::string>();
            if (!signed_nodes.count(name)) throw ConfigError("register_keys: " + name + " is not a signed node");
            cfg.registered_keys.push_back(name);
        }
    } else if (!(keys.IsScalar() && keys.as<std::string>() == "none")) {
        throw ConfigError("register_keys must be signed, none or a list of node names");
    }

    std::size_t i = 0;
    for (const auto& s : root["sniffers"]) {
        std::string where = "sniffers[" + std::to_string(i++) + "]";
        SnifferSpec spec;
        spec.id = s["id"].as<std::string>();
        if (s["path"]) {
            for (const auto& w : s["path"]) {
                if (!w.IsSequence() || w.size() != 3) throw ConfigError(where + ": path entries are [t_s, x, y]");
                spec.path.push_back({sim::from_seconds(w[0].as<double>()), {w[1].as<double>(), w[2].as<double>()}});
            }
            if (spec.path.empty()) throw ConfigError(where + ": empty path");
            for (std::size_t k = 1; k < spec.path.size(); ++k) {
                if (spec.path[k].at < spec.path[k - 1].at) throw ConfigError(where + ": path times must not decrease");
            }
            spec.position = spec.path.front().position;
        } else {
            spec.position = s["pos"] ? position(s["pos"], where) : sim::Position{};
        }
        if (s["range_m"]) spec.range = s["range_m"].as<double>();
        if (s["skew_ms"]) spec.skew = millis(s["skew_ms"]);
        cfg.sniffers.push_back(std::move(spec));
    }

    i = 0;
    for (const auto& f : root["faults"]) {
        std::string where = "faults[" + std::to_string(i++) + "]";
        sim::FaultSpec spec;
        spec.at = seconds(f["at_s"]);
        spec.kind = sim::parse_fault_kind(f["kind"].as<std::string>());
        spec.subject = f["subject"].as<std::string>();
        spec.target = get<std::string>(f, "target", "");
        if (f["forged_mac"]) spec.forged_mac = codec::MacAddress::parse(f["forged_mac"].as<std::string>());
        if (!names.count(spec.subject)) throw ConfigError(where + ": unknown subject " + spec.subject);
        if (!spec.target.empty() && !names.count(spec.target)) throw ConfigError(where + ": unknown target " + spec.target);
        cfg.faults.push_back(std::move(spec));
    }

    i = 0;
    for (const auto& s : root["scans"]) {
        std::string where = "scans[" + std::to_string(i++) + "]";
        ScanSpec spec;
        spec.at = seconds(s["at_s"]);
        spec.node = s["node"].as<std::string>();
        spec.placement = get<std::string>(s, "placement", spec.node);
        if (!names.count(spec.node)) throw ConfigError(where + ": unknown node " + spec.node);
        cfg.scans.push_back(std::move(spec));
    }
    std::stable_sort(cfg.scans.begin(), cfg.scans.end(), [](const auto& a, const auto& b) { return a.at < b.at; });

    if (auto e = root["expect"]) {
        auto& x = cfg.expect;
        if (e["ip_edges"]) x.ip_edges = edge_list(e["ip_edges"]);
        if (e["mac_edges"]) x.mac_edges = edge_list(e["mac_edges"]);
        if (e["transmissions"]) x.transmissions = e["transmissions"].as<std::size_t>();
        if (e["witnesses"]) x.witnesses = e["witnesses"].as<std::size_t>();
        if (auto s = e["spoof"]) {
            x.spoof.emplace();
            for (const auto& kv : s) (*x.spoof)[kv.first.as<std::string>()] = kv.second.as<std::string>();
        }
        for (const auto& kv : e["warnings"]) x.warnings[kv.first.as<std::string>()] = kv.second.as<std::size_t>();
    }
    return cfg;
}

} // namespace

sim::Position SnifferSpec::position_at(Micros t) const
{
    if (path.empty()) return position;
    if (t <= path.front().at) return path.front().position;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const auto& a = path[i - 1];
        const auto& b = path[i];
        if (t > b.at) continue;
        if (b.at == a.at) return b.position;
        double f = static_cast<double>((t - a.at).count()) / static_cast<double>((b.at - a.at).count());
        return {a.position.x + f * (b.position.x - a.position.x), a.position.y + f * (b.position.y - a.position.y)};
    }
    return path.back().position;
}

ScenarioConfig parse_scenario(const std::string& yaml_text)
{
    try {
        return parse(YAML::Load(yaml_text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("yaml: ") + e.what());
    } catch (const codec::CodecError& e) {
        throw ConfigError(e.what());
    } catch (const sim::SimError& e) {
        throw ConfigError(e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

} // namespace eyesec::scenario
