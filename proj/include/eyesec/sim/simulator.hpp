#pragma once

#include <cstdint>
#include <queue>
#include <random>
#include <vector>

#include "eyesec/codec/lowpan.hpp"
#include "eyesec/sim/routing.hpp"
#include "eyesec/sim/types.hpp"

namespace eyesec::sim {

struct SimConfig {
    std::vector<SimNode> nodes;
    double link_range = 30.0;
    RadioModel radio;
    /// Air time plus forwarding latency of one hop; also the server's turnaround.
    Micros hop_delay{5'000};
    /// Per-hop drop probability.
    double loss_probability = 0.0;
    std::uint64_t seed = 1;
    std::uint16_t pan_id = 0xabcd;
};

/// Deterministic discrete-event simulation of an echo workload over a
/// tree-routed 6LoWPAN mesh. Single-threaded; independent instances may run
/// on different threads.
class Simulation {
public:
    /// Throws SimError(InvalidConfig) unless there is exactly one server (or
    /// no nodes at all), MACs and names are unique and client intervals are
    /// positive.
    explicit Simulation(SimConfig config);

    Micros now() const { return now_; }
    const std::vector<SimNode>& nodes() const { return nodes_; }
    const SimConfig& config() const { return config_; }
    const RoutingResult& routes() const { return routes_; }
    bool alive(const std::string& name) const;
    const SimNode& node(const std::string& name) const;

    /// Advances to `until`, returning every frame sent in (now, until] in
    /// time order. Throws std::invalid_argument when until < now().
    std::vector<RadioEvent> step(Micros until);

    /// Takes effect at spec.at (or immediately if that is already past).
    /// Throws SimError(UnknownSubject) for unknown subject or target names.
    void inject_fault(const FaultSpec& spec);

    /// What scanning this node's marker yields, if it carries one.
    std::optional<MarkerToken> scan_marker(const std::string& name) const;

    /// MAC and IPv6 identity currently used as traffic source.
    codec::MacAddress transmit_mac(const std::string& name) const;

private:
    struct NodeState {
        bool alive = true;
        codec::MacAddress tx_mac;
        std::uint8_t mac_seq = 0;
        std::uint32_t app_seq = 0;
    };

    enum class Kind { Fault = 0, AppTimer = 1, Transmit = 2 };

    struct Pending {
        Micros time;
        Kind kind;
        std::uint64_t order;
        std::size_t node = 0;
        std::size_t destination = 0;
        codec::Datagram6LoWPAN datagram;
        FaultSpec fault;
    };

    struct Later {
        bool operator()(const Pending& a, const Pending& b) const
        {
            if (a.time != b.time) return a.time > b.time;
            if (a.kind != b.kind) return a.kind > b.kind;
            return a.order > b.order;
        }
    };

    void schedule(Pending p);
    void rebuild_routes();
    std::size_t index_of(const std::string& name) const;
    std::optional<std::size_t> owner_of(const codec::Ipv6Address& ip) const;
    codec::Datagram6LoWPAN make_datagram(std::size_t sender, const codec::Ipv6Address& dst, std::uint16_t src_port,
                                         std::uint16_t dst_port, std::uint32_t seq) const;
    void on_timer(const Pending& p);
    void on_transmit(const Pending& p, std::vector<RadioEvent>& out);
    void on_deliver(std::size_t receiver, const codec::Datagram6LoWPAN& d, Micros at);
    void apply_fault(const FaultSpec& spec);

    SimConfig config_;
    std::vector<SimNode> nodes_;
    std::vector<NodeState> state_;
    std::optional<std::size_t> server_;
    RoutingResult routes_;
    Micros now_{0};
    std::uint64_t order_ = 0;
    std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
    std::mt19937_64 rng_;
};

/// Deterministic signature over (src_ip, dst_ip, body) with the node's key.
/// Throws SimError(NoKey) for unsigned nodes.
crypto::Ed25519Signature sign_payload(const SimNode& node, const codec::Ipv6Address& src_ip,
                                      const codec::Ipv6Address& dst_ip, ByteView body);

/// Per-node key derived from the scenario seed, so runs are reproducible.
crypto::Ed25519Keypair derive_node_key(std::uint64_t seed, const std::string& node_name);

} // namespace eyesec::sim
