#include "eyesec/sim/simulator.hpp"

#include <algorithm>
#include <set>

#include "eyesec/codec/echo.hpp"
#include "eyesec/codec/trailer.hpp"

namespace eyesec::sim {

namespace {

constexpr Micros kClientStagger{100'000};
constexpr std::uint8_t kInitialHopLimit = 64;

bool originates_traffic(const SimNode& n)
{
    return n.role != NodeRole::Server && n.firmware == Firmware::EchoClient;
}

} // namespace

crypto::Ed25519Signature sign_payload(const SimNode& node, const codec::Ipv6Address& src_ip,
                                      const codec::Ipv6Address& dst_ip, ByteView body)
{
    if (!node.signing_key) throw SimError(SimErrc::NoKey, "node " + node.name + " has no signing key");
    return node.signing_key->sign(codec::signed_message(src_ip, dst_ip, body));
}

crypto::Ed25519Keypair derive_node_key(std::uint64_t seed, const std::string& node_name)
{
    Bytes material;
    for (int i = 0; i < 8; ++i) material.push_back(static_cast<std::uint8_t>(seed >> (8 * i)));
    material.insert(material.end(), node_name.begin(), node_name.end());
    auto digest = crypto::sha256(material);
    crypto::Ed25519Seed key_seed{};
    std::copy(digest.begin(), digest.end(), key_seed.begin());
    return crypto::Ed25519Keypair::from_seed(key_seed);
}

Simulation::Simulation(SimConfig config) : config_(std::move(config)), nodes_(config_.nodes), rng_(config_.seed)
{
    std::set<codec::MacAddress> macs;
    std::set<std::string> names;
    std::size_t servers = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (!macs.insert(n.mac).second) throw SimError(SimErrc::InvalidConfig, "duplicate node MAC " + n.mac.to_string());
        if (!names.insert(n.name).second) throw SimError(SimErrc::InvalidConfig, "duplicate node name " + n.name);
        if (n.role == NodeRole::Server) {
            ++servers;
            server_ = i;
        }
        if (originates_traffic(n) && n.tx_interval <= Micros::zero()) {
            throw SimError(SimErrc::InvalidConfig, "node " + n.name + " needs a positive tx interval");
        }
    }
    if (!nodes_.empty() && servers != 1) throw SimError(SimErrc::InvalidConfig, "simulation needs exactly one server");
    if (config_.loss_probability < 0.0 || config_.loss_probability > 1.0) {
        throw SimError(SimErrc::InvalidConfig, "loss probability must lie in [0, 1]");
    }

    state_.resize(nodes_.size());
    std::size_t stagger = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        state_[i].tx_mac = nodes_[i].mac;
        if (originates_traffic(nodes_[i])) {
            Micros first = nodes_[i].phase.value_or(nodes_[i].tx_interval * 3 / 4
                                                    + kClientStagger * static_cast<std::int64_t>(stagger));
            ++stagger;
            schedule(Pending{first, Kind::AppTimer, 0, i, 0, {}, {}});
        }
    }
    rebuild_routes();
}

void Simulation::schedule(Pending p)
{
    p.order = order_++;
    queue_.push(std::move(p));
}

bool Simulation::alive(const std::string& name) const { return state_[index_of(name)].alive; }

const SimNode& Simulation::node(const std::string& name) const { return nodes_[index_of(name)]; }

std::size_t Simulation::index_of(const std::string& name) const
{
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].name == name) return i;
    }
    throw SimError(SimErrc::UnknownSubject, "no node named " + name);
}

codec::MacAddress Simulation::transmit_mac(const std::string& name) const { return state_[index_of(name)].tx_mac; }

std::optional<MarkerToken> Simulation::scan_marker(const std::string& name) const { return nodes_[index_of(name)].marker; }

void Simulation::rebuild_routes()
{
    std::vector<SimNode> live;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (state_[i].alive) live.push_back(nodes_[i]);
    }
    routes_ = build_routes(live, config_.link_range);
}

std::optional<std::size_t> Simulation::owner_of(const codec::Ipv6Address& ip) const
{
    // Routing delivers to the node that legitimately owns an address; an
    // attacker using a copied address is not a routing destination.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].role != NodeRole::Malicious && codec::mac_to_ipv6(nodes_[i].mac) == ip) return i;
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (codec::mac_to_ipv6(state_[i].tx_mac) == ip) return i;
    }
    return std::nullopt;
}

codec::Datagram6LoWPAN Simulation::make_datagram(std::size_t sender, const codec::Ipv6Address& dst,
                                                 std::uint16_t src_port, std::uint16_t dst_port, std::uint32_t seq) const
{
    codec::Datagram6LoWPAN d;
    d.src_ip = codec::mac_to_ipv6(state_[sender].tx_mac);
    d.dst_ip = dst;
    d.src_port = src_port;
    d.dst_port = dst_port;
    d.hop_limit = kInitialHopLimit;
    auto body = codec::encode_echo(seq);
    if (nodes_[sender].signing_key) {
        d.payload = codec::append_trailer(body, sign_payload(nodes_[sender], d.src_ip, d.dst_ip, body));
    } else {
        d.payload = std::move(body);
    }
    return d;
}

std::vector<RadioEvent> Simulation::step(Micros until)
{
    if (until < now_) throw std::invalid_argument("cannot step backwards in simulated time");
    std::vector<RadioEvent> out;
    while (!queue_.empty() && queue_.top().time <= until) {
        Pending p = queue_.top();
        queue_.pop();
        now_ = p.time;
        switch (p.kind) {
        case Kind::Fault: apply_fault(p.fault); break;
        case Kind::AppTimer: on_timer(p); break;
        case Kind::Transmit: on_transmit(p, out); break;
        }
    }
    now_ = until;
    return out;
}

void Simulation::on_timer(const Pending& p)
{
    const auto i = p.node;
    if (!state_[i].alive || nodes_[i].firmware != Firmware::EchoClient) return;
    schedule(Pending{p.time + nodes_[i].tx_interval, Kind::AppTimer, 0, i, 0, {}, {}});
    if (!server_ || !routes_.table.reaches_root(nodes_[i].mac)) return;

    auto d = make_datagram(i, codec::mac_to_ipv6(nodes_[*server_].mac), codec::kEchoClientPort, codec::kEchoServerPort,
                           ++state_[i].app_seq);
    schedule(Pending{p.time, Kind::Transmit, 0, i, *server_, std::move(d), {}});
}

void Simulation::on_transmit(const Pending& p, std::vector<RadioEvent>& out)
{
    const auto s = p.node;
    if (!state_[s].alive) return;
    auto next = routes_.table.next_hop(nodes_[s].mac, nodes_[p.destination].mac);
    if (!next) return;

    RadioEvent ev;
    ev.time = p.time;
    ev.frame.seq_no = state_[s].mac_seq++;
    ev.frame.src_mac = state_[s].tx_mac;
    ev.frame.dst_mac = *next;
    ev.frame.pan_id = config_.pan_id;
    ev.frame.payload = codec::encode_datagram(p.datagram, ev.frame.src_mac, ev.frame.dst_mac);
    ev.bytes = codec::encode_frame(ev.frame);
    ev.frame.fcs = static_cast<std::uint16_t>(ev.bytes[ev.bytes.size() - 2] | ev.bytes.back() << 8);
    ev.origin_position = nodes_[s].position;
    ev.transmitter = nodes_[s].name;
    out.push_back(std::move(ev));

    if (config_.loss_probability > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < config_.loss_probability) {
        return;
    }
    auto receiver = std::find_if(nodes_.begin(), nodes_.end(), [&](const SimNode& n) { return n.mac == *next; });
    const auto r = static_cast<std::size_t>(receiver - nodes_.begin());
    if (!state_[r].alive) return;
    const Micros arrival = p.time + config_.hop_delay;
    if (r == p.destination) {
        on_deliver(r, p.datagram, arrival);
        return;
    }
    if (p.datagram.hop_limit <= 1) return;
    auto forwarded = p.datagram;
    --forwarded.hop_limit;
    schedule(Pending{arrival, Kind::Transmit, 0, r, p.destination, std::move(forwarded), {}});
}

void Simulation::on_deliver(std::size_t receiver, const codec::Datagram6LoWPAN& d, Micros at)
{
    if (!server_ || receiver != *server_ || d.dst_port != codec::kEchoServerPort) return;
    auto split = codec::split_trailer(d.payload);
    auto seq = codec::parse_echo(split.body);
    auto requester = owner_of(d.src_ip);
    if (!seq || !requester) return;
    auto reply = make_datagram(receiver, d.src_ip, codec::kEchoServerPort, d.src_port, *seq);
    schedule(Pending{at, Kind::Transmit, 0, receiver, *requester, std::move(reply), {}});
}

void Simulation::inject_fault(const FaultSpec& spec)
{
    if (spec.at < Micros::zero()) throw SimError(SimErrc::InvalidConfig, "fault time must be nonnegative");
    index_of(spec.subject);
    if (spec.kind == FaultKind::MarkerDuplicate || spec.kind == FaultKind::AddressCopy) index_of(spec.target);
    schedule(Pending{std::max(spec.at, now_), Kind::Fault, 0, 0, 0, {}, spec});
}

void Simulation::apply_fault(const FaultSpec& spec)
{
    const auto i = index_of(spec.subject);
    switch (spec.kind) {
    case FaultKind::NodeDeath:
        state_[i].alive = false;
        rebuild_routes();
        break;
    case FaultKind::MarkerDuplicate: nodes_[i].marker = MarkerToken{nodes_[index_of(spec.target)].mac}; break;
    case FaultKind::MarkerForge: nodes_[i].marker = MarkerToken{spec.forged_mac.value_or(nodes_[i].mac)}; break;
    case FaultKind::AddressCopy: state_[i].tx_mac = nodes_[index_of(spec.target)].mac; break;
    case FaultKind::Silence: nodes_[i].firmware = Firmware::Silent; break;
    }
}

} // namespace eyesec::sim
