// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "eyesec/backend/backend.hpp"
#include "eyesec/backend/serialize.hpp"
#include "eyesec/codec/pcap.hpp"
#include "eyesec/scenario/runner.hpp"
#include "eyesec/verifier/verifier.hpp"

using namespace eyesec;
using codec::MacAddress;
using std::chrono::microseconds;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            if (!pass) detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

scenario::ScenarioConfig bundled(const std::string& name)
{
    return scenario::load_scenario(std::filesystem::path(EYESEC_SCENARIO_DIR) / (name + ".yaml"));
}

using HopPairs = std::set<std::pair<MacAddress, MacAddress>>;

HopPairs mac_edge_set(const std::vector<backend::TrafficEdge>& edges)
{
    HopPairs out;
    for (const auto& e : edges) out.insert({MacAddress::parse(e.src), MacAddress::parse(e.dst)});
    return out;
}

// Both directions of every tree link a live originating client uses.
HopPairs tree_pairs(const sim::RoutingTable& t, const std::vector<sim::SimNode>& nodes, const std::function<bool(const sim::SimNode&)>& live)
{
    HopPairs out;
    for (const auto& n : nodes) {
        if (n.firmware != sim::Firmware::EchoClient || !live(n) || !t.reaches_root(n.mac)) continue;
        auto path = t.path_to_root(n.mac);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            out.insert({path[i], path[i + 1]});
            out.insert({path[i + 1], path[i]});
        }
    }
    return out;
}

void testbed(Outcome& o)
{
    auto start = std::chrono::steady_clock::now();
    scenario::ScenarioRun run(bundled("testbed6"));
    run.run();
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    auto edges = run.backend()->edges(backend::View::Ip, microseconds(0), run.config().duration + microseconds(1));
    const auto& nodes = run.simulation().nodes();
    o.expect(nodes.size() == 6 && run.config().sniffers.size() == 1, "topology is not 5 clients + server with 1 sniffer");
    std::size_t clients = 0;
    for (const auto& n : nodes) {
        if (n.role != sim::NodeRole::Client) continue;
        ++clients;
        auto ip = codec::mac_to_ipv6(n.mac).to_string();
        auto server = codec::mac_to_ipv6(nodes.front().mac).to_string();
        std::uint64_t req = 0, rep = 0;
        for (const auto& e : edges) {
            if (e.src == ip && e.dst == server) req = e.count;
            if (e.src == server && e.dst == ip) rep = e.count;
        }
        o.expect(req == 12 && rep == 12, n.name + " request/reply " + std::to_string(req) + "/" + std::to_string(rep));
    }
    o.expect(clients == 5, "expected 5 clients");
    o.expect(edges.size() == 10, "expected 10 IP edges, got " + std::to_string(edges.size()));
    o.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s");
    if (o.pass) o.detail << "5 clients x 12 requests + 12 replies; " << static_cast<int>(elapsed * 1000) << " ms";
}

void hop_view(Outcome& o)
{
    scenario::ScenarioRun run(bundled("line"));
    const auto tree = run.simulation().routes().table;
    run.run();
    auto* b = run.backend();
    auto window_end = run.config().duration + microseconds(1);
    auto mac = b->edges(backend::View::Mac, microseconds(0), window_end);
    auto ip = b->edges(backend::View::Ip, microseconds(0), window_end);

    const auto& nodes = run.simulation().nodes();
    auto expected = tree_pairs(tree, nodes, [](const auto&) { return true; });
    o.expect(mac_edge_set(mac) == expected, "MAC edge set differs from routing tree hop pairs");

    const sim::SimNode* client = nullptr;
    for (const auto& n : nodes) {
        if (n.firmware == sim::Firmware::EchoClient) client = &n;
    }
    auto path_len = *tree.depth(client->mac);
    o.expect(path_len == nodes.size() - 1, "client path does not traverse every other node");
    std::uint64_t datagrams = 0, hops = 0;
    for (const auto& e : ip) datagrams += e.count;
    for (const auto& e : mac) hops += e.count;
    o.expect(datagrams == 12, "datagrams " + std::to_string(datagrams) + " != 12");
    o.expect(hops == path_len * datagrams, "hops " + std::to_string(hops) + " != " + std::to_string(path_len) + " x " +
                                               std::to_string(datagrams));
    if (o.pass) o.detail << expected.size() << " tree hop pairs; " << hops << " hops = " << path_len << " x " << datagrams;
}

std::string state_of(const backend::Backend& b)
{
    json j = json::array();
    for (const auto& t : b.canonical_state()) j.push_back(backend::to_json(t));
    return j.dump();
}

void dedup(Outcome& o)
{
    auto cfg = bundled("dedup");
    scenario::ScenarioRun run(cfg);
    run.run();
    o.expect(run.backend()->transmission_count() == 500,
             "stored " + std::to_string(run.backend()->transmission_count()));
    o.expect(run.backend()->witness_count() == 1000, "witnesses " + std::to_string(run.backend()->witness_count()));
    o.expect(cfg.epsilon == microseconds(5'000), "epsilon is not 5 ms");

    // Reconstruct the upload log and replay it in shuffled interleavings.
    std::vector<sniffer::PacketReport> log;
    for (const auto& spec : cfg.sniffers) {
        sniffer::Sniffer s({spec.id, spec.skew});
        for (const auto& ev : run.events()) {
            auto p = s.capture({ev.time, ev.bytes, sim::rssi_at(spec.position, ev, cfg.sim.radio)});
            if (p.decoded()) log.push_back({spec.id, sniffer::extract_hop(p)});
        }
    }
    backend::Backend ref({cfg.epsilon});
    ref.ingest(log);
    auto expected = state_of(ref);
    o.expect(ref.transmission_count() == 500 && ref.witness_count() == 1000, "reconstructed log does not match run");
    std::mt19937_64 rng(2024);
    int identical = 0;
    for (int round = 0; round < 100; ++round) {
        std::shuffle(log.begin(), log.end(), rng);
        backend::Backend b({cfg.epsilon});
        for (const auto& r : log) b.ingest(r);
        identical += state_of(b) == expected;
    }
    o.expect(identical == 100, std::to_string(identical) + "/100 shuffles identical");
    if (o.pass) o.detail << "500 stored, 1000 witnesses, 100/100 shuffled orders identical";
}

void epsilon_boundary(Outcome& o)
{
    const microseconds eps(5'000);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> base(10'000, 1'000'000'000);
    int dup = 0, adm = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
        sniffer::HopRecord h;
        h.src_mac = MacAddress({0, 0x12, 0x4b, 0, 0, 0, 0, 1});
        h.dst_mac = MacAddress({0, 0x12, 0x4b, 0, 0, 0, 0, 2});
        h.src_ip = codec::mac_to_ipv6(h.src_mac);
        h.dst_ip = codec::mac_to_ipv6(h.dst_mac);
        h.digest = crypto::md5(as_bytes("boundary" + std::to_string(i)));
        auto t = microseconds(base(rng));
        int sign = i % 2 ? 1 : -1;
        for (auto delta : {eps - microseconds(1), eps + microseconds(1)}) {
            backend::Backend b({eps});
            h.ts = t;
            b.ingest({"a", h});
            h.ts = t + sign * delta;
            auto r = b.ingest({"b", h});
            if (delta < eps) dup += r == sniffer::Admission::Duplicate;
            else adm += r == sniffer::Admission::Admitted;
        }
    }
    o.expect(dup == trials, "eps-1us duplicate " + std::to_string(dup) + "/" + std::to_string(trials));
    o.expect(adm == trials, "eps+1us admitted " + std::to_string(adm) + "/" + std::to_string(trials));
    if (o.pass) o.detail << "eps-1us Duplicate " << dup << "/" << trials << ", eps+1us Admitted " << adm << "/" << trials;
}

void spoof_matrix(Outcome& o)
{
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"spoof-case-1", "COPIED_ID_CHATTY"},      {"spoof-case-2", "COPIED_ID_SILENT"},
        {"spoof-case-3", "COPIED_MARKER_NEW_ADDR"}, {"spoof-case-4", "FORGED_MARKER_COPIED_ADDR"},
        {"spoof-case-5", "FORGED_BOTH"},
    };
    std::vector<std::string> got;
    for (const auto& [name, label] : cases) {
        auto r = scenario::run_scenario(bundled(name));
        const auto& f = r["spoof"];
        bool ok = f.size() == 1 && f.begin().value() == label;
        got.push_back(f.size() == 1 ? f.begin().value().get<std::string>() : f.dump());
        o.expect(ok, name + " gave " + f.dump());
    }
    auto control = scenario::run_scenario(bundled("control"));
    o.expect(control["spoof"].empty(), "control false positives " + control["spoof"].dump());
    o.expect(control["warnings"].empty(), "control warnings " + control["warnings"].dump());
    if (o.pass) {
        for (const auto& g : got) o.detail << g << " ";
        o.detail << "| control: 0 findings";
    }
}

void signature_sensitivity(Outcome& o)
{
    auto cfg = bundled("control");
    sim::Simulation s(cfg.sim);
    auto events = s.step(cfg.duration);
    verifier::KeyRegistry keys;
    for (const auto& n : s.nodes()) {
        if (n.signing_key) keys.set(n.mac, n.signing_key->public_key());
    }
    std::vector<const sim::RadioEvent*> firsts;
    sniffer::Sniffer sn({"acc", microseconds(0)});
    for (const auto& ev : events) {
        auto h = sniffer::extract_hop(sn.capture({ev.time, ev.bytes, 0}));
        if (h.is_first_hop() && verifier::verify_message(h, keys) == sniffer::SignatureStatus::Valid) firsts.push_back(&ev);
    }
    o.expect(!firsts.empty(), "no signed frames");
    if (firsts.empty()) return;

    std::mt19937_64 rng(1234);
    int invalid = 0, still_decodable = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        const auto& ev = *firsts[rng() % firsts.size()];
        auto frame = codec::decode_frame(ev.bytes);
        auto d = codec::decode_datagram(frame.payload, frame.src_mac, frame.dst_mac);
        auto bit = rng() % (d.payload.size() * 8);
        d.payload[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        frame.payload = codec::encode_datagram(d, frame.src_mac, frame.dst_mac);
        auto bytes = codec::encode_frame(frame);
        auto p = sn.capture({ev.time, bytes, 0});
        if (!p.decoded()) continue;
        ++still_decodable;
        invalid += verifier::verify_message(sniffer::extract_hop(p), keys) == sniffer::SignatureStatus::Invalid;
    }
    o.expect(still_decodable == trials, "corrupted frames failed to decode: " + std::to_string(trials - still_decodable));
    o.expect(invalid == trials, "invalid " + std::to_string(invalid) + "/" + std::to_string(trials));
    if (o.pass) o.detail << "invalid " << invalid << "/" << trials << " over " << firsts.size() << " signed datagrams";
}

void node_death(Outcome& o)
{
    auto cfg = bundled("node-death");
    sim::FaultSpec death = cfg.faults.at(0);
    scenario::ScenarioRun run(cfg);
    auto before = run.simulation().routes().table;
    run.run();
    auto after = run.simulation().routes().table;
    auto* b = run.backend();
    auto dead = run.simulation().node(death.subject).mac.to_string();

    auto step = microseconds(10'000'000);
    auto snaps = b->timeline(step, backend::Window{microseconds(0), run.config().duration});
    int before_with = 0, before_total = 0, after_with = 0, after_total = 0;
    for (const auto& s : snaps) {
        bool touches = std::any_of(s.mac.begin(), s.mac.end(), [&](const auto& e) { return e.src == dead || e.dst == dead; });
        if (s.t1 <= death.at) {
            ++before_total;
            before_with += touches;
        } else if (s.t0 > death.at) {
            ++after_total;
            after_with += touches;
        }
    }
    o.expect(before_total > 0 && before_with == before_total,
             "pre-fault snapshots with node: " + std::to_string(before_with) + "/" + std::to_string(before_total));
    o.expect(after_total > 0 && after_with == 0, "post-fault snapshots with node: " + std::to_string(after_with));

    const auto& nodes = run.simulation().nodes();
    auto pre = b->edges(backend::View::Mac, microseconds(0), death.at);
    auto post = b->edges(backend::View::Mac, death.at, run.config().duration);
    auto pre_tree = tree_pairs(before, nodes, [](const auto&) { return true; });
    auto post_tree = tree_pairs(after, nodes, [&](const auto& n) { return n.name != death.subject; });
    o.expect(mac_edge_set(pre) == pre_tree, "pre-fault edges differ from initial tree");
    o.expect(mac_edge_set(post) == post_tree, "post-fault edges differ from rerouted tree");
    o.expect(pre_tree != post_tree, "topology did not reroute");
    if (o.pass) {
        o.detail << before_with << "/" << before_total << " pre-fault snapshots include the node, " << after_with << "/"
                 << after_total << " after; edges match both trees";
    }
}

MacAddress random_mac(std::mt19937_64& rng)
{
    MacAddress::Octets o;
    for (auto& b : o) b = static_cast<std::uint8_t>(rng());
    return MacAddress(o);
}

void codec_roundtrip(Outcome& o)
{
    std::mt19937_64 rng(31337);
    codec::PcapCapture pcap;
    int frames_ok = 0;
    for (int i = 0; i < 1000; ++i) {
        codec::Frame802154 f;
        f.seq_no = static_cast<std::uint8_t>(rng());
        f.src_mac = random_mac(rng);
        f.dst_mac = random_mac(rng);
        f.pan_id = static_cast<std::uint16_t>(rng());
        f.payload.resize(rng() % (codec::kMaxFramePayload + 1));
        for (auto& b : f.payload) b = static_cast<std::uint8_t>(rng());
        auto bytes = codec::encode_frame(f);
        auto back = codec::decode_frame(bytes);
        frames_ok += codec::encode_frame(back) == bytes && back.payload == f.payload && back.src_mac == f.src_mac;
        pcap.records.push_back({microseconds(1'000 * i + static_cast<std::int64_t>(rng() % 1000)), bytes});
    }
    o.expect(frames_ok == 1000, "frame round trips " + std::to_string(frames_ok) + "/1000");
    auto file = codec::write_pcap(pcap);
    auto reread = codec::read_pcap(file);
    o.expect(codec::write_pcap(reread) == file, "PCAP rewrite not byte-exact");
    bool records_equal = reread.records.size() == pcap.records.size();
    for (std::size_t i = 0; records_equal && i < pcap.records.size(); ++i) {
        records_equal = reread.records[i].frame == pcap.records[i].frame && reread.records[i].timestamp == pcap.records[i].timestamp;
    }
    o.expect(records_equal, "PCAP records differ after round trip");

    std::set<std::string> ips;
    int bijective = 0;
    for (int i = 0; i < 1000; ++i) {
        auto mac = random_mac(rng);
        auto ip = codec::mac_to_ipv6(mac);
        ips.insert(ip.to_string());
        bijective += codec::ipv6_to_mac(ip) == mac && codec::mac_to_ipv6(codec::ipv6_to_mac(ip)) == ip;
    }
    o.expect(bijective == 1000, "MAC/IPv6 round trips " + std::to_string(bijective) + "/1000");
    o.expect(ips.size() == 1000, "IPv6 images not distinct");
    if (o.pass) o.detail << "1000 frames, " << file.size() << "-byte PCAP byte-exact, 1000 MAC<->IPv6 round trips";
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"testbed reproduction", testbed},
        {"hop view", hop_view},
        {"dedup exactness", dedup},
        {"epsilon boundary", epsilon_boundary},
        {"spoofing matrix", spoof_matrix},
        {"signature sensitivity", signature_sensitivity},
        {"node-death timeline", node_death},
        {"codec round trips", codec_roundtrip},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.expect(false, std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
