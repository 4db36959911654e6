#include "eyesec/scenario/runner.hpp"

#include <cmath>
#include <set>

#include "eyesec/backend/serialize.hpp"
#include "eyesec/sniffer/uploader.hpp"

namespace eyesec::scenario {

using nlohmann::json;

namespace {

constexpr const char* kSnifferSecret = "sniffer-secret";

// Upload ticks follow the sniffer's batching period.
constexpr Micros kTick{200'000};

} // namespace

struct ScenarioRun::Station {
    SnifferSpec spec;
    sniffer::Sniffer sniffer;
    sniffer::Uploader uploader;
    backend::ApiBackendClient client;

    Station(SnifferSpec s, backend::Transport& t, const std::string& secret)
        : spec(s), sniffer({s.id, s.skew}), client(t, s.id, secret)
    {
    }
};

ScenarioRun::ScenarioRun(ScenarioConfig config) : config_(std::move(config)), sim_(config_.sim)
{
    backend_ = std::make_unique<backend::Backend>(backend::BackendConfig{config_.epsilon});
    credentials_ = std::make_unique<backend::CredentialStore>();
    credentials_->add(kOperatorUser, kOperatorSecret, backend::Role::Operator);
    api_ = std::make_unique<backend::Api>(*backend_, *credentials_, [this] { return now_; });
    local_ = std::make_unique<backend::LocalTransport>(*api_);
    transport_ = local_.get();
    operator_ = std::make_unique<backend::ApiClient>(*transport_, kOperatorUser, kOperatorSecret);
    setup();
}

ScenarioRun::ScenarioRun(ScenarioConfig config, backend::Transport& transport, std::string user, std::string secret)
    : config_(std::move(config)), sim_(config_.sim), transport_(&transport)
{
    operator_ = std::make_unique<backend::ApiClient>(transport, std::move(user), std::move(secret));
    setup();
}

ScenarioRun::~ScenarioRun() = default;

void ScenarioRun::setup()
{
    for (const auto& f : config_.faults) sim_.inject_fault(f);
    for (const auto& s : config_.sniffers) {
        operator_->post("/api/credentials", {{"username", s.id}, {"secret", kSnifferSecret}, {"role", "sniffer"}});
        stations_.push_back(std::make_unique<Station>(s, *transport_, kSnifferSecret));
    }
    for (const auto& name : config_.registered_keys) {
        const auto& node = sim_.node(name);
        operator_->post("/api/keys", {{"mac", node.mac.to_string()}, {"public_key", to_hex(node.signing_key->public_key())}});
    }
}

void ScenarioRun::hear(const sim::RadioEvent& ev)
{
    for (auto& st : stations_) {
        auto where = st->spec.position_at(ev.time);
        if (st->spec.range && sim::distance(where, ev.origin_position) > *st->spec.range) continue;
        auto packet = st->sniffer.capture({ev.time, ev.bytes, sim::rssi_at(where, ev, config_.sim.radio)});
        if (!packet.decoded()) continue;
        st->uploader.enqueue({st->spec.id, sniffer::extract_hop(packet)});
    }
}

void ScenarioRun::scans_until(Micros t)
{
    while (next_scan_ < config_.scans.size() && config_.scans[next_scan_].at <= t) {
        const auto& s = config_.scans[next_scan_++];
        auto token = sim_.scan_marker(s.node);
        if (!token) continue;
        operator_->post("/api/nodes", {{"mac", token->embedded_mac.to_string()}, {"placement", s.placement}, {"ts", s.at.count()}});
    }
}

void ScenarioRun::flush(Micros now, bool all)
{
    for (auto& st : stations_) {
        if (all) {
            st->uploader.flush_all(st->client);
        } else {
            while (st->uploader.due(now + st->spec.skew)) st->uploader.flush(st->client);
        }
    }
}

void ScenarioRun::advance(Micros t)
{
    t = std::min(t, config_.duration);
    while (now_ < t) {
        auto next = std::min(t, now_ + kTick);
        for (auto& ev : sim_.step(next)) {
            hear(ev);
            events_.push_back(std::move(ev));
        }
        now_ = next;
        scans_until(now_);
        flush(now_, false);
    }
    scans_until(now_);
}

void ScenarioRun::finish()
{
    if (finished_) return;
    scans_until(config_.duration);
    flush(now_, true);
    finished_ = true;
}

void ScenarioRun::run()
{
    advance(config_.duration);
    finish();
}

std::size_t ScenarioRun::captured() const
{
    std::size_t n = 0;
    for (const auto& st : stations_) n += st->sniffer.captured();
    return n;
}

std::size_t ScenarioRun::corrupt() const
{
    std::size_t n = 0;
    for (const auto& st : stations_) n += st->sniffer.corrupt();
    return n;
}

std::string ScenarioRun::resolve_mac(const std::string& s) const
{
    for (const auto& n : sim_.nodes()) {
        if (n.name == s) return n.mac.to_string();
    }
    return codec::MacAddress::parse(s).to_string();
}

std::string ScenarioRun::resolve_ip(const std::string& s) const
{
    for (const auto& n : sim_.nodes()) {
        if (n.name == s) return codec::mac_to_ipv6(n.mac).to_string();
    }
    return codec::Ipv6Address::parse(s).to_string();
}

json ScenarioRun::report()
{
    finish();
    // Window covering every stored timestamp, including skewed ones.
    Micros max_skew{0};
    for (const auto& s : config_.sniffers) max_skew = std::max(max_skew, s.skew < Micros::zero() ? -s.skew : s.skew);
    auto t1 = std::to_string((config_.duration + max_skew + Micros(1)).count());
    auto t0 = std::to_string(-max_skew.count());

    std::map<std::string, std::string> names;
    for (const auto& n : sim_.nodes()) {
        names[n.mac.to_string()] = n.name;
        names[codec::mac_to_ipv6(n.mac).to_string()] = n.name;
    }
    auto label = [&](const std::string& addr) {
        auto it = names.find(addr);
        return it == names.end() ? json(nullptr) : json(it->second);
    };

    json edges = json::object();
    std::map<std::string, std::map<std::pair<std::string, std::string>, std::uint64_t>> counts;
    for (const char* view : {"ip", "mac"}) {
        auto body = operator_->get("/api/edges", {{"view", view}, {"t0", t0}, {"t1", t1}});
        json list = json::array();
        for (const auto& e : body["edges"]) {
            list.push_back({{"src", e["src"]}, {"dst", e["dst"]}, {"count", e["count"]},
                            {"src_node", label(e["src"])}, {"dst_node", label(e["dst"])}});
            counts[view][{e["src"], e["dst"]}] = e["count"];
        }
        edges[view] = list;
    }

    auto warnings = operator_->get("/api/warnings");
    json warning_list = json::array();
    std::map<std::string, std::size_t> warning_counts;
    for (const auto& w : warnings) {
        ++warning_counts[w["kind"]];
        warning_list.push_back({{"kind", w["kind"]}, {"subject", w["subject"]}, {"ts", w["ts"]}, {"spoof_case", w["spoof_case"]}});
    }
    auto findings = operator_->get("/api/spoof");
    json spoof_reports = json::object();
    for (const auto& [mac, c] : findings.items()) {
        auto r = operator_->get("/api/spoof/" + mac);
        spoof_reports[mac] = {{"spoof_case", r["spoof_case"]}, {"action", r["action"]}, {"evidence", r["evidence"]},
                              {"rssi_trends", r["rssi_trends"]}};
    }
    auto status = operator_->get("/api/status");

    json checks = json::array();
    bool pass = true;
    auto check = [&](std::string what, const json& expected, const json& actual) {
        bool ok = expected == actual;
        pass = pass && ok;
        checks.push_back({{"check", std::move(what)}, {"expected", expected}, {"actual", actual}, {"pass", ok}});
    };
    const auto& x = config_.expect;
    auto edge_checks = [&](const char* view, const std::vector<EdgeExpectation>& list) {
        for (const auto& e : list) {
            auto src = std::string(view) == "ip" ? resolve_ip(e.src) : resolve_mac(e.src);
            auto dst = std::string(view) == "ip" ? resolve_ip(e.dst) : resolve_mac(e.dst);
            auto& c = counts[view];
            auto it = c.find({src, dst});
            check(std::string(view) + " edge " + e.src + " -> " + e.dst, e.count, it == c.end() ? 0 : it->second);
        }
    };
    if (x.ip_edges) edge_checks("ip", *x.ip_edges);
    if (x.mac_edges) edge_checks("mac", *x.mac_edges);
    if (x.transmissions) check("transmissions", *x.transmissions, status["transmissions"]);
    if (x.witnesses) check("witnesses", *x.witnesses, status["witnesses"]);
    if (x.spoof) {
        json expected = json::object();
        for (const auto& [subject, c] : *x.spoof) expected[resolve_mac(subject)] = c;
        check("spoof findings", expected, findings);
    }
    for (const auto& [kind, n] : x.warnings) {
        auto it = warning_counts.find(kind);
        check("warnings " + kind, n, it == warning_counts.end() ? 0 : it->second);
    }

    json nodes = json::object();
    for (const auto& n : sim_.nodes()) {
        nodes[n.name] = {{"mac", n.mac.to_string()}, {"ip", codec::mac_to_ipv6(n.mac).to_string()}, {"role", n.role == sim::NodeRole::Server ? "server" : n.role == sim::NodeRole::Malicious ? "malicious" : "client"}};
    }
    return {
        {"scenario", config_.id},
        {"seed", config_.sim.seed},
        {"duration_us", config_.duration.count()},
        {"epsilon_us", config_.epsilon.count()},
        {"nodes", nodes},
        {"radio_events", events_.size()},
        {"captured", captured()},
        {"corrupt", corrupt()},
        {"transmissions", status["transmissions"]},
        {"witnesses", status["witnesses"]},
        {"edges", edges},
        {"warnings", warning_list},
        {"warning_counts", warning_counts},
        {"spoof", findings},
        {"spoof_reports", spoof_reports},
        {"checks", checks},
        {"pass", pass},
    };
}

json run_scenario(const ScenarioConfig& config)
{
    ScenarioRun run(config);
    run.run();
    return run.report();
}

std::string canonical(const json& j) { return j.dump(2) + "\n"; }

} // namespace eyesec::scenario
