#include <filesystem>
#include <thread>

#include "doctest.h"
#include "eyesec/backend/http.hpp"
#include "eyesec/scenario/replay.hpp"
#include "eyesec/scenario/runner.hpp"

using namespace eyesec;
using namespace eyesec::scenario;
using std::chrono::microseconds;

namespace {

std::filesystem::path bundled(const std::string& name) { return std::filesystem::path(EYESEC_SCENARIO_DIR) / (name + ".yaml"); }

const char* kSmall = R"(
id: small
duration_s: 30
nodes:
  - {name: server, mac: "00:12:4b:00:00:00:00:64", pos: [0, 0], role: server}
  - {name: c1, mac: "00:12:4b:00:00:00:00:01", pos: [10, 0], interval_s: 10}
sniffers:
  - {id: a, pos: [0, 0]}
)";

} // namespace

TEST_CASE("config parsing")
{
    auto cfg = parse_scenario(kSmall);
    CHECK(cfg.id == "small");
    CHECK(cfg.duration == microseconds(30'000'000));
    CHECK(cfg.epsilon == microseconds(5'000));
    REQUIRE(cfg.sim.nodes.size() == 2);
    CHECK(cfg.sim.nodes[0].role == sim::NodeRole::Server);
    CHECK(cfg.sim.nodes[1].marker);
    CHECK_FALSE(cfg.sim.nodes[1].signing_key);
    CHECK(cfg.registered_keys.empty());

    auto signed_cfg = parse_scenario(std::string(kSmall) + "register_keys: none\n");
    CHECK(signed_cfg.registered_keys.empty());

    CHECK_THROWS_AS(parse_scenario("duration_s: 1"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("id: x"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("id: x\nduration_s: [1"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("- 1\n- 2"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(std::string(kSmall) + "faults:\n  - {at_s: 1, kind: node_death, subject: ghost}\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(std::string(kSmall) + "faults:\n  - {at_s: 1, kind: meteor, subject: c1}\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(std::string(kSmall) + "scans:\n  - {at_s: 1, node: ghost}\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(std::string(kSmall) + "register_keys: [c1]\n"), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent.yaml"), ConfigError);
}

TEST_CASE("all bundled scenarios parse")
{
    for (const auto& entry : std::filesystem::directory_iterator(EYESEC_SCENARIO_DIR)) {
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_scenario(entry.path()));
    }
}

TEST_CASE("handheld path interpolation")
{
    SnifferSpec s;
    s.path = {{microseconds(0), {0, 0}}, {microseconds(10), {10, 0}}, {microseconds(20), {10, 10}}};
    CHECK(s.position_at(microseconds(-5)) == sim::Position{0, 0});
    CHECK(s.position_at(microseconds(5)) == sim::Position{5, 0});
    CHECK(s.position_at(microseconds(15)) == sim::Position{10, 5});
    CHECK(s.position_at(microseconds(99)) == sim::Position{10, 10});
}

TEST_CASE("zero nodes give an empty report")
{
    auto r = run_scenario(load_scenario(bundled("empty")));
    CHECK(r["transmissions"] == 0);
    CHECK(r["edges"]["ip"].empty());
    CHECK(r["edges"]["mac"].empty());
    CHECK(r["warnings"].empty());
    CHECK(r["spoof"].empty());
    CHECK(r["pass"] == true);
}

TEST_CASE("reports are reproducible byte for byte")
{
    auto cfg = load_scenario(bundled("spoof-case-1"));
    CHECK(canonical(run_scenario(cfg)) == canonical(run_scenario(cfg)));
}

TEST_CASE("failed expectations are reported")
{
    auto cfg = parse_scenario(std::string(kSmall) + "expect:\n  ip_edges:\n    - {src: c1, dst: server, count: 99}\n  spoof: {}\n");
    auto r = run_scenario(cfg);
    CHECK(r["pass"] == false);
    REQUIRE(r["checks"].size() == 2);
    CHECK(r["checks"][0]["actual"] == 3);
    CHECK(r["checks"][1]["pass"] == true);
}

TEST_CASE("sniffer range limits what is heard")
{
    auto cfg = parse_scenario(std::string(kSmall) + "  - {id: far, pos: [500, 0], range_m: 50}\n");
    ScenarioRun run(cfg);
    run.run();
    CHECK(run.backend()->transmission_count() == 6);
    CHECK(run.backend()->witness_count() == 6);
}

TEST_CASE("PCAP replay")
{
    auto cfg = load_scenario(bundled("line"));
    sim::Simulation s(cfg.sim);
    auto pcap = to_pcap(s.step(cfg.duration));
    auto bytes = codec::write_pcap(pcap);

    backend::Backend b;
    backend::CredentialStore creds;
    creds.add("s", "pw", backend::Role::Sniffer);
    backend::Api api(b, creds);
    backend::LocalTransport local(api);
    backend::ApiBackendClient client(local, "s", "pw");

    auto first = replay(codec::read_pcap(bytes), client);
    CHECK(first.frames == 60);
    CHECK(first.admitted == 60);
    CHECK(first.duplicate == 0);
    CHECK(first.corrupt == 0);

    auto second = replay(codec::read_pcap(bytes), client);
    CHECK(second.admitted == 0);
    CHECK(second.duplicate == 60);
    CHECK(b.transmission_count() == 60);

    SUBCASE("corrupt frames are counted, not uploaded")
    {
        auto damaged = pcap;
        damaged.records[3].frame[10] ^= 0x01;
        damaged.records[7].frame.resize(8);
        backend::Backend fresh;
        backend::Api api2(fresh, creds);
        backend::LocalTransport local2(api2);
        backend::ApiBackendClient c2(local2, "s", "pw");
        auto r = replay(damaged, c2);
        CHECK(r.corrupt == 2);
        CHECK(r.admitted == 58);
    }
    SUBCASE("Ethernet captures are refused")
    {
        auto eth = pcap;
        eth.link_type = 1;
        try {
            replay(eth, client);
            FAIL("expected UnsupportedLinkType");
        } catch (const codec::CodecError& e) {
            CHECK(e.code() == codec::CodecErrc::UnsupportedLinkType);
        }
    }
}

TEST_CASE("scenario against a backend over HTTP")
{
    backend::Backend b;
    backend::CredentialStore creds;
    creds.add("op", "pw", backend::Role::Operator);
    backend::Api api(b, creds);
    backend::HttpServer server(api);
    int port = server.bind("127.0.0.1", 0);
    std::thread loop([&] { server.listen(); });
    while (!server.running()) std::this_thread::yield();

    backend::HttpTransport http("http://127.0.0.1:" + std::to_string(port));
    auto cfg = load_scenario(bundled("testbed6"));
    ScenarioRun remote(cfg, http, "op", "pw");
    remote.run();
    auto r = remote.report();
    server.stop();
    loop.join();

    CHECK(r["pass"] == true);
    auto local = run_scenario(cfg);
    CHECK(r["edges"] == local["edges"]);
    CHECK(r["transmissions"] == local["transmissions"]);
}
