#include <algorithm>
#include <random>
#include <thread>

#include "backend_fixtures.hpp"
#include "doctest.h"
#include "eyesec/backend/backend.hpp"

using namespace eyesec;
using namespace eyesec::backend;
using namespace eyesec::test;
using sniffer::Admission;

TEST_CASE("admission rule")
{
    Backend b;
    auto h = echo_hop(1, 100, 1);
    CHECK(b.ingest(witness(h, "a", 1'000'000)) == Admission::Admitted);

    SUBCASE("2 ms apart is a duplicate")
    {
        CHECK(b.ingest(witness(h, "b", 1'002'000)) == Admission::Duplicate);
        CHECK(b.transmission_count() == 1);
        CHECK(b.witness_count() == 2);
    }
    SUBCASE("50 ms apart is a retransmission")
    {
        CHECK(b.ingest(witness(h, "b", 1'050'000)) == Admission::Admitted);
        CHECK(b.transmission_count() == 2);
    }
    SUBCASE("epsilon is a strict bound")
    {
        CHECK(b.ingest(witness(h, "b", 1'004'999)) == Admission::Duplicate);
        Backend c;
        c.ingest(witness(h, "a", 1'000'000));
        CHECK(c.ingest(witness(h, "b", 1'005'000)) == Admission::Admitted);
        CHECK(c.ingest(witness(h, "b", 995'000)) == Admission::Admitted);
    }
    SUBCASE("different digests never collide")
    {
        CHECK(b.ingest(witness(echo_hop(1, 100, 2), "a", 1'000'000)) == Admission::Admitted);
    }
    SUBCASE("earliest witness is the transmission time")
    {
        b.ingest(witness(h, "b", 998'000, -70));
        auto s = b.canonical_state();
        REQUIRE(s.size() == 1);
        CHECK(s[0].ts == microseconds(998'000));
        CHECK(s[0].hop.rssi == -70);
        CHECK(s[0].witnesses.size() == 2);
    }
}

TEST_CASE("epsilon is configurable")
{
    Backend b({microseconds(100)});
    auto h = echo_hop(1, 100, 1);
    b.ingest(witness(h, "a", 1000));
    CHECK(b.ingest(witness(h, "b", 1099)) == Admission::Duplicate);
    CHECK(b.ingest(witness(h, "b", 1300)) == Admission::Admitted);
    CHECK_THROWS_AS(Backend({microseconds(0)}), BackendError);
}

TEST_CASE("bridging witness merges clusters")
{
    Backend b;
    auto h = echo_hop(1, 100, 1);
    CHECK(b.ingest(witness(h, "a", 0'000 + 10)) == Admission::Admitted);
    CHECK(b.ingest(witness(h, "b", 8'000 + 10)) == Admission::Admitted);
    CHECK(b.transmission_count() == 2);
    CHECK(b.ingest(witness(h, "c", 4'000 + 10)) == Admission::Duplicate);
    CHECK(b.transmission_count() == 1);
    CHECK(b.witness_count() == 3);
}

TEST_CASE("re-ingesting the upload log changes nothing")
{
    Backend b;
    std::vector<sniffer::PacketReport> log;
    for (std::uint32_t s = 1; s <= 20; ++s) {
        auto h = echo_hop(static_cast<std::uint8_t>(1 + s % 3), 100, s);
        log.push_back(witness(h, "a", s * 10'000'000 + 700));
        log.push_back(witness(h, "b", s * 10'000'000 - 800));
    }
    b.ingest(log);
    auto state = b.canonical_state();
    auto warnings = b.warnings();
    auto admissions = b.ingest(log);
    CHECK(std::all_of(admissions.begin(), admissions.end(), [](auto a) { return a == Admission::Duplicate; }));
    CHECK(b.canonical_state() == state);
    CHECK(b.warnings() == warnings);
}

TEST_CASE("final state is independent of arrival order")
{
    std::mt19937 rng(7);
    std::vector<sniffer::PacketReport> log;
    for (std::uint32_t s = 1; s <= 30; ++s) {
        auto h = echo_hop(1, 100, s % 4);
        auto base = static_cast<std::int64_t>(s) * 20'000;
        // chains of witnesses where only some pairs are within epsilon
        for (int k = 0; k < 4; ++k) {
            std::uniform_int_distribution<int> jitter(0, 4'000);
            log.push_back(witness(h, "s" + std::to_string(k), base + k * 3'000 + jitter(rng) % 1'000, -50 - k));
        }
    }
    Backend ref;
    ref.ingest(log);
    auto expected = ref.canonical_state();
    for (int round = 0; round < 50; ++round) {
        std::shuffle(log.begin(), log.end(), rng);
        Backend b;
        for (const auto& r : log) b.ingest(r);
        REQUIRE(b.canonical_state() == expected);
    }
}

TEST_CASE("traffic views")
{
    Backend b;
    // 1 -> 2 -> 100 and reply 100 -> 2 -> 1
    for (std::uint32_t s = 1; s <= 3; ++s) {
        std::int64_t t = s * 10'000'000;
        auto req = echo_hop(1, 2, s);
        req.dst_ip = codec::mac_to_ipv6(mac_n(100));
        b.ingest(witness(req, "a", t));
        b.ingest(witness(relay(req, 2, 100), "a", t + 5'000));
        auto rep = echo_hop(100, 2, s);
        std::swap(rep.src_port, rep.dst_port);
        rep.dst_ip = codec::mac_to_ipv6(mac_n(1));
        b.ingest(witness(rep, "a", t + 10'000));
        b.ingest(witness(relay(rep, 2, 1), "a", t + 15'000));
    }
    auto ip = b.edges(View::Ip, microseconds(0), microseconds(100'000'000));
    REQUIRE(ip.size() == 2);
    CHECK(ip[0].count == 3);
    CHECK(ip[1].count == 3);
    CHECK(ip[0].src == codec::mac_to_ipv6(mac_n(1)).to_string());
    CHECK(ip[0].dst == codec::mac_to_ipv6(mac_n(100)).to_string());

    auto mac = b.edges(View::Mac, microseconds(0), microseconds(100'000'000));
    CHECK(mac.size() == 4);
    std::uint64_t total = 0;
    for (const auto& e : mac) total += e.count;
    CHECK(total == 12);

    CHECK(b.edges(View::Mac, microseconds(0), microseconds(10'000'000)).empty());
    CHECK(b.edges(View::Ip, microseconds(5), microseconds(5)).empty());
    CHECK(b.edges(View::Mac, microseconds(10'000'000), microseconds(20'000'000)).size() == 4);
    CHECK_THROWS_AS(b.edges(View::Ip, microseconds(2), microseconds(1)), BackendError);

    auto info = b.node_info(mac_n(2));
    CHECK(info.stats.sent == 6);
    CHECK(info.stats.received == 6);
    CHECK(info.stats.neighbors.size() == 2);
    auto late = b.node_info(mac_n(2), Window{microseconds(50'000'000), microseconds(60'000'000)});
    CHECK(late.stats.sent == 0);
    CHECK(late.stats.neighbors.empty());
    CHECK_THROWS_AS(b.node_info(mac_n(77)), BackendError);
}

TEST_CASE("timeline")
{
    Backend b;
    for (std::uint32_t s = 1; s <= 12; ++s) b.ingest(witness(echo_hop(1, 100, s), "a", s * 10'000'000));
    for (std::uint32_t s = 1; s <= 5; ++s) b.ingest(witness(echo_hop(2, 100, s), "a", s * 10'000'000 + 1));

    auto all = b.timeline(microseconds(1'000'000'000));
    REQUIRE(all.size() == 1);
    auto everything = b.edges(View::Mac, all[0].t0, all[0].t1);
    CHECK(all[0].mac == everything);
    CHECK(everything.size() == 2);

    auto steps = b.timeline(microseconds(20'000'000));
    CHECK(steps.size() == 6);
    CHECK(steps == b.timeline(microseconds(20'000'000)));
    std::uint64_t total = 0;
    for (const auto& s : steps) {
        for (const auto& e : s.mac) total += e.count;
    }
    CHECK(total == 17);
    CHECK(steps.back().mac.size() == 1);

    auto windowed = b.timeline(microseconds(30'000'000), Window{microseconds(0), microseconds(60'000'000)});
    CHECK(windowed.size() == 2);
    CHECK(windowed[0].t0 == microseconds(0));
    CHECK_THROWS_AS(b.timeline(microseconds(0)), BackendError);
    CHECK(Backend().timeline(microseconds(5)).empty());
}

TEST_CASE("marker scans")
{
    Backend b;
    auto r = b.register_marker_scan(mac_n(1), "rack-1", microseconds(5));
    CHECK_FALSE(r.warning);
    CHECK(r.record.first_seen_visual == microseconds(5));
    CHECK_FALSE(r.record.first_seen_digital);

    auto again = b.register_marker_scan(mac_n(1), "rack-1", microseconds(9));
    CHECK_FALSE(again.warning);
    CHECK(again.record == r.record);
    CHECK(b.warnings().empty());

    CHECK(b.update_node(mac_n(1), {"n1", "shelf"}).name == "n1");

    auto dup = b.register_marker_scan(mac_n(1), "rack-7", microseconds(20));
    REQUIRE(dup.warning);
    CHECK(dup.warning->kind == WarningKind::DuplicateMarker);
    CHECK(dup.record.locked);
    try {
        b.update_node(mac_n(1), {"x", {}});
        FAIL("expected Locked");
    } catch (const BackendError& e) {
        CHECK(e.code() == BackendErrc::Locked);
    }
    CHECK(b.nodes().front().name == "n1");
    CHECK_THROWS_AS(b.resolve_duplicate(mac_n(1), "rack-9"), BackendError);
    auto fixed = b.resolve_duplicate(mac_n(1), "rack-1");
    CHECK_FALSE(fixed.locked);
    CHECK(fixed.placements == std::vector<std::string>{"rack-1"});
    CHECK(b.update_node(mac_n(1), {"x", {}}).name == "x");
    CHECK_THROWS_AS(b.update_node(mac_n(3), {}), BackendError);
}

TEST_CASE("traffic creates digital records")
{
    Backend b;
    b.ingest(witness(echo_hop(1, 100, 1), "a", 300));
    b.ingest(witness(echo_hop(1, 100, 2), "a", 200));
    auto n = b.nodes();
    REQUIRE(n.size() == 2);
    CHECK(n[0].first_seen_digital == microseconds(200));
    CHECK_FALSE(n[0].first_seen_visual);
}

TEST_CASE("signature handling")
{
    auto good = crypto::Ed25519Keypair::generate();
    auto evil = crypto::Ed25519Keypair::generate();
    Backend b;

    SUBCASE("keys registered later re-verify stored traffic")
    {
        b.ingest(witness(echo_hop(1, 100, 1, &good), "a", 1'000'000));
        CHECK(b.canonical_state()[0].hop.signature_status == sniffer::SignatureStatus::UnknownKey);
        CHECK(b.warnings().back().kind == WarningKind::UnknownKey);
        b.register_key(mac_n(1), good.public_key());
        CHECK(b.canonical_state()[0].hop.signature_status == sniffer::SignatureStatus::Valid);
        CHECK(b.nodes().front().public_key == good.public_key());
        CHECK_NOTHROW(b.register_key(mac_n(1), good.public_key()));
        CHECK_THROWS_AS(b.register_key(mac_n(1), evil.public_key()), BackendError);
        b.register_key(mac_n(1), evil.public_key(), true);
        CHECK(b.canonical_state()[0].hop.signature_status == sniffer::SignatureStatus::Invalid);
        CHECK(b.warnings().back().kind != WarningKind::UnknownKey);
    }
    SUBCASE("a single failure warns; three classify")
    {
        b.register_key(mac_n(1), good.public_key());
        b.register_marker_scan(mac_n(1), "rack-1", microseconds(0));
        b.ingest(witness(echo_hop(1, 100, 1, &evil), "a", 10'000'000));
        CHECK(b.warnings().size() == 1);
        CHECK(b.warnings()[0].kind == WarningKind::FailedSignature);
        CHECK(b.findings().empty());
        b.ingest(witness(echo_hop(1, 100, 2, &evil), "a", 20'000'000));
        b.ingest(witness(echo_hop(1, 100, 3, &evil), "a", 30'000'000));
        auto f = b.findings();
        REQUIRE(f.size() == 1);
        CHECK(f.at(mac_n(1)) == verifier::SpoofCase::ForgedMarkerCopiedAddr);
        auto w = b.warnings();
        CHECK(w.back().kind == WarningKind::SpoofClassified);
        CHECK(w.back().spoof_case == verifier::SpoofCase::ForgedMarkerCopiedAddr);
        auto report = b.spoof_report(mac_n(1));
        CHECK(report.evidence.tallies.invalid == 3);
        CHECK(report.classification.spoof_case == verifier::SpoofCase::ForgedMarkerCopiedAddr);
        CHECK(b.rssi(mac_n(1)).empty());
    }
    SUBCASE("forwarded hops are not tallied twice")
    {
        b.register_key(mac_n(1), good.public_key());
        for (std::uint32_t s = 1; s <= 3; ++s) {
            auto h = echo_hop(1, 2, s, &evil);
            b.ingest(witness(h, "a", s * 10'000'000));
            b.ingest(witness(relay(h, 2, 100), "a", s * 10'000'000 + 5'000));
        }
        CHECK(b.spoof_report(mac_n(1)).evidence.tallies.invalid == 3);
        CHECK(b.warnings(Window{microseconds(0), microseconds(15'000'000)}).size() == 1);
    }
}

TEST_CASE("rssi samples and trend")
{
    Backend b;
    for (std::uint32_t s = 1; s <= 5; ++s) {
        auto h = echo_hop(1, 100, s);
        b.ingest(witness(h, "walk", s * 10'000'000, -80.0 + 4.0 * s));
        b.ingest(witness(h, "fixed", s * 10'000'000 + 900, -60.0));
    }
    CHECK(b.rssi(mac_n(1)).size() == 10);
    auto walk = b.rssi(mac_n(1), std::string("walk"));
    REQUIRE(walk.size() == 5);
    CHECK(walk.front().rssi == -76.0);
    auto report = b.spoof_report(mac_n(1));
    REQUIRE(report.rssi_trends.size() == 2);
    CHECK(report.rssi_trends[0].first == "fixed");
    CHECK(report.rssi_trends[0].second == verifier::Trend::Flat);
    CHECK(report.rssi_trends[1].second == verifier::Trend::Increasing);
}

TEST_CASE("concurrent ingestion from several sniffers")
{
    Backend b;
    std::vector<std::thread> threads;
    for (int k = 0; k < 4; ++k) {
        threads.emplace_back([&b, k] {
            for (std::uint32_t s = 1; s <= 200; ++s) {
                b.ingest(witness(echo_hop(1, 100, s), "s" + std::to_string(k), s * 100'000 + k * 100));
                if (s % 50 == 0) b.edges(View::Mac, microseconds(0), microseconds(1'000'000'000));
            }
        });
    }
    for (auto& t : threads) t.join();
    CHECK(b.transmission_count() == 200);
    CHECK(b.witness_count() == 800);
}
