#include <random>

#include "doctest.h"
#include "eyesec/codec/echo.hpp"
#include "eyesec/codec/trailer.hpp"
#include "eyesec/sniffer/sniffer.hpp"
#include "eyesec/verifier/verifier.hpp"
#include "sim_fixtures.hpp"

using namespace eyesec;
using namespace eyesec::verifier;
using eyesec::test::mac_n;
using eyesec::test::make_node;

namespace {

sniffer::HopRecord signed_hop(const sim::SimNode& sender, const codec::MacAddress& claimed, std::uint32_t seq)
{
    sniffer::HopRecord h;
    h.src_mac = claimed;
    h.dst_mac = mac_n(100);
    h.src_ip = codec::mac_to_ipv6(claimed);
    h.dst_ip = codec::mac_to_ipv6(mac_n(100));
    auto body = codec::encode_echo(seq);
    h.payload = codec::append_trailer(body, sim::sign_payload(sender, h.src_ip, h.dst_ip, body));
    return h;
}

} // namespace

TEST_CASE("KeyRegistry")
{
    KeyRegistry reg;
    auto a = sim::derive_node_key(1, "a").public_key();
    auto b = sim::derive_node_key(1, "b").public_key();
    reg.set(mac_n(1), a);
    CHECK_NOTHROW(reg.set(mac_n(1), a));
    CHECK_THROWS_AS(reg.set(mac_n(1), b), VerifierError);
    CHECK(*reg.find(mac_n(1)) == a);
    reg.set(mac_n(1), b, true);
    CHECK(*reg.find(mac_n(1)) == b);
    CHECK(reg.find(mac_n(2)) == nullptr);
}

TEST_CASE("verify_message")
{
    auto legit = make_node("n1", 1, 0, 0);
    legit.signing_key = sim::derive_node_key(5, "n1");
    auto attacker = make_node("mal", 66, 0, 0, sim::NodeRole::Malicious);
    attacker.signing_key = sim::derive_node_key(5, "mal");
    KeyRegistry reg;
    reg.set(legit.mac, legit.signing_key->public_key());

    CHECK(verify_message(signed_hop(legit, legit.mac, 1), reg) == SignatureStatus::Valid);
    // Copied address, attacker's own key.
    CHECK(verify_message(signed_hop(attacker, legit.mac, 1), reg) == SignatureStatus::Invalid);
    // Novel address without a registered key.
    CHECK(verify_message(signed_hop(attacker, attacker.mac, 1), reg) == SignatureStatus::UnknownKey);

    sniffer::HopRecord plain;
    plain.src_ip = codec::mac_to_ipv6(mac_n(9));
    plain.dst_ip = codec::mac_to_ipv6(mac_n(100));
    plain.payload = codec::encode_echo(4);
    CHECK(verify_message(plain, reg) == SignatureStatus::Unsigned);
    // A keyed node never sends unsigned traffic.
    plain.src_ip = codec::mac_to_ipv6(legit.mac);
    CHECK(verify_message(plain, reg) == SignatureStatus::Invalid);

    SUBCASE("signature covers the destination")
    {
        auto h = signed_hop(legit, legit.mac, 3);
        h.dst_ip = codec::mac_to_ipv6(mac_n(7));
        CHECK(verify_message(h, reg) == SignatureStatus::Invalid);
    }
}

TEST_CASE("any single-bit flip in payload or signature invalidates")
{
    auto legit = make_node("n1", 1, 0, 0);
    legit.signing_key = sim::derive_node_key(5, "n1");
    KeyRegistry reg;
    reg.set(legit.mac, legit.signing_key->public_key());
    std::mt19937_64 rng(11);
    for (std::uint32_t i = 0; i < 300; ++i) {
        auto h = signed_hop(legit, legit.mac, i);
        REQUIRE(verify_message(h, reg) == SignatureStatus::Valid);
        const auto bit = rng() % (h.payload.size() * 8);
        h.payload[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        REQUIRE(verify_message(h, reg) == SignatureStatus::Invalid);
    }
}

TEST_CASE("classify decision table")
{
    SpoofEvidence e;
    e.subject = mac_n(1);
    e.visually_registered = true;
    e.key_registered = true;

    SUBCASE("no duplicates, no failures")
    {
        e.tallies.valid = 50;
        CHECK(classify(e).spoof_case == SpoofCase::NoFinding);
    }
    SUBCASE("duplicate marker with all signatures valid: silent copy")
    {
        e.duplicate_marker = true;
        e.tallies.valid = 12;
        auto c = classify(e);
        CHECK(c.spoof_case == SpoofCase::CopiedIdSilent);
        CHECK(c.action.find("RSSI") != std::string::npos);
    }
    SUBCASE("duplicate marker with invalid signatures: chatty copy")
    {
        e.duplicate_marker = true;
        e.tallies.valid = 12;
        e.tallies.invalid = 3;
        CHECK(classify(e).spoof_case == SpoofCase::CopiedIdChatty);
    }
    SUBCASE("duplicate marker with stray unknown-key traffic")
    {
        e.duplicate_marker = true;
        e.tallies.valid = 12;
        e.stray_unknown_key = 4;
        CHECK(classify(e).spoof_case == SpoofCase::CopiedMarkerNewAddr);
    }
    SUBCASE("unique marker, invalid on a known address")
    {
        e.tallies.valid = 12;
        e.tallies.invalid = 5;
        CHECK(classify(e).spoof_case == SpoofCase::ForgedMarkerCopiedAddr);
    }
    SUBCASE("scanned device without key whose traffic never verifies")
    {
        e.key_registered = false;
        e.tallies.unknown_key = 6;
        CHECK(classify(e).spoof_case == SpoofCase::ForgedBoth);
    }
    SUBCASE("fewer than three observations is not enough")
    {
        e.tallies.invalid = 2;
        CHECK(classify(e).spoof_case == SpoofCase::NoFinding);
        e.duplicate_marker = true;
        e.tallies.valid = 1;
        CHECK(classify(e).spoof_case == SpoofCase::NoFinding);
    }
    SUBCASE("deterministic")
    {
        e.duplicate_marker = true;
        e.tallies.invalid = 9;
        CHECK(classify(e).spoof_case == classify(e).spoof_case);
        CHECK(classify(e).action == classify(e).action);
    }
    SUBCASE("case names round trip")
    {
        for (auto c : {SpoofCase::CopiedIdChatty, SpoofCase::CopiedIdSilent, SpoofCase::CopiedMarkerNewAddr,
                       SpoofCase::ForgedMarkerCopiedAddr, SpoofCase::ForgedBoth, SpoofCase::NoFinding}) {
            CHECK(parse_spoof_case(to_string(c)) == c);
        }
    }
}

TEST_CASE("rssi_trend")
{
    sim::RadioModel model;
    SUBCASE("walking toward the transmitter")
    {
        std::vector<double> samples;
        for (double d = 20; d >= 2; d -= 3) samples.push_back(sim::rssi_at_distance(d, model));
        CHECK(rssi_trend(samples) == Trend::Increasing);
    }
    SUBCASE("walking away")
    {
        std::vector<double> samples;
        for (double d = 2; d <= 20; d += 3) samples.push_back(sim::rssi_at_distance(d, model));
        CHECK(rssi_trend(samples) == Trend::Decreasing);
    }
    SUBCASE("standing still")
    {
        std::vector<double> samples(6, sim::rssi_at_distance(5, model));
        CHECK(rssi_trend(samples) == Trend::Flat);
    }
    SUBCASE("dead band is +-0.5 dB per sample")
    {
        CHECK(rssi_trend(std::vector<double>{0.0, 0.49, 0.98}) == Trend::Flat);
        CHECK(rssi_trend(std::vector<double>{0.0, 0.51, 1.02}) == Trend::Increasing);
        CHECK(rssi_trend(std::vector<double>{0.0, -0.51, -1.02}) == Trend::Decreasing);
    }
    SUBCASE("too few samples")
    {
        CHECK_THROWS_AS(rssi_trend(std::vector<double>{1.0, 2.0}), VerifierError);
    }
}
