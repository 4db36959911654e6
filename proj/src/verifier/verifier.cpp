#include "eyesec/verifier/verifier.hpp"

#include "eyesec/codec/trailer.hpp"

namespace eyesec::verifier {

void KeyRegistry::set(const codec::MacAddress& mac, const crypto::Ed25519PublicKey& key, bool replace)
{
    auto [it, inserted] = entries_.try_emplace(mac, key);
    if (inserted || it->second == key) return;
    if (!replace) throw VerifierError("a different key is already registered for " + mac.to_string());
    it->second = key;
}

const crypto::Ed25519PublicKey* KeyRegistry::find(const codec::MacAddress& mac) const
{
    auto it = entries_.find(mac);
    return it == entries_.end() ? nullptr : &it->second;
}

SignatureStatus verify_message(const sniffer::HopRecord& hop, const KeyRegistry& registry)
{
    const crypto::Ed25519PublicKey* key = nullptr;
    try {
        key = registry.find(codec::ipv6_to_mac(hop.src_ip));
    } catch (const codec::CodecError&) {
    }
    auto split = codec::split_trailer(hop.payload);
    if (!split.signature) return key ? SignatureStatus::Invalid : SignatureStatus::Unsigned;
    if (!key) return SignatureStatus::UnknownKey;
    auto message = codec::signed_message(hop.src_ip, hop.dst_ip, split.body);
    return crypto::ed25519_verify(*key, message, *split.signature) ? SignatureStatus::Valid : SignatureStatus::Invalid;
}

const char* to_string(SpoofCase c)
{
    switch (c) {
    case SpoofCase::CopiedIdChatty: return "COPIED_ID_CHATTY";
    case SpoofCase::CopiedIdSilent: return "COPIED_ID_SILENT";
    case SpoofCase::CopiedMarkerNewAddr: return "COPIED_MARKER_NEW_ADDR";
    case SpoofCase::ForgedMarkerCopiedAddr: return "FORGED_MARKER_COPIED_ADDR";
    case SpoofCase::ForgedBoth: return "FORGED_BOTH";
    case SpoofCase::NoFinding: return "NO_FINDING";
    }
    return "?";
}

SpoofCase parse_spoof_case(const std::string& text)
{
    for (auto c : {SpoofCase::CopiedIdChatty, SpoofCase::CopiedIdSilent, SpoofCase::CopiedMarkerNewAddr,
                   SpoofCase::ForgedMarkerCopiedAddr, SpoofCase::ForgedBoth, SpoofCase::NoFinding}) {
        if (text == to_string(c)) return c;
    }
    throw VerifierError("unknown spoof case: " + text);
}

void SignatureTallies::add(SignatureStatus s, long delta)
{
    auto bump = [delta](std::size_t& v) { v = static_cast<std::size_t>(static_cast<long>(v) + delta); };
    switch (s) {
    case SignatureStatus::Valid: bump(valid); break;
    case SignatureStatus::Invalid: bump(invalid); break;
    case SignatureStatus::UnknownKey: bump(unknown_key); break;
    case SignatureStatus::Unsigned: bump(unsigned_count); break;
    case SignatureStatus::Unchecked: break;
    }
}

Classification classify(const SpoofEvidence& e)
{
    constexpr auto n = kCorroboratingObservations;
    const auto& t = e.tallies;
    if (e.duplicate_marker) {
        if (t.invalid >= n) {
            return {SpoofCase::CopiedIdChatty,
                    "Duplicate marker and failing signatures under this address: a copy transmits with a foreign key. "
                    "The placement whose traffic fails verification is the impostor."};
        }
        if (e.stray_unknown_key >= n) {
            return {SpoofCase::CopiedMarkerNewAddr,
                    "Duplicate marker while an unregistered address sends unverifiable traffic: the copy uses its own "
                    "address. Traffic shown at either placement is ambiguous until resolved."};
        }
        if (t.valid + t.unsigned_count >= n) {
            return {SpoofCase::CopiedIdSilent,
                    "Duplicate marker but all traffic verifies: one placement is silent. Walk the handheld sniffer "
                    "between both placements; RSSI rises toward the legitimate node."};
        }
        return {SpoofCase::NoFinding, "Duplicate marker; waiting for traffic to corroborate."};
    }
    if (e.key_registered && t.invalid >= n) {
        return {SpoofCase::ForgedMarkerCopiedAddr,
                "Signatures fail on a known address with a unique marker: a device with a forged marker transmits "
                "under this address. Compare RSSI while moving between candidate devices."};
    }
    if (e.visually_registered && !e.key_registered && t.unknown_key >= n) {
        return {SpoofCase::ForgedBoth,
                "Marker and address are unknown to the key registry and every signature check fails: this device "
                "is forged."};
    }
    return {SpoofCase::NoFinding, "No action needed."};
}

const char* to_string(Trend t)
{
    switch (t) {
    case Trend::Increasing: return "increasing";
    case Trend::Decreasing: return "decreasing";
    case Trend::Flat: return "flat";
    }
    return "?";
}

Trend rssi_trend(std::span<const double> rssi)
{
    if (rssi.size() < 3) throw VerifierError("TooFewSamples: rssi trend needs at least 3 samples");
    const double n = static_cast<double>(rssi.size());
    const double mean_x = (n - 1.0) / 2.0;
    double mean_y = 0.0;
    for (double y : rssi) mean_y += y;
    mean_y /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < rssi.size(); ++i) {
        const double dx = static_cast<double>(i) - mean_x;
        sxy += dx * (rssi[i] - mean_y);
        sxx += dx * dx;
    }
    const double slope = sxy / sxx;
    if (slope > kTrendDeadBand) return Trend::Increasing;
    if (slope < -kTrendDeadBand) return Trend::Decreasing;
    return Trend::Flat;
}

} // namespace eyesec::verifier
