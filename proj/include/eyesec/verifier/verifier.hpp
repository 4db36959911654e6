#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eyesec/sniffer/records.hpp"

namespace eyesec::verifier {

using sniffer::SignatureStatus;

class VerifierError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operator-provisioned public keys, one per MAC.
class KeyRegistry {
public:
    /// Throws VerifierError when a different key is already registered and
    /// `replace` is false. Re-registering the same key is a no-op.
    void set(const codec::MacAddress& mac, const crypto::Ed25519PublicKey& key, bool replace = false);
    const crypto::Ed25519PublicKey* find(const codec::MacAddress& mac) const;
    bool contains(const codec::MacAddress& mac) const { return find(mac) != nullptr; }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<codec::MacAddress, crypto::Ed25519PublicKey> entries_;
};

/// Checks the payload trailer of `hop` against the key registered for the
/// MAC derived from its source address. Payloads without a trailer are
/// `Unsigned` when no key is registered for the sender and `Invalid` when
/// one is (a keyed node must not send unsigned traffic).
SignatureStatus verify_message(const sniffer::HopRecord& hop, const KeyRegistry& registry);

enum class SpoofCase {
    CopiedIdChatty,
    CopiedIdSilent,
    CopiedMarkerNewAddr,
    ForgedMarkerCopiedAddr,
    ForgedBoth,
    NoFinding,
};

const char* to_string(SpoofCase c);
SpoofCase parse_spoof_case(const std::string& text);

struct SignatureTallies {
    std::size_t valid = 0;
    std::size_t invalid = 0;
    std::size_t unknown_key = 0;
    std::size_t unsigned_count = 0;

    void add(SignatureStatus s, long delta = 1);
    std::size_t total() const { return valid + invalid + unknown_key + unsigned_count; }

    friend bool operator==(const SignatureTallies&, const SignatureTallies&) = default;
};

/// Everything the classifier knows about one subject MAC.
struct SpoofEvidence {
    codec::MacAddress subject;
    /// Datagrams originated under the subject's address.
    SignatureTallies tallies;
    bool duplicate_marker = false;
    bool visually_registered = false;
    bool key_registered = false;
    /// Unknown-key datagrams from addresses that no marker scan accounts for.
    std::size_t stray_unknown_key = 0;
};

/// Observations needed before a case other than NoFinding is reported.
inline constexpr std::size_t kCorroboratingObservations = 3;

struct Classification {
    SpoofCase spoof_case = SpoofCase::NoFinding;
    std::string action;
};

/// Decision table, first match wins:
///   duplicate marker, >= 3 invalid                 -> CopiedIdChatty
///   duplicate marker, >= 3 stray unknown-key       -> CopiedMarkerNewAddr
///   duplicate marker, >= 3 valid/unsigned          -> CopiedIdSilent
///   unique marker, key known, >= 3 invalid         -> ForgedMarkerCopiedAddr
///   scanned, no key, >= 3 unknown-key              -> ForgedBoth
///   otherwise                                      -> NoFinding
Classification classify(const SpoofEvidence& evidence);

enum class Trend { Increasing, Decreasing, Flat };

const char* to_string(Trend t);

/// Dead band of the RSSI slope, dB per sample.
inline constexpr double kTrendDeadBand = 0.5;

/// Sign of the least-squares slope of rssi against sample index.
/// Throws VerifierError ("TooFewSamples") for fewer than 3 samples.
Trend rssi_trend(std::span<const double> rssi);

} // namespace eyesec::verifier
