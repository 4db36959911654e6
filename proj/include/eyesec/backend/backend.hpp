#pragma once

#include <map>
#include <shared_mutex>
#include <span>

#include "eyesec/backend/store.hpp"
#include "eyesec/verifier/verifier.hpp"

namespace eyesec::backend {

struct BackendConfig {
    /// Duplicate window for witnesses sharing a digest.
    Micros epsilon{5000};
};

struct ScanResult {
    NodeRecord record;
    /// Set when this scan revealed a second placement for the MAC.
    std::optional<Warning> warning;
};

struct NodeUpdate {
    std::optional<std::string> name;
    std::optional<std::string> location;
};

struct Window {
    Micros t0{0};
    Micros t1{0};
};

/// The information store. All public members are safe to call concurrently;
/// writers are serialized and every query sees a consistent snapshot.
class Backend {
public:
    explicit Backend(BackendConfig config = {});

    Micros epsilon() const { return store_.epsilon(); }

    /// Verifies, admits and classifies one batch atomically.
    std::vector<sniffer::Admission> ingest(std::span<const sniffer::PacketReport> batch);
    sniffer::Admission ingest(const sniffer::PacketReport& report);

    /// A marker yielding `mac` was scanned at `placement`.
    ScanResult register_marker_scan(const codec::MacAddress& mac, const std::string& placement, Micros ts);
    /// Throws UnknownNode, or Locked while a duplicate-marker warning is open.
    NodeRecord update_node(const codec::MacAddress& mac, const NodeUpdate& update);
    /// Operator confirms which placement is genuine; unlocks the record.
    NodeRecord resolve_duplicate(const codec::MacAddress& mac, const std::string& placement);

    /// Throws Conflict when a different key exists and `replace` is false.
    /// Stored traffic from `mac` is re-verified against the new key.
    void register_key(const codec::MacAddress& mac, const crypto::Ed25519PublicKey& key, bool replace = false);

    std::vector<NodeRecord> nodes() const;
    /// Stats over the whole history, or `window` when given.
    NodeInfo node_info(const codec::MacAddress& mac, std::optional<Window> window = {}) const;
    std::vector<TrafficEdge> edges(View view, Micros t0, Micros t1) const;
    /// Warnings with ts in [t0, t1), in emission order.
    std::vector<Warning> warnings(std::optional<Window> window = {}) const;
    /// Consecutive windows of width `step` starting at the earliest stored
    /// transmission (or window->t0) and covering the latest (or window->t1).
    std::vector<Snapshot> timeline(Micros step, std::optional<Window> window = {}) const;
    /// Witness samples of traffic originated by `mac` that passed
    /// verification (valid or unsigned), ordered by ts.
    std::vector<RssiSample> rssi(const codec::MacAddress& mac, const std::optional<std::string>& sniffer_id = {}) const;
    SpoofReport spoof_report(const codec::MacAddress& mac) const;
    /// Current classification of every MAC with a non-NO_FINDING outcome.
    std::map<codec::MacAddress, verifier::SpoofCase> findings() const;

    std::size_t transmission_count() const;
    std::size_t witness_count() const;
    std::vector<StoredTransmission> canonical_state() const;

private:
    sniffer::Admission admit_locked(const sniffer::PacketReport& report);
    void sighting_locked(const codec::MacAddress& mac, Micros ts);
    void tally_locked(const StoredTransmission& t, long delta);
    void signature_warning_locked(const StoredTransmission& t);
    verifier::SpoofEvidence evidence_locked(const codec::MacAddress& mac) const;
    void reclassify_locked(Micros ts);
    Warning& warn_locked(WarningKind kind, std::string subject, Micros ts, std::string details);
    Micros clock_locked() const;

    mutable std::shared_mutex mutex_;
    TransmissionStore store_;
    verifier::KeyRegistry keys_;
    std::map<codec::MacAddress, NodeRecord> nodes_;
    std::map<codec::MacAddress, verifier::SignatureTallies> tallies_;
    std::vector<Warning> warnings_;
    std::map<codec::MacAddress, verifier::SpoofCase> findings_;
};

} // namespace eyesec::backend
