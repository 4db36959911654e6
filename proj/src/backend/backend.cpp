#include "eyesec/backend/backend.hpp"

#include <algorithm>
#include <mutex>
#include <set>

namespace eyesec::backend {

using codec::MacAddress;
using sniffer::Admission;
using sniffer::SignatureStatus;

namespace {

std::optional<MacAddress> origin_mac(const sniffer::HopRecord& hop)
{
    try {
        return codec::ipv6_to_mac(hop.src_ip);
    } catch (const codec::CodecError&) {
        return std::nullopt;
    }
}

bool in_window(Micros ts, const std::optional<Window>& w) { return !w || (ts >= w->t0 && ts < w->t1); }

void check_window(const std::optional<Window>& w)
{
    if (w && w->t0 > w->t1) throw BackendError(BackendErrc::BadWindow, "window start after end");
}

} // namespace

Backend::Backend(BackendConfig config) : store_(config.epsilon)
{
    if (config.epsilon <= Micros::zero()) throw BackendError(BackendErrc::BadRequest, "epsilon must be positive");
}

std::vector<Admission> Backend::ingest(std::span<const sniffer::PacketReport> batch)
{
    std::unique_lock lock(mutex_);
    std::vector<Admission> out;
    out.reserve(batch.size());
    Micros latest{0};
    for (const auto& r : batch) {
        out.push_back(admit_locked(r));
        latest = std::max(latest, r.hop.ts);
    }
    if (!batch.empty()) reclassify_locked(latest);
    return out;
}

Admission Backend::ingest(const sniffer::PacketReport& report) { return ingest(std::span(&report, 1)).front(); }

Admission Backend::admit_locked(const sniffer::PacketReport& report)
{
    auto status = verifier::verify_message(report.hop, keys_);
    auto result = store_.admit(report, status);
    for (const auto& gone : result.merged) tally_locked(gone, -1);

    const auto& t = *store_.find(result.id);
    if (result.admission == Admission::Admitted) {
        tally_locked(t, +1);
        signature_warning_locked(t);
    }
    sighting_locked(t.hop.src_mac, t.ts);
    sighting_locked(t.hop.dst_mac, t.ts);
    return result.admission;
}

void Backend::sighting_locked(const MacAddress& mac, Micros ts)
{
    auto [it, fresh] = nodes_.try_emplace(mac);
    auto& rec = it->second;
    if (fresh) rec.mac = mac;
    if (!rec.first_seen_digital || ts < *rec.first_seen_digital) rec.first_seen_digital = ts;
}

void Backend::tally_locked(const StoredTransmission& t, long delta)
{
    if (!t.hop.is_first_hop()) return;
    tallies_[t.hop.src_mac].add(t.hop.signature_status, delta);
}

void Backend::signature_warning_locked(const StoredTransmission& t)
{
    if (!t.hop.is_first_hop()) return;
    auto subject = t.hop.src_mac.to_string();
    auto seq = t.hop.seq_payload ? " seq " + std::to_string(*t.hop.seq_payload) : std::string();
    if (t.hop.signature_status == SignatureStatus::Invalid) {
        warn_locked(WarningKind::FailedSignature, subject, t.ts,
                    "signature does not verify against the key registered for " + subject + seq);
    } else if (t.hop.signature_status == SignatureStatus::UnknownKey) {
        warn_locked(WarningKind::UnknownKey, subject, t.ts, "no public key is registered for " + subject + seq);
    }
}

Warning& Backend::warn_locked(WarningKind kind, std::string subject, Micros ts, std::string details)
{
    Warning w;
    w.id = warnings_.size() + 1;
    w.kind = kind;
    w.subject = std::move(subject);
    w.ts = ts;
    w.details = std::move(details);
    warnings_.push_back(std::move(w));
    return warnings_.back();
}

Micros Backend::clock_locked() const
{
    Micros t = store_.latest().value_or(Micros::zero());
    if (!warnings_.empty()) t = std::max(t, warnings_.back().ts);
    return t;
}

ScanResult Backend::register_marker_scan(const MacAddress& mac, const std::string& placement, Micros ts)
{
    if (placement.empty()) throw BackendError(BackendErrc::BadRequest, "placement must not be empty");
    std::unique_lock lock(mutex_);
    auto [it, fresh] = nodes_.try_emplace(mac);
    auto& rec = it->second;
    if (fresh) rec.mac = mac;
    if (!rec.first_seen_visual || ts < *rec.first_seen_visual) rec.first_seen_visual = ts;

    ScanResult out;
    if (std::find(rec.placements.begin(), rec.placements.end(), placement) == rec.placements.end()) {
        rec.placements.push_back(placement);
        if (rec.placements.size() > 1) {
            rec.locked = true;
            std::string where;
            for (const auto& p : rec.placements) where += (where.empty() ? "" : ", ") + p;
            out.warning = warn_locked(WarningKind::DuplicateMarker, mac.to_string(), ts,
                                      "marker for " + mac.to_string() + " scanned at " + where);
        }
    }
    reclassify_locked(std::max(ts, clock_locked()));
    out.record = nodes_.at(mac);
    if (const auto* key = keys_.find(mac)) out.record.public_key = *key;
    return out;
}

NodeRecord Backend::update_node(const MacAddress& mac, const NodeUpdate& update)
{
    std::unique_lock lock(mutex_);
    auto it = nodes_.find(mac);
    if (it == nodes_.end()) throw BackendError(BackendErrc::UnknownNode, "unknown node " + mac.to_string());
    if (it->second.locked) {
        throw BackendError(BackendErrc::Locked, "node " + mac.to_string() + " is locked by a duplicate-marker warning");
    }
    if (update.name) it->second.name = *update.name;
    if (update.location) it->second.location = *update.location;
    auto out = it->second;
    if (const auto* key = keys_.find(mac)) out.public_key = *key;
    return out;
}

NodeRecord Backend::resolve_duplicate(const MacAddress& mac, const std::string& placement)
{
    std::unique_lock lock(mutex_);
    auto it = nodes_.find(mac);
    if (it == nodes_.end()) throw BackendError(BackendErrc::UnknownNode, "unknown node " + mac.to_string());
    auto& rec = it->second;
    if (std::find(rec.placements.begin(), rec.placements.end(), placement) == rec.placements.end()) {
        throw BackendError(BackendErrc::BadRequest, "placement " + placement + " was never scanned for " + mac.to_string());
    }
    rec.placements = {placement};
    rec.locked = false;
    reclassify_locked(clock_locked());
    auto out = rec;
    if (const auto* key = keys_.find(mac)) out.public_key = *key;
    return out;
}

void Backend::register_key(const MacAddress& mac, const crypto::Ed25519PublicKey& key, bool replace)
{
    std::unique_lock lock(mutex_);
    try {
        keys_.set(mac, key, replace);
    } catch (const verifier::VerifierError& e) {
        throw BackendError(BackendErrc::Conflict, e.what());
    }

    std::vector<std::uint64_t> affected;
    store_.for_each([&](const StoredTransmission& t) {
        if (origin_mac(t.hop) == mac) affected.push_back(t.id);
    });
    for (auto id : affected) {
        auto& t = *store_.find(id);
        auto status = verifier::verify_message(t.hop, keys_);
        if (status == t.hop.signature_status) continue;
        tally_locked(t, -1);
        t.hop.signature_status = status;
        tally_locked(t, +1);
        if (status == SignatureStatus::Invalid) signature_warning_locked(t);
    }
    reclassify_locked(clock_locked());
}

verifier::SpoofEvidence Backend::evidence_locked(const MacAddress& mac) const
{
    verifier::SpoofEvidence e;
    e.subject = mac;
    if (auto it = tallies_.find(mac); it != tallies_.end()) e.tallies = it->second;
    if (auto it = nodes_.find(mac); it != nodes_.end()) {
        e.visually_registered = !it->second.placements.empty();
        e.duplicate_marker = it->second.placements.size() > 1;
    }
    e.key_registered = keys_.contains(mac);
    for (const auto& [other, t] : tallies_) {
        auto n = nodes_.find(other);
        bool scanned = n != nodes_.end() && !n->second.placements.empty();
        if (!scanned) e.stray_unknown_key += t.unknown_key;
    }
    return e;
}

void Backend::reclassify_locked(Micros ts)
{
    std::set<MacAddress> subjects;
    for (const auto& [mac, rec] : nodes_) subjects.insert(mac);
    for (const auto& [mac, t] : tallies_) subjects.insert(mac);

    for (const auto& mac : subjects) {
        auto c = verifier::classify(evidence_locked(mac));
        auto prev = findings_.find(mac);
        auto before = prev == findings_.end() ? verifier::SpoofCase::NoFinding : prev->second;
        if (c.spoof_case == before) continue;
        if (c.spoof_case == verifier::SpoofCase::NoFinding) {
            findings_.erase(mac);
            continue;
        }
        findings_[mac] = c.spoof_case;
        auto& w = warn_locked(WarningKind::SpoofClassified, mac.to_string(), ts,
                              std::string(verifier::to_string(c.spoof_case)) + ": " + c.action);
        w.spoof_case = c.spoof_case;
    }
}

std::vector<NodeRecord> Backend::nodes() const
{
    std::shared_lock lock(mutex_);
    std::vector<NodeRecord> out;
    out.reserve(nodes_.size());
    for (const auto& [mac, rec] : nodes_) {
        out.push_back(rec);
        if (const auto* key = keys_.find(mac)) out.back().public_key = *key;
    }
    return out;
}

NodeInfo Backend::node_info(const MacAddress& mac, std::optional<Window> window) const
{
    check_window(window);
    std::shared_lock lock(mutex_);
    auto it = nodes_.find(mac);
    if (it == nodes_.end()) throw BackendError(BackendErrc::UnknownNode, "unknown node " + mac.to_string());
    NodeInfo info;
    info.record = it->second;
    if (const auto* key = keys_.find(mac)) info.record.public_key = *key;
    std::set<MacAddress> neighbors;
    store_.for_each([&](const StoredTransmission& t) {
        if (!in_window(t.ts, window)) return;
        if (t.hop.src_mac == mac) {
            ++info.stats.sent;
            neighbors.insert(t.hop.dst_mac);
        }
        if (t.hop.dst_mac == mac) {
            ++info.stats.received;
            neighbors.insert(t.hop.src_mac);
        }
    });
    info.stats.neighbors.assign(neighbors.begin(), neighbors.end());
    return info;
}

std::vector<TrafficEdge> Backend::edges(View view, Micros t0, Micros t1) const
{
    std::shared_lock lock(mutex_);
    return compute_edges(store_, view, t0, t1);
}

std::vector<Warning> Backend::warnings(std::optional<Window> window) const
{
    check_window(window);
    std::shared_lock lock(mutex_);
    std::vector<Warning> out;
    for (const auto& w : warnings_) {
        if (in_window(w.ts, window)) out.push_back(w);
    }
    return out;
}

std::vector<Snapshot> Backend::timeline(Micros step, std::optional<Window> window) const
{
    if (step <= Micros::zero()) throw BackendError(BackendErrc::BadRequest, "step must be positive");
    check_window(window);
    std::shared_lock lock(mutex_);
    std::vector<Snapshot> out;
    Micros start, end;
    if (window) {
        start = window->t0;
        end = window->t1;
        if (start == end) return out;
    } else {
        auto lo = store_.earliest();
        if (!lo) return out;
        start = *lo;
        end = *store_.latest() + Micros(1);
    }
    for (Micros t0 = start; t0 < end; t0 += step) {
        Snapshot s;
        s.t0 = t0;
        s.t1 = t0 + step;
        s.ip = compute_edges(store_, View::Ip, s.t0, s.t1);
        s.mac = compute_edges(store_, View::Mac, s.t0, s.t1);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<RssiSample> Backend::rssi(const MacAddress& mac, const std::optional<std::string>& sniffer_id) const
{
    std::shared_lock lock(mutex_);
    std::vector<RssiSample> out;
    store_.for_each([&](const StoredTransmission& t) {
        if (t.hop.src_mac != mac || !t.hop.is_first_hop()) return;
        auto s = t.hop.signature_status;
        if (s == SignatureStatus::Invalid || s == SignatureStatus::UnknownKey) return;
        for (const auto& w : t.witnesses) {
            if (!sniffer_id || w.sniffer_id == *sniffer_id) out.push_back({w.ts, w.rssi, w.sniffer_id});
        }
    });
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.ts, a.sniffer_id) < std::tie(b.ts, b.sniffer_id);
    });
    return out;
}

SpoofReport Backend::spoof_report(const MacAddress& mac) const
{
    auto samples = rssi(mac);
    std::shared_lock lock(mutex_);
    SpoofReport r;
    r.mac = mac;
    r.evidence = evidence_locked(mac);
    r.classification = verifier::classify(r.evidence);
    std::map<std::string, std::vector<double>> per_sniffer;
    for (const auto& s : samples) per_sniffer[s.sniffer_id].push_back(s.rssi);
    for (const auto& [id, values] : per_sniffer) {
        if (values.size() >= 3) r.rssi_trends.emplace_back(id, verifier::rssi_trend(values));
    }
    return r;
}

std::map<MacAddress, verifier::SpoofCase> Backend::findings() const
{
    std::shared_lock lock(mutex_);
    return findings_;
}

std::size_t Backend::transmission_count() const
{
    std::shared_lock lock(mutex_);
    return store_.size();
}

std::size_t Backend::witness_count() const
{
    std::shared_lock lock(mutex_);
    return store_.witness_count();
}

std::vector<StoredTransmission> Backend::canonical_state() const
{
    std::shared_lock lock(mutex_);
    return store_.canonical();
}

} // namespace eyesec::backend
