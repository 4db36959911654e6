#include "eyesec/backend/store.hpp"

#include <algorithm>
#include <map>

namespace eyesec::backend {

namespace {

bool within(Micros a, Micros b, Micros epsilon)
{
    auto d = a - b;
    if (d < Micros::zero()) d = -d;
    return d < epsilon;
}

void add_witness(StoredTransmission& t, const sniffer::PacketReport& r)
{
    Witness w{r.hop.ts, r.sniffer_id, r.hop.rssi};
    bool repeat = std::any_of(t.witnesses.begin(), t.witnesses.end(),
                              [&](const Witness& x) { return x.sniffer_id == w.sniffer_id && x.ts == w.ts; });
    if (repeat) return;
    t.witnesses.insert(std::upper_bound(t.witnesses.begin(), t.witnesses.end(), w), w);
}

// The hop's ts/rssi always describe the earliest witness.
void normalize(StoredTransmission& t)
{
    const auto& first = t.witnesses.front();
    t.ts = first.ts;
    t.hop.ts = first.ts;
    t.hop.rssi = first.rssi;
}

} // namespace

const char* to_string(BackendErrc code)
{
    switch (code) {
    case BackendErrc::BadWindow: return "BadWindow";
    case BackendErrc::UnknownNode: return "UnknownNode";
    case BackendErrc::Locked: return "Locked";
    case BackendErrc::BadRequest: return "BadRequest";
    case BackendErrc::Conflict: return "Conflict";
    }
    return "?";
}

const char* to_string(View v) { return v == View::Ip ? "ip" : "mac"; }

View parse_view(const std::string& text)
{
    if (text == "ip") return View::Ip;
    if (text == "mac") return View::Mac;
    throw BackendError(BackendErrc::BadRequest, "view must be ip or mac");
}

const char* to_string(WarningKind k)
{
    switch (k) {
    case WarningKind::DuplicateMarker: return "duplicate_marker";
    case WarningKind::FailedSignature: return "failed_signature";
    case WarningKind::UnknownKey: return "unknown_key";
    case WarningKind::SpoofClassified: return "spoof_classified";
    }
    return "?";
}

TransmissionStore::AdmitResult TransmissionStore::admit(const sniffer::PacketReport& report,
                                                        sniffer::SignatureStatus status)
{
    auto& bucket = by_digest_[report.hop.digest];
    std::vector<std::uint64_t> matches;
    for (auto id : bucket) {
        const auto& t = by_id_.at(id);
        if (std::any_of(t.witnesses.begin(), t.witnesses.end(),
                        [&](const Witness& w) { return within(w.ts, report.hop.ts, epsilon_); })) {
            matches.push_back(id);
        }
    }

    AdmitResult result;
    if (matches.empty()) {
        StoredTransmission t;
        t.id = next_id_++;
        t.digest = report.hop.digest;
        t.hop = report.hop;
        t.hop.signature_status = status;
        add_witness(t, report);
        normalize(t);
        bucket.push_back(t.id);
        result.id = t.id;
        by_id_.emplace(t.id, std::move(t));
        return result;
    }

    result.admission = sniffer::Admission::Duplicate;
    result.id = matches.front();
    auto& keep = by_id_.at(result.id);
    for (auto it = matches.begin() + 1; it != matches.end(); ++it) {
        auto& gone = by_id_.at(*it);
        for (const auto& w : gone.witnesses) {
            keep.witnesses.insert(std::upper_bound(keep.witnesses.begin(), keep.witnesses.end(), w), w);
        }
        result.merged.push_back(std::move(gone));
        by_id_.erase(*it);
        bucket.erase(std::find(bucket.begin(), bucket.end(), *it));
    }
    add_witness(keep, report);
    normalize(keep);
    return result;
}

const StoredTransmission* TransmissionStore::find(std::uint64_t id) const
{
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &it->second;
}

StoredTransmission* TransmissionStore::find(std::uint64_t id)
{
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &it->second;
}

std::size_t TransmissionStore::witness_count() const
{
    std::size_t n = 0;
    for (const auto& [id, t] : by_id_) n += t.witnesses.size();
    return n;
}

std::vector<StoredTransmission> TransmissionStore::canonical() const
{
    std::vector<StoredTransmission> out;
    out.reserve(by_id_.size());
    for (const auto& [id, t] : by_id_) out.push_back(t);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.ts, a.digest) < std::tie(b.ts, b.digest);
    });
    for (auto& t : out) t.id = 0;
    return out;
}

std::optional<Micros> TransmissionStore::earliest() const
{
    std::optional<Micros> out;
    for (const auto& [id, t] : by_id_) out = out ? std::min(*out, t.ts) : t.ts;
    return out;
}

std::optional<Micros> TransmissionStore::latest() const
{
    std::optional<Micros> out;
    for (const auto& [id, t] : by_id_) out = out ? std::max(*out, t.ts) : t.ts;
    return out;
}

std::vector<TrafficEdge> compute_edges(const TransmissionStore& store, View view, Micros t0, Micros t1)
{
    if (t0 > t1) throw BackendError(BackendErrc::BadWindow, "window start after end");
    std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
    store.for_each([&](const StoredTransmission& t) {
        if (t.ts < t0 || t.ts >= t1) return;
        if (view == View::Mac) {
            ++counts[{t.hop.src_mac.to_string(), t.hop.dst_mac.to_string()}];
        } else if (t.hop.is_first_hop()) {
            ++counts[{t.hop.src_ip.to_string(), t.hop.dst_ip.to_string()}];
        }
    });
    std::vector<TrafficEdge> out;
    out.reserve(counts.size());
    for (auto& [key, count] : counts) out.push_back({view, key.first, key.second, count, t0, t1});
    return out;
}

} // namespace eyesec::backend
