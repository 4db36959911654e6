#include "eyesec/backend/serialize.hpp"

#include "eyesec/sniffer/wire.hpp"

namespace eyesec::backend {

using nlohmann::json;

namespace {

json opt_ts(const std::optional<Micros>& t) { return t ? json(t->count()) : json(nullptr); }

} // namespace

json to_json(const NodeRecord& r)
{
    return {
        {"mac", r.mac.to_string()},
        {"name", r.name},
        {"location", r.location},
        {"public_key", r.public_key ? json(to_hex(*r.public_key)) : json(nullptr)},
        {"first_seen_visual", opt_ts(r.first_seen_visual)},
        {"first_seen_digital", opt_ts(r.first_seen_digital)},
        {"placements", r.placements},
        {"locked", r.locked},
    };
}

json to_json(const NodeInfo& info)
{
    json neighbors = json::array();
    for (const auto& n : info.stats.neighbors) neighbors.push_back(n.to_string());
    return {
        {"node", to_json(info.record)},
        {"stats", {{"sent", info.stats.sent}, {"received", info.stats.received}, {"neighbors", neighbors}}},
    };
}

json to_json(const TrafficEdge& e)
{
    return {{"view", to_string(e.view)}, {"src", e.src},           {"dst", e.dst},
            {"count", e.count},          {"t0", e.t0.count()},     {"t1", e.t1.count()}};
}

json edges_to_json(const std::vector<TrafficEdge>& edges)
{
    json out = json::array();
    for (const auto& e : edges) out.push_back(to_json(e));
    return out;
}

json to_json(const Warning& w)
{
    return {
        {"id", w.id},
        {"kind", to_string(w.kind)},
        {"subject", w.subject},
        {"ts", w.ts.count()},
        {"details", w.details},
        {"spoof_case", w.spoof_case ? json(verifier::to_string(*w.spoof_case)) : json(nullptr)},
    };
}

json to_json(const Snapshot& s)
{
    return {{"t0", s.t0.count()}, {"t1", s.t1.count()}, {"ip", edges_to_json(s.ip)}, {"mac", edges_to_json(s.mac)}};
}

json to_json(const RssiSample& s) { return {{"ts", s.ts.count()}, {"rssi", s.rssi}, {"sniffer_id", s.sniffer_id}}; }

json to_json(const SpoofReport& r)
{
    const auto& e = r.evidence;
    json trends = json::object();
    for (const auto& [id, t] : r.rssi_trends) trends[id] = verifier::to_string(t);
    return {
        {"mac", r.mac.to_string()},
        {"spoof_case", verifier::to_string(r.classification.spoof_case)},
        {"action", r.classification.action},
        {"evidence",
         {
             {"valid", e.tallies.valid},
             {"invalid", e.tallies.invalid},
             {"unknown_key", e.tallies.unknown_key},
             {"unsigned", e.tallies.unsigned_count},
             {"duplicate_marker", e.duplicate_marker},
             {"visually_registered", e.visually_registered},
             {"key_registered", e.key_registered},
             {"stray_unknown_key", e.stray_unknown_key},
         }},
        {"rssi_trends", trends},
    };
}

json to_json(const StoredTransmission& t)
{
    json witnesses = json::array();
    for (const auto& w : t.witnesses) {
        witnesses.push_back({{"sniffer_id", w.sniffer_id}, {"ts", w.ts.count()}, {"rssi", w.rssi}});
    }
    auto hop = sniffer::to_json(sniffer::PacketReport{"", t.hop});
    hop.erase("sniffer_id");
    return {{"digest", sniffer::digest_hex(t.digest)}, {"ts", t.ts.count()}, {"hop", hop}, {"witnesses", witnesses}};
}

} // namespace eyesec::backend
