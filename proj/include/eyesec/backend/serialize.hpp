#pragma once

#include "json.hpp"

#include "eyesec/backend/backend.hpp"

namespace eyesec::backend {

// JSON shapes served by the API. Field names are part of the public
// interface; see docs/api.md.

nlohmann::json to_json(const NodeRecord& r);
nlohmann::json to_json(const NodeInfo& info);
nlohmann::json to_json(const TrafficEdge& e);
nlohmann::json to_json(const Warning& w);
nlohmann::json to_json(const Snapshot& s);
nlohmann::json to_json(const RssiSample& s);
nlohmann::json to_json(const SpoofReport& r);
nlohmann::json to_json(const StoredTransmission& t);

nlohmann::json edges_to_json(const std::vector<TrafficEdge>& edges);

} // namespace eyesec::backend
