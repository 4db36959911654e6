#pragma once

#include <vector>

#include "json.hpp"

#include "eyesec/sniffer/records.hpp"

namespace eyesec::sniffer {

// JSON encoding of POST /api/packets bodies. Timestamps are integer
// microseconds, MACs canonical hex text, digests 32 lowercase hex chars.
nlohmann::json to_json(const PacketReport& report);
/// Throws std::invalid_argument (or nlohmann::json::exception) on bad input.
PacketReport report_from_json(const nlohmann::json& j);

nlohmann::json batch_to_json(const std::vector<PacketReport>& batch);
std::vector<PacketReport> batch_from_json(const nlohmann::json& j);

std::string digest_hex(const Digest& d);
Digest parse_digest(const std::string& hex);

} // namespace eyesec::sniffer
