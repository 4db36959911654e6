#include "eyesec/backend/auth.hpp"

#include <mutex>
#include <stdexcept>

namespace eyesec::backend {

namespace {

crypto::Sha256Digest salted(const std::array<std::uint8_t, 16>& salt, const std::string& secret)
{
    Bytes buf(salt.begin(), salt.end());
    buf.insert(buf.end(), secret.begin(), secret.end());
    return crypto::sha256(buf);
}

bool same(const crypto::Sha256Digest& a, const crypto::Sha256Digest& b)
{
    std::uint8_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff |= a[i] ^ b[i];
    return diff == 0;
}

} // namespace

const char* to_string(Role r)
{
    switch (r) {
    case Role::Operator: return "operator";
    case Role::Sniffer: return "sniffer";
    case Role::Trainee: return "trainee";
    }
    return "?";
}

Role parse_role(const std::string& text)
{
    for (auto r : kAllRoles) {
        if (text == to_string(r)) return r;
    }
    throw std::invalid_argument("unknown role: " + text);
}

void CredentialStore::add(const std::string& username, const std::string& secret, Role role)
{
    if (username.empty() || username.find(':') != std::string::npos) {
        throw std::invalid_argument("username must be nonempty and free of ':'");
    }
    Entry e;
    crypto::random_bytes(e.salt);
    e.hash = salted(e.salt, secret);
    e.role = role;
    std::unique_lock lock(mutex_);
    entries_[username] = e;
}

bool CredentialStore::revoke(const std::string& username)
{
    std::unique_lock lock(mutex_);
    return entries_.erase(username) > 0;
}

std::optional<Role> CredentialStore::authenticate(const std::string& username, const std::string& secret) const
{
    std::shared_lock lock(mutex_);
    auto it = entries_.find(username);
    if (it == entries_.end()) return std::nullopt;
    if (!same(salted(it->second.salt, secret), it->second.hash)) return std::nullopt;
    return it->second.role;
}

std::vector<std::pair<std::string, Role>> CredentialStore::users() const
{
    std::shared_lock lock(mutex_);
    std::vector<std::pair<std::string, Role>> out;
    for (const auto& [name, e] : entries_) out.emplace_back(name, e.role);
    return out;
}

std::optional<std::pair<std::string, std::string>> parse_basic_auth(const std::string& header)
{
    constexpr std::string_view prefix = "Basic ";
    if (header.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
    Bytes raw;
    try {
        raw = crypto::base64_decode(std::string_view(header).substr(prefix.size()));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    std::string text(raw.begin(), raw.end());
    auto colon = text.find(':');
    if (colon == std::string::npos) return std::nullopt;
    return std::pair{text.substr(0, colon), text.substr(colon + 1)};
}

std::string make_basic_auth(const std::string& username, const std::string& secret)
{
    return "Basic " + crypto::base64_encode(as_bytes(username + ":" + secret));
}

const char* to_string(Endpoint e)
{
    switch (e) {
    case Endpoint::Packets: return "/api/packets";
    case Endpoint::Nodes: return "/api/nodes";
    case Endpoint::Node: return "/api/nodes/{mac}";
    case Endpoint::NodeResolve: return "/api/nodes/{mac}/resolve";
    case Endpoint::Edges: return "/api/edges";
    case Endpoint::Warnings: return "/api/warnings";
    case Endpoint::Timeline: return "/api/timeline";
    case Endpoint::Rssi: return "/api/rssi";
    case Endpoint::Keys: return "/api/keys";
    case Endpoint::Spoof: return "/api/spoof";
    case Endpoint::SpoofNode: return "/api/spoof/{mac}";
    case Endpoint::Status: return "/api/status";
    case Endpoint::Credentials: return "/api/credentials";
    case Endpoint::Credential: return "/api/credentials/{user}";
    }
    return "?";
}

const char* to_string(Method m)
{
    switch (m) {
    case Method::Get: return "GET";
    case Method::Post: return "POST";
    case Method::Patch: return "PATCH";
    case Method::Delete: return "DELETE";
    }
    return "?";
}

std::optional<Method> parse_method(const std::string& text)
{
    for (auto m : kAllMethods) {
        if (text == to_string(m)) return m;
    }
    return std::nullopt;
}

bool supports(Endpoint e, Method m)
{
    switch (e) {
    case Endpoint::Packets:
    case Endpoint::Keys:
    case Endpoint::NodeResolve: return m == Method::Post;
    case Endpoint::Nodes:
    case Endpoint::Credentials: return m == Method::Get || m == Method::Post;
    case Endpoint::Node: return m == Method::Get || m == Method::Patch;
    case Endpoint::Credential: return m == Method::Delete;
    case Endpoint::Edges:
    case Endpoint::Warnings:
    case Endpoint::Timeline:
    case Endpoint::Rssi:
    case Endpoint::Spoof:
    case Endpoint::SpoofNode:
    case Endpoint::Status: return m == Method::Get;
    }
    return false;
}

bool allowed(Endpoint e, Method m, Role r)
{
    if (!supports(e, m)) return false;
    switch (r) {
    case Role::Operator: return true;
    case Role::Sniffer: return e == Endpoint::Packets || e == Endpoint::Status;
    case Role::Trainee: return m == Method::Get && e != Endpoint::Credentials;
    }
    return false;
}

} // namespace eyesec::backend
