#pragma once

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "eyesec/crypto/crypto.hpp"

namespace eyesec::backend {

enum class Role { Operator, Sniffer, Trainee };

const char* to_string(Role r);
/// Throws std::invalid_argument.
Role parse_role(const std::string& text);

/// Per-user credentials; secrets are kept as salted SHA-256. Thread-safe.
class CredentialStore {
public:
    /// Adds or replaces `username`.
    void add(const std::string& username, const std::string& secret, Role role);
    /// Returns false if the user did not exist.
    bool revoke(const std::string& username);
    std::optional<Role> authenticate(const std::string& username, const std::string& secret) const;
    std::vector<std::pair<std::string, Role>> users() const;

private:
    struct Entry {
        std::array<std::uint8_t, 16> salt{};
        crypto::Sha256Digest hash{};
        Role role = Role::Trainee;
    };
    mutable std::shared_mutex mutex_;
    std::map<std::string, Entry> entries_;
};

/// Decodes "Basic base64(user:secret)". Returns nullopt when malformed.
std::optional<std::pair<std::string, std::string>> parse_basic_auth(const std::string& header);
std::string make_basic_auth(const std::string& username, const std::string& secret);

enum class Endpoint {
    Packets,
    Nodes,
    Node,
    NodeResolve,
    Edges,
    Warnings,
    Timeline,
    Rssi,
    Keys,
    Spoof,
    SpoofNode,
    Status,
    Credentials,
    Credential,
};

enum class Method { Get, Post, Patch, Delete };

const char* to_string(Endpoint e);
const char* to_string(Method m);
std::optional<Method> parse_method(const std::string& text);

inline constexpr Endpoint kAllEndpoints[] = {
    Endpoint::Packets, Endpoint::Nodes,   Endpoint::Node,     Endpoint::NodeResolve, Endpoint::Edges,
    Endpoint::Warnings, Endpoint::Timeline, Endpoint::Rssi,   Endpoint::Keys,        Endpoint::Spoof,
    Endpoint::SpoofNode, Endpoint::Status, Endpoint::Credentials, Endpoint::Credential,
};
inline constexpr Method kAllMethods[] = {Method::Get, Method::Post, Method::Patch, Method::Delete};
inline constexpr Role kAllRoles[] = {Role::Operator, Role::Sniffer, Role::Trainee};

/// Whether the endpoint implements the method at all.
bool supports(Endpoint e, Method m);
/// The access matrix. Defined for every triple; false whenever
/// supports(e, m) is false.
bool allowed(Endpoint e, Method m, Role r);

} // namespace eyesec::backend
