#pragma once

#include <functional>
#include <map>
#include <string>

#include "json.hpp"

#include "eyesec/backend/auth.hpp"
#include "eyesec/backend/backend.hpp"
#include "eyesec/sniffer/uploader.hpp"

namespace eyesec::backend {

struct Request {
    std::string method;
    /// Path without query string, e.g. "/api/nodes/00:12:4b:00:00:00:00:01".
    std::string path;
    std::map<std::string, std::string> query;
    /// Value of the Authorization header.
    std::string authorization;
    std::string body;
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

/// The REST surface of a Backend, independent of any socket transport.
/// Every request is authenticated and checked against the access matrix
/// before it can touch the backend.
class Api {
public:
    using Clock = std::function<Micros()>;

    /// `clock` stamps marker scans that carry no ts; defaults to wall time.
    Api(Backend& backend, CredentialStore& credentials, Clock clock = {});

    Response handle(const Request& request);

private:
    Response dispatch(Endpoint e, Method m, const std::string& arg, const Request& r);

    Backend& backend_;
    CredentialStore& credentials_;
    Clock clock_;
};

/// Anything that can carry a Request to an Api: in-process or over HTTP.
class Transport {
public:
    virtual ~Transport() = default;
    /// Throws sniffer::UploadError(Unreachable) when the backend cannot be reached.
    virtual Response send(const Request& request) = 0;
};

class LocalTransport : public Transport {
public:
    explicit LocalTransport(Api& api) : api_(api) {}
    Response send(const Request& request) override { return api_.handle(request); }

private:
    Api& api_;
};

/// Authenticated JSON client over any transport.
class ApiClient {
public:
    ApiClient(Transport& transport, std::string username, std::string secret);

    /// Throws ApiError for any non-2xx response.
    nlohmann::json get(const std::string& path, std::map<std::string, std::string> query = {});
    nlohmann::json post(const std::string& path, const nlohmann::json& body);
    nlohmann::json patch(const std::string& path, const nlohmann::json& body);
    nlohmann::json del(const std::string& path);
    Response call(const std::string& method, const std::string& path, std::map<std::string, std::string> query,
                  const std::string& body);

private:
    nlohmann::json checked(Response r);

    Transport& transport_;
    std::string authorization_;
};

class ApiError : public std::runtime_error {
public:
    ApiError(int status, std::string error, const std::string& detail)
        : std::runtime_error(error + ": " + detail), status_(status), error_(std::move(error)) {}
    int status() const noexcept { return status_; }
    const std::string& error() const noexcept { return error_; }

private:
    int status_;
    std::string error_;
};

/// Sniffer upload path: POST /api/packets through an ApiClient.
class ApiBackendClient : public sniffer::BackendClient {
public:
    ApiBackendClient(Transport& transport, std::string username, std::string secret);
    std::vector<sniffer::Admission> post_packets(const std::vector<sniffer::PacketReport>& batch) override;

private:
    ApiClient client_;
};

} // namespace eyesec::backend
