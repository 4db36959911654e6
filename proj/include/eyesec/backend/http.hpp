#pragma once

#include <memory>
#include <string>

#include "eyesec/backend/api.hpp"

namespace httplib {
class Server;
}

namespace eyesec::backend {

/// Serves an Api over HTTP/1.1 with a thread pool.
class HttpServer {
public:
    explicit HttpServer(Api& api);
    ~HttpServer();

    /// Binds; port 0 picks a free port. Returns the bound port. Throws
    /// std::runtime_error when the address cannot be bound.
    int bind(const std::string& host, int port);
    /// Blocks until stop() is called.
    void listen();
    void stop();
    bool running() const;

private:
    Api& api_;
    std::unique_ptr<httplib::Server> server_;
};

/// Transport speaking to a remote HttpServer, e.g. "http://127.0.0.1:8080".
class HttpTransport : public Transport {
public:
    explicit HttpTransport(std::string base_url, int timeout_ms = 5000);
    Response send(const Request& request) override;

private:
    std::string base_url_;
    int timeout_ms_;
};

} // namespace eyesec::backend
