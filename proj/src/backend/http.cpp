#include "eyesec/backend/http.hpp"

#include "httplib.h"

namespace eyesec::backend {

namespace {

Response from_reply(int status, const std::string& body)
{
    Response r;
    r.status = status;
    if (!body.empty()) {
        r.body = nlohmann::json::parse(body, nullptr, false);
        if (r.body.is_discarded()) r.body = {{"error", "BadResponse"}, {"detail", body}};
    }
    return r;
}

} // namespace

HttpServer::HttpServer(Api& api) : api_(api), server_(std::make_unique<httplib::Server>())
{
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        Request r;
        r.method = req.method;
        r.path = req.path;
        for (const auto& [k, v] : req.params) r.query[k] = v;
        r.authorization = req.get_header_value("Authorization");
        r.body = req.body;
        auto out = api_.handle(r);
        res.status = out.status;
        if (out.status == 401) res.set_header("WWW-Authenticate", "Basic realm=\"eyesec\"");
        res.set_content(out.body.dump(), "application/json");
    };
    server_->Get(".*", handler);
    server_->Post(".*", handler);
    server_->Patch(".*", handler);
    server_->Delete(".*", handler);
    server_->Put(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port)
{
    int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

bool HttpServer::running() const { return server_->is_running(); }

HttpTransport::HttpTransport(std::string base_url, int timeout_ms) : base_url_(std::move(base_url)), timeout_ms_(timeout_ms)
{
}

Response HttpTransport::send(const Request& request)
{
    httplib::Client client(base_url_);
    client.set_connection_timeout(std::chrono::milliseconds(timeout_ms_));
    client.set_read_timeout(std::chrono::milliseconds(timeout_ms_));
    httplib::Headers headers;
    if (!request.authorization.empty()) headers.emplace("Authorization", request.authorization);
    httplib::Params params(request.query.begin(), request.query.end());
    auto path = params.empty() ? request.path : httplib::append_query_params(request.path, params);

    httplib::Result res;
    const auto& m = request.method;
    if (m == "GET") {
        res = client.Get(path, headers);
    } else if (m == "POST") {
        res = client.Post(path, headers, request.body, "application/json");
    } else if (m == "PATCH") {
        res = client.Patch(path, headers, request.body, "application/json");
    } else if (m == "DELETE") {
        res = client.Delete(path, headers);
    } else {
        throw std::invalid_argument("unsupported method " + m);
    }
    if (!res) {
        throw sniffer::UploadError(sniffer::UploadErrc::Unreachable,
                                   base_url_ + ": " + httplib::to_string(res.error()));
    }
    return from_reply(res->status, res->body);
}

} // namespace eyesec::backend
