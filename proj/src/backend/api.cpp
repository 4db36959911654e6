#include "eyesec/backend/api.hpp"

#include <chrono>
#include <regex>

#include "eyesec/backend/serialize.hpp"
#include "eyesec/sniffer/wire.hpp"

namespace eyesec::backend {

using nlohmann::json;

namespace {

struct Route {
    Endpoint endpoint;
    std::string arg;
};

std::optional<Route> route(const std::string& path)
{
    static const std::regex node(R"(/api/nodes/([^/]+))");
    static const std::regex resolve(R"(/api/nodes/([^/]+)/resolve)");
    static const std::regex spoof(R"(/api/spoof/([^/]+))");
    static const std::regex cred(R"(/api/credentials/([^/]+))");
    static const std::map<std::string, Endpoint> fixed = {
        {"/api/packets", Endpoint::Packets}, {"/api/nodes", Endpoint::Nodes},
        {"/api/edges", Endpoint::Edges},     {"/api/warnings", Endpoint::Warnings},
        {"/api/timeline", Endpoint::Timeline}, {"/api/rssi", Endpoint::Rssi},
        {"/api/keys", Endpoint::Keys},       {"/api/spoof", Endpoint::Spoof},
        {"/api/status", Endpoint::Status},   {"/api/credentials", Endpoint::Credentials},
    };
    if (auto it = fixed.find(path); it != fixed.end()) return Route{it->second, {}};
    std::smatch m;
    if (std::regex_match(path, m, resolve)) return Route{Endpoint::NodeResolve, m[1]};
    if (std::regex_match(path, m, node)) return Route{Endpoint::Node, m[1]};
    if (std::regex_match(path, m, spoof)) return Route{Endpoint::SpoofNode, m[1]};
    if (std::regex_match(path, m, cred)) return Route{Endpoint::Credential, m[1]};
    return std::nullopt;
}

Response error(int status, const std::string& code, const std::string& detail)
{
    return {status, {{"error", code}, {"detail", detail}}};
}

int status_of(BackendErrc c)
{
    switch (c) {
    case BackendErrc::BadWindow:
    case BackendErrc::BadRequest: return 400;
    case BackendErrc::UnknownNode: return 404;
    case BackendErrc::Locked: return 423;
    case BackendErrc::Conflict: return 409;
    }
    return 500;
}

class BadRequest : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::int64_t int_param(const Request& r, const std::string& key)
{
    auto it = r.query.find(key);
    if (it == r.query.end()) throw BadRequest("missing query parameter " + key);
    try {
        std::size_t used = 0;
        auto v = std::stoll(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw BadRequest("query parameter " + key + " must be an integer");
    }
}

std::optional<Window> window_param(const Request& r)
{
    bool a = r.query.count("t0"), b = r.query.count("t1");
    if (!a && !b) return std::nullopt;
    if (a != b) throw BadRequest("t0 and t1 must be given together");
    return Window{Micros(int_param(r, "t0")), Micros(int_param(r, "t1"))};
}

codec::MacAddress mac_arg(const std::string& text)
{
    try {
        return codec::MacAddress::parse(text);
    } catch (const std::exception&) {
        throw BadRequest("malformed MAC address: " + text);
    }
}

json parse_body(const Request& r)
{
    try {
        return json::parse(r.body);
    } catch (const json::exception&) {
        throw BadRequest("body is not valid JSON");
    }
}

} // namespace

Api::Api(Backend& backend, CredentialStore& credentials, Clock clock)
    : backend_(backend), credentials_(credentials), clock_(std::move(clock))
{
    if (!clock_) {
        clock_ = [] {
            return std::chrono::duration_cast<Micros>(std::chrono::system_clock::now().time_since_epoch());
        };
    }
}

Response Api::handle(const Request& r)
{
    auto where = route(r.path);
    if (!where) return error(404, "NotFound", "no such endpoint: " + r.path);
    auto method = parse_method(r.method);
    if (!method || !supports(where->endpoint, *method)) {
        return error(405, "MethodNotAllowed", r.method + " is not supported on " + to_string(where->endpoint));
    }

    auto creds = parse_basic_auth(r.authorization);
    auto role = creds ? credentials_.authenticate(creds->first, creds->second) : std::nullopt;
    if (!role) return error(401, "Unauthorized", "missing or invalid credentials");
    if (!allowed(where->endpoint, *method, *role)) {
        return error(403, "Unauthorized",
                     std::string("role ") + to_string(*role) + " may not " + r.method + " " + to_string(where->endpoint));
    }

    try {
        return dispatch(where->endpoint, *method, where->arg, r);
    } catch (const BadRequest& e) {
        return error(400, "BadRequest", e.what());
    } catch (const BackendError& e) {
        return error(status_of(e.code()), to_string(e.code()), e.what());
    } catch (const json::exception& e) {
        return error(400, "BadRequest", e.what());
    } catch (const std::invalid_argument& e) {
        return error(400, "BadRequest", e.what());
    } catch (const codec::CodecError& e) {
        return error(400, "BadRequest", e.what());
    }
}

Response Api::dispatch(Endpoint e, Method m, const std::string& arg, const Request& r)
{
    switch (e) {
    case Endpoint::Packets: {
        auto batch = sniffer::batch_from_json(parse_body(r));
        auto results = backend_.ingest(batch);
        json out = json::array();
        std::size_t admitted = 0;
        for (auto a : results) {
            out.push_back(sniffer::to_string(a));
            admitted += a == sniffer::Admission::Admitted;
        }
        return {200, {{"results", out}, {"admitted", admitted}, {"duplicate", results.size() - admitted}}};
    }
    case Endpoint::Nodes: {
        if (m == Method::Get) {
            json out = json::array();
            for (const auto& n : backend_.nodes()) out.push_back(to_json(n));
            return {200, out};
        }
        auto body = parse_body(r);
        auto mac = mac_arg(body.at("mac").get<std::string>());
        Micros ts = body.contains("ts") ? Micros(body["ts"].get<std::int64_t>()) : clock_();
        auto scan = backend_.register_marker_scan(mac, body.at("placement").get<std::string>(), ts);
        json out = {{"node", to_json(scan.record)}, {"warning", scan.warning ? to_json(*scan.warning) : json(nullptr)}};
        return {200, out};
    }
    case Endpoint::Node: {
        auto mac = mac_arg(arg);
        if (m == Method::Get) return {200, to_json(backend_.node_info(mac, window_param(r)))};
        auto body = parse_body(r);
        NodeUpdate u;
        if (body.contains("name")) u.name = body["name"].get<std::string>();
        if (body.contains("location")) u.location = body["location"].get<std::string>();
        return {200, to_json(backend_.update_node(mac, u))};
    }
    case Endpoint::NodeResolve: {
        auto body = parse_body(r);
        return {200, to_json(backend_.resolve_duplicate(mac_arg(arg), body.at("placement").get<std::string>()))};
    }
    case Endpoint::Edges: {
        auto it = r.query.find("view");
        if (it == r.query.end()) throw BadRequest("missing query parameter view");
        auto view = parse_view(it->second);
        Micros t0(int_param(r, "t0")), t1(int_param(r, "t1"));
        return {200, {{"view", to_string(view)}, {"t0", t0.count()}, {"t1", t1.count()},
                      {"edges", edges_to_json(backend_.edges(view, t0, t1))}}};
    }
    case Endpoint::Warnings: {
        json out = json::array();
        for (const auto& w : backend_.warnings(window_param(r))) out.push_back(to_json(w));
        return {200, out};
    }
    case Endpoint::Timeline: {
        Micros step(int_param(r, "step"));
        json snaps = json::array();
        for (const auto& s : backend_.timeline(step, window_param(r))) snaps.push_back(to_json(s));
        return {200, {{"step", step.count()}, {"snapshots", snaps}}};
    }
    case Endpoint::Rssi: {
        auto it = r.query.find("mac");
        if (it == r.query.end()) throw BadRequest("missing query parameter mac");
        std::optional<std::string> sniffer_id;
        if (auto s = r.query.find("sniffer"); s != r.query.end()) sniffer_id = s->second;
        json samples = json::array();
        for (const auto& s : backend_.rssi(mac_arg(it->second), sniffer_id)) samples.push_back(to_json(s));
        return {200, {{"mac", mac_arg(it->second).to_string()}, {"samples", samples}}};
    }
    case Endpoint::Keys: {
        auto body = parse_body(r);
        auto mac = mac_arg(body.at("mac").get<std::string>());
        auto raw = from_hex(body.at("public_key").get<std::string>());
        if (raw.size() != crypto::kEd25519PublicKeySize) throw BadRequest("public_key must be 32 bytes");
        crypto::Ed25519PublicKey key{};
        std::copy(raw.begin(), raw.end(), key.begin());
        backend_.register_key(mac, key, body.value("replace", false));
        return {200, {{"mac", mac.to_string()}, {"public_key", to_hex(key)}}};
    }
    case Endpoint::Spoof: {
        json out = json::object();
        for (const auto& [mac, c] : backend_.findings()) out[mac.to_string()] = verifier::to_string(c);
        return {200, out};
    }
    case Endpoint::SpoofNode: return {200, to_json(backend_.spoof_report(mac_arg(arg)))};
    case Endpoint::Status:
        return {200, {{"transmissions", backend_.transmission_count()},
                      {"witnesses", backend_.witness_count()},
                      {"epsilon_us", backend_.epsilon().count()}}};
    case Endpoint::Credentials: {
        if (m == Method::Get) {
            json out = json::array();
            for (const auto& [user, role] : credentials_.users()) out.push_back({{"username", user}, {"role", to_string(role)}});
            return {200, out};
        }
        auto body = parse_body(r);
        auto role = parse_role(body.at("role").get<std::string>());
        credentials_.add(body.at("username").get<std::string>(), body.at("secret").get<std::string>(), role);
        return {201, {{"username", body["username"]}, {"role", to_string(role)}}};
    }
    case Endpoint::Credential:
        if (!credentials_.revoke(arg)) return error(404, "NotFound", "no such user: " + arg);
        return {200, {{"revoked", arg}}};
    }
    return error(500, "Internal", "unrouted endpoint");
}

ApiClient::ApiClient(Transport& transport, std::string username, std::string secret)
    : transport_(transport), authorization_(make_basic_auth(username, secret))
{
}

Response ApiClient::call(const std::string& method, const std::string& path, std::map<std::string, std::string> query,
                         const std::string& body)
{
    return transport_.send(Request{method, path, std::move(query), authorization_, body});
}

json ApiClient::checked(Response r)
{
    if (r.status >= 200 && r.status < 300) return std::move(r.body);
    std::string code = r.body.is_object() ? r.body.value("error", "Error") : "Error";
    std::string detail = r.body.is_object() ? r.body.value("detail", "") : r.body.dump();
    throw ApiError(r.status, code, detail);
}

json ApiClient::get(const std::string& path, std::map<std::string, std::string> query)
{
    return checked(call("GET", path, std::move(query), ""));
}

json ApiClient::post(const std::string& path, const json& body) { return checked(call("POST", path, {}, body.dump())); }

json ApiClient::patch(const std::string& path, const json& body) { return checked(call("PATCH", path, {}, body.dump())); }

json ApiClient::del(const std::string& path) { return checked(call("DELETE", path, {}, "")); }

ApiBackendClient::ApiBackendClient(Transport& transport, std::string username, std::string secret)
    : client_(transport, std::move(username), std::move(secret))
{
}

std::vector<sniffer::Admission> ApiBackendClient::post_packets(const std::vector<sniffer::PacketReport>& batch)
{
    json body;
    try {
        body = client_.post("/api/packets", sniffer::batch_to_json(batch));
    } catch (const ApiError& e) {
        auto code = e.status() == 401 || e.status() == 403 ? sniffer::UploadErrc::Unauthorized : sniffer::UploadErrc::Rejected;
        throw sniffer::UploadError(code, e.what());
    }
    std::vector<sniffer::Admission> out;
    for (const auto& r : body.at("results")) {
        out.push_back(r.get<std::string>() == "admitted" ? sniffer::Admission::Admitted : sniffer::Admission::Duplicate);
    }
    if (out.size() != batch.size()) throw sniffer::UploadError(sniffer::UploadErrc::Rejected, "result count mismatch");
    return out;
}

} // namespace eyesec::backend
