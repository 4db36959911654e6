// eyesec: backend server, sniffer, simulator and scenario driver.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "eyesec/backend/http.hpp"
#include "eyesec/codec/pcap.hpp"
#include "eyesec/scenario/replay.hpp"
#include "eyesec/scenario/runner.hpp"

using namespace eyesec;
using nlohmann::json;
using Micros = std::chrono::microseconds;

namespace {

backend::HttpServer* g_server = nullptr;

void on_signal(int)
{
    if (g_server) g_server->stop();
}

struct Credentials {
    std::string user;
    std::string secret;
};

// "user:secret", falling back to EYESEC_USER / EYESEC_SECRET.
Credentials credentials(const std::string& flag)
{
    std::string text = flag;
    if (text.empty()) {
        const char* u = std::getenv("EYESEC_USER");
        const char* s = std::getenv("EYESEC_SECRET");
        if (!u || !s) throw CLI::ValidationError("credentials", "pass --credentials user:secret or set EYESEC_USER/EYESEC_SECRET");
        return {u, s};
    }
    auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("credentials", "expected user:secret");
    return {text.substr(0, colon), text.substr(colon + 1)};
}

void write_out(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

int serve(const std::string& host, int port, double epsilon_ms, const std::vector<std::string>& users)
{
    backend::Backend b(backend::BackendConfig{Micros(static_cast<std::int64_t>(epsilon_ms * 1000))});
    backend::CredentialStore creds;
    for (const auto& u : users) {
        // user:secret:role
        auto a = u.find(':'), z = u.rfind(':');
        if (a == std::string::npos || a == z) throw CLI::ValidationError("--user", "expected user:secret:role");
        creds.add(u.substr(0, a), u.substr(a + 1, z - a - 1), backend::parse_role(u.substr(z + 1)));
    }
    if (const char* u = std::getenv("EYESEC_USER"); u && creds.users().empty()) {
        const char* s = std::getenv("EYESEC_SECRET");
        creds.add(u, s ? s : "", backend::Role::Operator);
    }
    if (creds.users().empty()) throw CLI::ValidationError("--user", "at least one operator account is required");

    backend::Api api(b, creds);
    backend::HttpServer server(api);
    int bound = server.bind(host, port);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "eyesec backend listening on http://" << host << ":" << bound << std::endl;
    server.listen();
    g_server = nullptr;
    return 0;
}

int sniff(const std::string& source, const std::string& pcap, const std::string& scenario_path, const std::string& id,
          const std::string& url, const Credentials& c, double skew_ms, double speed)
{
    backend::HttpTransport http(url);
    backend::ApiBackendClient client(http, c.user, c.secret);
    scenario::ReplayOptions opt;
    opt.sniffer_id = id;
    opt.skew = Micros(static_cast<std::int64_t>(skew_ms * 1000));
    opt.speed = speed;
    codec::PcapCapture capture;
    if (source == "pcap") {
        capture = codec::read_pcap_file(pcap);
    } else {
        auto cfg = scenario::load_scenario(scenario_path);
        sim::Simulation s(cfg.sim);
        for (const auto& f : cfg.faults) s.inject_fault(f);
        capture = scenario::to_pcap(s.step(cfg.duration));
    }
    auto sum = scenario::replay(capture, client, opt);
    std::cout << json{{"frames", sum.frames}, {"admitted", sum.admitted}, {"duplicate", sum.duplicate}, {"corrupt", sum.corrupt}}
                     .dump()
              << "\n";
    return 0;
}

int simulate(const std::string& scenario_path, const std::string& out)
{
    auto cfg = scenario::load_scenario(scenario_path);
    sim::Simulation s(cfg.sim);
    for (const auto& f : cfg.faults) s.inject_fault(f);
    auto events = s.step(cfg.duration);
    codec::write_pcap_file(out, scenario::to_pcap(events));
    std::cerr << events.size() << " frames written to " << out << "\n";
    return 0;
}

int run_scenario(const std::string& path, const std::string& out, const std::string& url, const std::string& cred_flag)
{
    auto cfg = scenario::load_scenario(path);
    json report;
    if (url.empty()) {
        report = scenario::run_scenario(cfg);
    } else {
        auto c = credentials(cred_flag);
        backend::HttpTransport http(url);
        scenario::ScenarioRun run(cfg, http, c.user, c.secret);
        run.run();
        report = run.report();
    }
    write_out(out, scenario::canonical(report));
    if (!report["pass"].get<bool>()) {
        std::cerr << "scenario " << cfg.id << " failed:\n";
        for (const auto& c : report["checks"]) {
            if (!c["pass"].get<bool>()) std::cerr << "  " << c["check"].get<std::string>() << ": expected " << c["expected"] << ", got " << c["actual"] << "\n";
        }
        return 1;
    }
    return 0;
}

int replay(const std::string& pcap, const std::string& url, const Credentials& c, const std::string& id, double speed)
{
    backend::HttpTransport http(url);
    backend::ApiBackendClient client(http, c.user, c.secret);
    scenario::ReplayOptions opt;
    opt.sniffer_id = id;
    opt.speed = speed;
    auto sum = scenario::replay(codec::read_pcap_file(pcap), client, opt);
    std::cout << json{{"frames", sum.frames}, {"admitted", sum.admitted}, {"duplicate", sum.duplicate}, {"corrupt", sum.corrupt}}
                     .dump()
              << "\n";
    return 0;
}

int report(const std::string& url, const Credentials& c, std::int64_t t0, std::int64_t t1, const std::string& out)
{
    backend::HttpTransport http(url);
    backend::ApiClient api(http, c.user, c.secret);
    auto window = std::map<std::string, std::string>{{"t0", std::to_string(t0)}, {"t1", std::to_string(t1)}};
    auto ip = window, mac = window;
    ip["view"] = "ip";
    mac["view"] = "mac";
    json r = {
        {"status", api.get("/api/status")},
        {"nodes", api.get("/api/nodes")},
        {"edges", {{"ip", api.get("/api/edges", ip)["edges"]}, {"mac", api.get("/api/edges", mac)["edges"]}}},
        {"warnings", api.get("/api/warnings", window)},
        {"spoof", api.get("/api/spoof")},
    };
    write_out(out, scenario::canonical(r));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"EyeSec passive WSN monitor"};
    app.require_subcommand(1);

    auto* cmd_serve = app.add_subcommand("serve", "run the backend HTTP API");
    std::string host = "127.0.0.1";
    int port = 8080;
    double epsilon_ms = 5.0;
    std::vector<std::string> users;
    cmd_serve->add_option("--host", host);
    cmd_serve->add_option("--port", port);
    cmd_serve->add_option("--epsilon-ms", epsilon_ms, "duplicate window")->check(CLI::PositiveNumber);
    cmd_serve->add_option("--user", users, "account as user:secret:role (repeatable)");

    std::string url = "http://127.0.0.1:8080", cred_flag;
    auto* cmd_sniff = app.add_subcommand("sniff", "capture frames and upload them to a backend");
    std::string source = "sim", pcap, scenario_path, sniffer_id = "sniffer-1";
    double skew_ms = 0, speed = 0;
    cmd_sniff->add_option("--source", source)->check(CLI::IsMember({"sim", "pcap"}));
    cmd_sniff->add_option("--pcap", pcap);
    cmd_sniff->add_option("--scenario", scenario_path, "scenario providing the simulated radio");
    cmd_sniff->add_option("--sniffer-id", sniffer_id);
    cmd_sniff->add_option("--backend-url", url);
    cmd_sniff->add_option("--credentials", cred_flag, "user:secret (else EYESEC_USER/EYESEC_SECRET)");
    cmd_sniff->add_option("--skew-ms", skew_ms);
    cmd_sniff->add_option("--speed", speed, "playback rate, 0 = unpaced");

    auto* cmd_sim = app.add_subcommand("sim", "simulate a scenario and write its radio traffic as PCAP");
    std::string out;
    cmd_sim->add_option("scenario", scenario_path)->required()->check(CLI::ExistingFile);
    cmd_sim->add_option("-o,--out", out)->required();

    auto* cmd_run = app.add_subcommand("run-scenario", "run a scenario end to end and print its report");
    std::string run_url;
    cmd_run->add_option("scenario", scenario_path)->required()->check(CLI::ExistingFile);
    cmd_run->add_option("-o,--out", out, "report path (default stdout)");
    cmd_run->add_option("--backend-url", run_url, "use a running backend instead of an ephemeral one");
    cmd_run->add_option("--credentials", cred_flag);

    auto* cmd_replay = app.add_subcommand("replay", "feed a PCAP through one sniffer into a backend");
    cmd_replay->add_option("pcap", pcap)->required()->check(CLI::ExistingFile);
    cmd_replay->add_option("--backend-url", url);
    cmd_replay->add_option("--credentials", cred_flag);
    cmd_replay->add_option("--sniffer-id", sniffer_id);
    cmd_replay->add_option("--speed", speed);

    auto* cmd_report = app.add_subcommand("report", "dump a running backend's state as JSON");
    std::int64_t t0 = 0, t1 = std::numeric_limits<std::int64_t>::max();
    cmd_report->add_option("--backend-url", url);
    cmd_report->add_option("--credentials", cred_flag);
    cmd_report->add_option("--t0", t0);
    cmd_report->add_option("--t1", t1);
    cmd_report->add_option("-o,--out", out);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*cmd_serve) return serve(host, port, epsilon_ms, users);
        if (*cmd_sniff) {
            if (source == "pcap" && pcap.empty()) throw CLI::ValidationError("--pcap", "required with --source pcap");
            if (source == "sim" && scenario_path.empty()) throw CLI::ValidationError("--scenario", "required with --source sim");
            return sniff(source, pcap, scenario_path, sniffer_id, url, credentials(cred_flag), skew_ms, speed);
        }
        if (*cmd_sim) return simulate(scenario_path, out);
        if (*cmd_run) return run_scenario(scenario_path, out, run_url, cred_flag);
        if (*cmd_replay) return replay(pcap, url, credentials(cred_flag), sniffer_id, speed);
        if (*cmd_report) return report(url, credentials(cred_flag), t0, t1, out);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "eyesec: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
