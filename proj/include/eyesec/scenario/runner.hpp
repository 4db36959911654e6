#pragma once

#include <memory>

#include "json.hpp"

#include "eyesec/backend/api.hpp"
#include "eyesec/scenario/config.hpp"
#include "eyesec/sniffer/sniffer.hpp"

namespace eyesec::scenario {

class ScenarioFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Credentials the runner provisions on its ephemeral backend.
inline constexpr const char* kOperatorUser = "operator";
inline constexpr const char* kOperatorSecret = "operator-secret";

/// Feeds the simulated radio through every configured sniffer into a
/// backend. The backend is either owned (ephemeral, in-process) or reached
/// through a caller-supplied transport.
class ScenarioRun {
public:
    /// Boots an ephemeral backend reached through the in-process API.
    explicit ScenarioRun(ScenarioConfig config);
    /// Uses an existing backend behind `transport`; `user`/`secret` must be
    /// an operator account there.
    ScenarioRun(ScenarioConfig config, backend::Transport& transport, std::string user, std::string secret);
    ~ScenarioRun();

    /// Runs the simulation to the configured duration, uploading as it goes.
    void run();
    /// Runs until `t` (at most the configured duration).
    void advance(Micros t);
    void finish();

    const ScenarioConfig& config() const { return config_; }
    const sim::Simulation& simulation() const { return sim_; }
    /// Null when the backend is remote.
    backend::Backend* backend() { return backend_.get(); }
    backend::ApiClient& operator_client() { return *operator_; }
    /// Every radio event produced so far, in time order.
    const std::vector<sim::RadioEvent>& events() const { return events_; }

    std::size_t captured() const;
    std::size_t corrupt() const;

    /// Queries the backend and evaluates the expectations. Deterministic:
    /// same config gives the same JSON.
    nlohmann::json report();

private:
    struct Station;

    void setup();
    void hear(const sim::RadioEvent& ev);
    void scans_until(Micros t);
    void flush(Micros now, bool all);
    std::string resolve_ip(const std::string& name_or_ip) const;
    std::string resolve_mac(const std::string& name_or_mac) const;

    ScenarioConfig config_;
    sim::Simulation sim_;
    std::unique_ptr<backend::Backend> backend_;
    std::unique_ptr<backend::CredentialStore> credentials_;
    std::unique_ptr<backend::Api> api_;
    std::unique_ptr<backend::Transport> local_;
    backend::Transport* transport_ = nullptr;
    std::unique_ptr<backend::ApiClient> operator_;
    std::vector<std::unique_ptr<Station>> stations_;
    std::vector<sim::RadioEvent> events_;
    std::size_t next_scan_ = 0;
    Micros now_{0};
    bool finished_ = false;
};

/// Boots, runs and reports. Throws ConfigError on invalid configs; the
/// report's "pass" field carries the expectation outcome.
nlohmann::json run_scenario(const ScenarioConfig& config);

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string canonical(const nlohmann::json& j);

} // namespace eyesec::scenario
