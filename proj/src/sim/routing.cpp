#include "eyesec/sim/routing.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace eyesec::sim {

std::optional<std::size_t> RoutingTable::depth(const codec::MacAddress& node) const
{
    if (!reaches_root(node)) return std::nullopt;
    return path_to_root(node).size() - 1;
}

std::vector<codec::MacAddress> RoutingTable::path_to_root(const codec::MacAddress& node) const
{
    std::vector<codec::MacAddress> path{node};
    auto cur = node;
    while (cur != root) {
        auto it = parent.find(cur);
        if (it == parent.end()) return {};
        cur = it->second;
        path.push_back(cur);
    }
    return path;
}

std::optional<codec::MacAddress> RoutingTable::next_hop(const codec::MacAddress& from, const codec::MacAddress& to) const
{
    if (from == to || !reaches_root(from) || !reaches_root(to)) return std::nullopt;
    auto down = path_to_root(to);
    auto it = std::find(down.begin(), down.end(), from);
    if (it != down.end()) return *std::prev(it); // `to` lies below `from`
    return parent.at(from);
}

RoutingResult build_routes(std::span<const SimNode> live_nodes, double link_range)
{
    RoutingResult result;
    const std::size_t n = live_nodes.size();
    auto server = std::find_if(live_nodes.begin(), live_nodes.end(), [](const SimNode& s) { return s.role == NodeRole::Server; });
    if (server == live_nodes.end()) {
        for (const auto& node : live_nodes) result.isolated.push_back(node.mac);
        std::sort(result.isolated.begin(), result.isolated.end());
        return result;
    }
    const auto root = static_cast<std::size_t>(server - live_nodes.begin());
    result.table.root = server->mac;

    auto linked = [&](std::size_t a, std::size_t b) {
        return a != b && distance(live_nodes[a].position, live_nodes[b].position) <= link_range;
    };
    auto forwards = [&](std::size_t i) { return live_nodes[i].role != NodeRole::Malicious; };

    constexpr auto kUnreached = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> depth(n, kUnreached);
    depth[root] = 0;
    std::deque<std::size_t> frontier{root};
    while (!frontier.empty()) {
        auto cur = frontier.front();
        frontier.pop_front();
        if (!forwards(cur)) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (depth[j] == kUnreached && linked(cur, j)) {
                depth[j] = depth[cur] + 1;
                frontier.push_back(j);
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (i == root) continue;
        if (depth[i] == kUnreached) {
            result.isolated.push_back(live_nodes[i].mac);
            continue;
        }
        std::optional<codec::MacAddress> best;
        for (std::size_t j = 0; j < n; ++j) {
            if (depth[j] != kUnreached && depth[j] + 1 == depth[i] && forwards(j) && linked(i, j) && (!best || live_nodes[j].mac < *best)) {
                best = live_nodes[j].mac;
            }
        }
        result.table.parent.emplace(live_nodes[i].mac, *best);
    }
    std::sort(result.isolated.begin(), result.isolated.end());
    return result;
}

} // namespace eyesec::sim
