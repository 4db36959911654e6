#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "eyesec/sim/types.hpp"

namespace eyesec::sim {

/// Preferred-parent tree rooted at the server.
struct RoutingTable {
    codec::MacAddress root;
    std::map<codec::MacAddress, codec::MacAddress> parent;

    bool reaches_root(const codec::MacAddress& node) const { return node == root || parent.contains(node); }
    /// Hops from node to root; nullopt when unreachable.
    std::optional<std::size_t> depth(const codec::MacAddress& node) const;
    /// node, parent(node), ..., root.
    std::vector<codec::MacAddress> path_to_root(const codec::MacAddress& node) const;
    /// Next MAC on the tree path from `from` to `to`.
    std::optional<codec::MacAddress> next_hop(const codec::MacAddress& from, const codec::MacAddress& to) const;
};

struct RoutingResult {
    RoutingTable table;
    /// Live nodes without a path to the server. Nonempty means partitioned.
    std::vector<codec::MacAddress> isolated;

    bool partitioned() const { return !isolated.empty(); }
};

/// Shortest-hop tree toward the server over unit-disk links of `link_range`
/// metres. Among equally short candidates the lowest MAC becomes parent.
/// Malicious nodes may attach as leaves but never forward. Every node in
/// `live_nodes` is considered alive.
RoutingResult build_routes(std::span<const SimNode> live_nodes, double link_range);

} // namespace eyesec::sim
