#pragma once

#include <map>
#include <unordered_map>

#include "eyesec/backend/types.hpp"

namespace eyesec::backend {

struct DigestHash {
    std::size_t operator()(const Digest& d) const noexcept
    {
        std::size_t h = 0;
        for (std::size_t i = 0; i < sizeof(std::size_t) && i < d.size(); ++i) h = h << 8 | d[i];
        return h;
    }
};

/// Duplicate-free transmission storage indexed by dedup digest. Not
/// thread-safe; the owning Backend serializes access.
class TransmissionStore {
public:
    struct AdmitResult {
        sniffer::Admission admission = sniffer::Admission::Admitted;
        std::uint64_t id = 0;
        /// Transmissions folded into `id` because the new witness bridged them.
        std::vector<StoredTransmission> merged;
    };

    explicit TransmissionStore(Micros epsilon) : epsilon_(epsilon) {}

    Micros epsilon() const { return epsilon_; }

    /// A report is a duplicate when some stored transmission with the same
    /// digest has a witness less than epsilon away; it is then kept as an
    /// extra witness. A report within epsilon of several transmissions
    /// merges them, so the final state is independent of arrival order.
    /// `status` is recorded on newly created transmissions.
    AdmitResult admit(const sniffer::PacketReport& report, sniffer::SignatureStatus status);

    const StoredTransmission* find(std::uint64_t id) const;
    StoredTransmission* find(std::uint64_t id);

    std::size_t size() const { return by_id_.size(); }
    std::size_t witness_count() const;

    /// Ordered by (ts, digest); the canonical view of stored state.
    std::vector<StoredTransmission> canonical() const;

    template <typename Fn>
    void for_each(Fn&& fn) const
    {
        for (const auto& [id, t] : by_id_) fn(t);
    }

    std::optional<Micros> earliest() const;
    std::optional<Micros> latest() const;

private:
    Micros epsilon_;
    std::uint64_t next_id_ = 1;
    std::map<std::uint64_t, StoredTransmission> by_id_;
    std::unordered_map<Digest, std::vector<std::uint64_t>, DigestHash> by_digest_;
};

/// One edge per directed endpoint pair with nonzero count in [t0, t1).
/// MAC view counts every hop; IP view counts first-hop transmissions only.
std::vector<TrafficEdge> compute_edges(const TransmissionStore& store, View view, Micros t0, Micros t1);

} // namespace eyesec::backend
