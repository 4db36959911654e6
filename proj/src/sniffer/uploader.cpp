#include "eyesec/sniffer/uploader.hpp"

#include <algorithm>

namespace eyesec::sniffer {

void Uploader::enqueue(PacketReport report)
{
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(report));
}

bool Uploader::due(Micros now) const
{
    std::lock_guard lock(mutex_);
    if (queue_.empty()) return false;
    return queue_.size() >= policy_.max_records || now - queue_.front().hop.ts >= policy_.max_age;
}

std::size_t Uploader::pending() const
{
    std::lock_guard lock(mutex_);
    return queue_.size();
}

FlushResult Uploader::flush(BackendClient& client)
{
    // One batch in flight at a time keeps delivery in capture order.
    std::lock_guard send_lock(send_mutex_);
    std::vector<PacketReport> batch;
    {
        std::lock_guard lock(mutex_);
        const auto n = std::min(policy_.max_records, queue_.size());
        batch.assign(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(n));
    }
    if (batch.empty()) return {};

    auto results = client.post_packets(batch);
    if (results.size() != batch.size()) throw UploadError(UploadErrc::Rejected, "backend acknowledged a different count");

    {
        std::lock_guard lock(mutex_);
        queue_.erase(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(batch.size()));
    }
    FlushResult r;
    r.acknowledged = batch.size();
    r.admitted = static_cast<std::size_t>(std::count(results.begin(), results.end(), Admission::Admitted));
    r.duplicate = r.acknowledged - r.admitted;
    return r;
}

FlushResult Uploader::flush_all(BackendClient& client)
{
    FlushResult total;
    while (pending() > 0) total += flush(client);
    return total;
}

} // namespace eyesec::sniffer
