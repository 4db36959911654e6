#pragma once

#include <deque>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "eyesec/sniffer/records.hpp"

namespace eyesec::sniffer {

enum class UploadErrc { Unauthorized, Unreachable, Rejected };

class UploadError : public std::runtime_error {
public:
    UploadError(UploadErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    UploadErrc code() const noexcept { return code_; }

private:
    UploadErrc code_;
};

/// Transport to the backend ingestion endpoint. Implementations throw
/// UploadError; the results vector is parallel to the batch.
class BackendClient {
public:
    virtual ~BackendClient() = default;
    virtual std::vector<Admission> post_packets(const std::vector<PacketReport>& batch) = 0;
};

struct UploadPolicy {
    std::size_t max_records = 64;
    Micros max_age{200'000};
};

struct FlushResult {
    std::size_t acknowledged = 0;
    std::size_t admitted = 0;
    std::size_t duplicate = 0;

    FlushResult& operator+=(const FlushResult& o)
    {
        acknowledged += o.acknowledged;
        admitted += o.admitted;
        duplicate += o.duplicate;
        return *this;
    }
};

/// Ordered queue between capture and upload. Capture only ever enqueues;
/// a failed upload leaves the batch at the head of the queue for the next
/// attempt (at-least-once delivery). Thread-safe.
class Uploader {
public:
    explicit Uploader(UploadPolicy policy = {}) : policy_(policy) {}

    void enqueue(PacketReport report);

    /// A batch is due once max_records are pending or the oldest pending
    /// record is at least max_age older than `now` (capture clock).
    bool due(Micros now) const;
    std::size_t pending() const;

    /// Sends one batch of up to max_records from the head of the queue.
    /// Rethrows UploadError after retaining the batch.
    FlushResult flush(BackendClient& client);

    /// Flushes until the queue is empty.
    FlushResult flush_all(BackendClient& client);

private:
    UploadPolicy policy_;
    mutable std::mutex mutex_;
    std::mutex send_mutex_;
    std::deque<PacketReport> queue_;
};

} // namespace eyesec::sniffer
