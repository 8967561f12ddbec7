// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "taxowl/cache_store.hpp"
#include "taxowl/error.hpp"

namespace taxowl {

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Abstract GET transport. The request is the path+query relative to the
/// API base ("species/match?name=..."), with the query value already
/// percent-encoded. Implementations must be safe for concurrent use.
class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse get(const std::string& request_key) = 0;
};

/// Map-backed transport for tests.
class InMemoryTransport : public Transport {
public:
    InMemoryTransport() = default;
    explicit InMemoryTransport(std::map<std::string, HttpResponse> responses)
        : responses_(std::move(responses)) {}

    void add(const std::string& request_key, std::string body, int status = 200) {
        std::lock_guard<std::mutex> lock(mutex_);
        responses_[request_key] = HttpResponse{status, std::move(body)};
    }

    /// Makes the next `n` requests fail with a retryable transport error.
    void fail_next(int n) {
        std::lock_guard<std::mutex> lock(mutex_);
        failures_ = n;
    }

    int request_count() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return requests_;
    }

    HttpResponse get(const std::string& request_key) override {
        std::lock_guard<std::mutex> lock(mutex_);
        ++requests_;
        if (failures_ > 0) {
            --failures_;
            throw Error(ErrorCode::Transport, "injected failure", /*retryable=*/true);
        }
        auto it = responses_.find(request_key);
        if (it == responses_.end()) {
            throw Error(ErrorCode::Transport, "no response registered for " + request_key);
        }
        return it->second;
    }

private:
    mutable std::mutex mutex_;
    std::map<std::string, HttpResponse> responses_;
    int failures_ = 0;
    int requests_ = 0;
};

/// Replays a recorded corpus from disk; never touches the network. A miss is
/// a non-retryable transport error so corpus holes surface loudly instead of
/// masquerading as backbone answers.
class FixtureTransport : public Transport {
public:
    explicit FixtureTransport(const std::filesystem::path& dir)
        : store_(std::make_shared<CacheStore>(dir, /*read_only=*/true)) {}

    HttpResponse get(const std::string& request_key) override {
        auto entry = store_->get(request_key);
        if (!entry) {
            throw Error(ErrorCode::Transport,
                        "no fixture recorded for " + request_key + " in " +
                            store_->directory().string());
        }
        return HttpResponse{200, std::move(entry->body)};
    }

    std::shared_ptr<CacheStore> store() const { return store_; }

private:
    std::shared_ptr<CacheStore> store_;
};

/// Consults a cache store first, falls back to the inner transport and
/// writes successful bodies back. Only 2xx responses are cached.
class CacheThroughTransport : public Transport {
public:
    CacheThroughTransport(std::shared_ptr<CacheStore> store, std::shared_ptr<Transport> inner,
                          std::chrono::seconds max_age = kInfiniteAge)
        : store_(std::move(store)), inner_(std::move(inner)), max_age_(max_age) {}

    HttpResponse get(const std::string& request_key) override {
        if (auto entry = store_->get(request_key, max_age_)) {
            std::lock_guard<std::mutex> lock(mutex_);
            ++hits_;
            if (!oldest_hit_ || entry->fetched_at < *oldest_hit_) oldest_hit_ = entry->fetched_at;
            return HttpResponse{200, std::move(entry->body)};
        }
        HttpResponse response = inner_->get(request_key);
        if (response.status >= 200 && response.status < 300) {
            CacheEntry entry;
            entry.request_key = request_key;
            entry.body = response.body;
            entry.fetched_at = std::chrono::system_clock::now();
            store_->put(entry);
        }
        std::lock_guard<std::mutex> lock(mutex_);
        ++misses_;
        return response;
    }

    int hits() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return hits_;
    }
    int misses() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return misses_;
    }
    std::optional<std::chrono::system_clock::time_point> oldest_hit() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return oldest_hit_;
    }

private:
    std::shared_ptr<CacheStore> store_;
    std::shared_ptr<Transport> inner_;
    std::chrono::seconds max_age_;
    mutable std::mutex mutex_;
    int hits_ = 0;
    int misses_ = 0;
    std::optional<std::chrono::system_clock::time_point> oldest_hit_;
};

} // namespace taxowl
