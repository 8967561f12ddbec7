// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <memory>
#include <string>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "taxowl/error.hpp"
#include "taxowl/strings.hpp"
#include "taxowl/transport.hpp"

namespace taxowl {

/// Live HTTP transport against a GBIF-style API base URL, e.g.
/// "https://api.gbif.org/v1/". Connection-level failures and 5xx responses
/// are reported as retryable; the retry policy itself lives in the client.
class HttpTransport : public Transport {
public:
    explicit HttpTransport(const std::string& base_url) {
        std::string url = base_url;
        auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) {
            throw Error(ErrorCode::Transport, "base URL must include a scheme: " + url);
        }
        auto path_start = url.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            origin_ = url;
            base_path_ = "/";
        } else {
            origin_ = url.substr(0, path_start);
            base_path_ = url.substr(path_start);
        }
        if (base_path_.empty() || base_path_.back() != '/') base_path_ += '/';
    }

    HttpResponse get(const std::string& request_key) override {
        httplib::Client client(origin_);
        client.set_connection_timeout(10, 0);
        client.set_read_timeout(30, 0);
        client.set_follow_location(true);
        auto result = client.Get(base_path_ + request_key);
        if (!result) {
            throw Error(ErrorCode::Transport,
                        "request to " + origin_ + base_path_ + request_key + " failed: " +
                            httplib::to_string(result.error()),
                        /*retryable=*/true);
        }
        return HttpResponse{result->status, result->body};
    }

    const std::string& origin() const { return origin_; }
    const std::string& base_path() const { return base_path_; }

private:
    std::string origin_;    // scheme://host[:port]
    std::string base_path_; // leading and trailing slash
};

} // namespace taxowl
