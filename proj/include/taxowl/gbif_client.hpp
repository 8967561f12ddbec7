// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "taxowl/error.hpp"
#include "taxowl/gbif_types.hpp"
#include "taxowl/strings.hpp"
#include "taxowl/transport.hpp"

namespace taxowl {

struct ClientOptions {
    /// Attempts per request on retryable transport failures (connection
    /// errors, 5xx). 4xx responses are never retried.
    int retry_attempts = 3;
    /// First backoff delay; doubles per retry.
    std::chrono::milliseconds retry_base_delay{200};
};

/// Typed client for the GBIF species API. Endpoints are addressed
/// explicitly; the transport decides where the bytes come from. Stateless
/// between requests, safe for concurrent use.
class GbifClient {
public:
    explicit GbifClient(std::shared_ptr<Transport> transport, ClientOptions options = {})
        : transport_(std::move(transport)), options_(options) {}

    static std::string match_request_key(const std::string& name) {
        return "species/match?name=" + percent_encode(name);
    }
    static std::string taxon_request_key(std::uint64_t key) {
        return "species/" + std::to_string(key);
    }
    static std::string synonyms_request_key(std::uint64_t key) {
        return "species/" + std::to_string(key) + "/synonyms";
    }

    /// Looks up a (normalized) scientific name. Throws NoMatch when the
    /// backbone reports matchType NONE; does not itself reject SYNONYM or
    /// FUZZY results — that policy belongs to the caller.
    TaxonMatch match_name(const std::string& name) {
        if (name.empty()) {
            throw Error(ErrorCode::NoMatch, "empty name");
        }
        std::string body = fetch(match_request_key(name), /*not_found_code=*/ErrorCode::NoMatch);
        TaxonMatch match = decode_match(body);
        if (match.is_none()) {
            throw Error(ErrorCode::NoMatch, "no backbone match for '" + name + "'");
        }
        return match;
    }

    TaxonRecord get_taxon(std::uint64_t key) {
        if (key == 0) {
            throw Error(ErrorCode::NotFound, "taxon keys are positive");
        }
        std::string body = fetch(taxon_request_key(key), ErrorCode::NotFound);
        return decode_taxon_record(body);
    }

    /// Names the backbone records as synonyms of an accepted taxon. Only the
    /// first page is fetched; taxa with more synonyms than the page size
    /// (GBIF default 20) are truncated.
    std::vector<TaxonRecord> get_synonyms(std::uint64_t key) {
        if (key == 0) {
            throw Error(ErrorCode::NotFound, "taxon keys are positive");
        }
        std::string body = fetch(synonyms_request_key(key), ErrorCode::NotFound);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Decode, std::string("synonyms response is not valid JSON: ") + e.what());
        }
        auto results = j.find("results");
        if (results == j.end() || !results->is_array()) {
            throw Error(ErrorCode::Decode, "synonyms response lacks a 'results' array");
        }
        std::vector<TaxonRecord> out;
        out.reserve(results->size());
        for (const auto& item : *results) {
            out.push_back(decode_taxon_record(item));
        }
        return out;
    }

    Transport& transport() { return *transport_; }

private:
    std::string fetch(const std::string& request_key, ErrorCode not_found_code) {
        auto delay = options_.retry_base_delay;
        int attempts = options_.retry_attempts < 1 ? 1 : options_.retry_attempts;
        for (int attempt = 1;; ++attempt) {
            try {
                HttpResponse response = transport_->get(request_key);
                if (response.status >= 200 && response.status < 300) {
                    return std::move(response.body);
                }
                if (response.status == 404) {
                    throw Error(not_found_code, "404 for " + request_key);
                }
                bool retryable = response.status >= 500;
                throw Error(ErrorCode::Transport,
                            "HTTP " + std::to_string(response.status) + " for " + request_key,
                            retryable);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Transport || !e.retryable() || attempt >= attempts) {
                    throw;
                }
            }
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
    }

    std::shared_ptr<Transport> transport_;
    ClientOptions options_;
};

} // namespace taxowl
