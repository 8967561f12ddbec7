// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace taxowl {

enum class ErrorCode {
    NoMatch,             // match endpoint returned matchType NONE (or 404)
    NotFound,            // taxon key unknown to the backbone
    Transport,           // network / IO failure while talking to the API
    Decode,              // response body is missing required fields
    Malformed,           // input name cannot be normalized
    UnresolvableSynonym, // SYNONYM status without any accepted reference
    LowConfidence,       // match rejected by the acceptance policy
    LabelConflict,       // one key carries two different labels
    StoreIo,             // cache store could not read or write
    MalformedXml,        // document is not well-formed XML
    UnknownDialect,      // XML element outside the supported vocabulary
    ParentCycle,         // merged subclass edges form a cycle
    UnresolvedTarget,    // axiom subject/target could not be resolved
    EmptyGraph,          // nothing to emit
};

constexpr std::string_view error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::NoMatch: return "NoMatch";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::Decode: return "Decode";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::UnresolvableSynonym: return "UnresolvableSynonym";
    case ErrorCode::LowConfidence: return "LowConfidence";
    case ErrorCode::LabelConflict: return "LabelConflict";
    case ErrorCode::StoreIo: return "StoreIo";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::UnknownDialect: return "UnknownDialect";
    case ErrorCode::ParentCycle: return "ParentCycle";
    case ErrorCode::UnresolvedTarget: return "UnresolvedTarget";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, bool retryable = false)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code),
          retryable_(retryable) {}

    ErrorCode code() const { return code_; }

    /// Transient transport failures may be retried; everything else may not.
    bool retryable() const { return retryable_; }

private:
    ErrorCode code_;
    bool retryable_;
};

} // namespace taxowl
