// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taxowl/error.hpp"
#include "taxowl/rank.hpp"
#include "taxowl/strings.hpp"

namespace taxowl {

struct RawNameEntry {
    std::string raw_text;
    std::optional<Rank> rank_hint;
};

enum class Repair { Trimmed, Recapitalized, HybridNormalized };

inline constexpr std::string_view repair_name(Repair r) {
    switch (r) {
    case Repair::Trimmed: return "TRIMMED";
    case Repair::Recapitalized: return "RECAPITALIZED";
    case Repair::HybridNormalized: return "HYBRID_NORMALIZED";
    }
    return "UNKNOWN";
}

/// A cleaned scientific name: genus capitalized, epithets lowercase,
/// hybrid marker attached to the token it qualifies.
struct NormalizedName {
    std::string canonical_text;
    std::optional<Rank> rank_hint;
    bool is_hybrid = false;
    std::vector<Repair> repairs;

    friend bool operator==(const NormalizedName&, const NormalizedName&) = default;
};

namespace detail {

inline constexpr std::string_view kHybridMarker = "\xC3\x97"; // U+00D7 ×

inline bool is_ascii_letter(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_marker_token(std::string_view t) {
    return t == kHybridMarker || t == "x" || t == "X";
}

inline bool has_marker_prefix(std::string_view t) {
    return t.size() > kHybridMarker.size() && starts_with(t, kHybridMarker);
}

// Letters (ASCII or any UTF-8 multi-byte character) and internal hyphens.
// Digits and other punctuation have no place in a scientific name; the
// hybrid marker is handled before this check.
inline void validate_token(std::string_view token, std::string_view raw) {
    bool has_letter = false;
    for (size_t i = 0; i < token.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(token[i]);
        if (is_ascii_letter(static_cast<char>(c))) {
            has_letter = true;
            continue;
        }
        if (c == '-') continue;
        if (c >= 0x80) {
            if (token.substr(i, kHybridMarker.size()) == kHybridMarker) {
                throw Error(ErrorCode::Malformed,
                            "misplaced hybrid marker in '" + std::string(raw) + "'");
            }
            has_letter = true;
            continue;
        }
        throw Error(ErrorCode::Malformed, "disallowed character '" + std::string(1, token[i]) +
                                              "' in '" + std::string(raw) + "'");
    }
    if (!has_letter) {
        throw Error(ErrorCode::Malformed, "token without letters in '" + std::string(raw) + "'");
    }
}

// Capitalized-genus form: one leading uppercase letter, lowercase after.
inline bool recapitalize_genus(std::string& t) {
    bool changed = false;
    bool first = true;
    for (char& c : t) {
        if (!is_ascii_letter(c)) continue;
        if (first) {
            if (c >= 'a' && c <= 'z') {
                c = static_cast<char>(c - 'a' + 'A');
                changed = true;
            }
            first = false;
        } else if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
            changed = true;
        }
    }
    return changed;
}

inline bool lowercase_epithet(std::string& t) {
    bool changed = false;
    for (char& c : t) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
            changed = true;
        }
    }
    return changed;
}

} // namespace detail

/// Repairs a raw name into the form the backbone expects. The nomenclature
/// convention is genus capitalized, specific epithets lowercase; names that
/// violate it are repaired (never rejected) and each change is tagged.
/// Typos are deliberately NOT corrected here — a failed exact match falls
/// back to the backbone's own fuzzy matching downstream.
inline NormalizedName normalize(const RawNameEntry& entry) {
    std::string_view trimmed = trim(entry.raw_text);
    if (trimmed.empty()) {
        throw Error(ErrorCode::Malformed, "empty name");
    }

    std::vector<std::string> tokens = split_whitespace(trimmed);
    NormalizedName result;
    bool respaced = false;
    {
        std::string joined;
        for (size_t i = 0; i < tokens.size(); ++i) {
            if (i) joined += ' ';
            joined += tokens[i];
        }
        if (joined != entry.raw_text) {
            // Leading/trailing whitespace or collapsed runs.
            respaced = true;
        }
    }

    // Fold standalone marker tokens ("×", "x") onto the token they qualify.
    std::vector<std::string> folded;
    bool marker_attached_change = false;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (detail::is_marker_token(tokens[i])) {
            if (i + 1 >= tokens.size()) {
                throw Error(ErrorCode::Malformed,
                            "dangling hybrid marker in '" + entry.raw_text + "'");
            }
            if (result.is_hybrid) {
                throw Error(ErrorCode::Malformed,
                            "multiple hybrid markers in '" + entry.raw_text + "'");
            }
            result.is_hybrid = true;
            marker_attached_change = true;
            folded.push_back(std::string(detail::kHybridMarker) + tokens[i + 1]);
            ++i;
        } else if (detail::has_marker_prefix(tokens[i])) {
            if (result.is_hybrid) {
                throw Error(ErrorCode::Malformed,
                            "multiple hybrid markers in '" + entry.raw_text + "'");
            }
            result.is_hybrid = true;
            folded.push_back(tokens[i]);
        } else {
            folded.push_back(tokens[i]);
        }
    }
    tokens = std::move(folded);

    bool recapitalized = false;
    for (size_t i = 0; i < tokens.size(); ++i) {
        std::string& token = tokens[i];
        bool attached = detail::has_marker_prefix(token);
        std::string body = attached ? token.substr(detail::kHybridMarker.size()) : token;
        detail::validate_token(body, entry.raw_text);
        if (i == 0 && !attached) {
            recapitalized |= detail::recapitalize_genus(body);
        } else if (i == 0) {
            // Intergeneric hybrid written with a leading marker: the part
            // after the marker is a genus name.
            recapitalized |= detail::recapitalize_genus(body);
        } else {
            recapitalized |= detail::lowercase_epithet(body);
        }
        token = attached ? std::string(detail::kHybridMarker) + body : body;
    }

    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) result.canonical_text += ' ';
        result.canonical_text += tokens[i];
    }

    if (respaced) result.repairs.push_back(Repair::Trimmed);
    if (recapitalized) result.repairs.push_back(Repair::Recapitalized);
    if (marker_attached_change) result.repairs.push_back(Repair::HybridNormalized);

    if (entry.rank_hint) {
        result.rank_hint = entry.rank_hint;
    } else {
        switch (tokens.size()) {
        case 1: result.rank_hint = Rank::Genus; break;
        case 2: result.rank_hint = Rank::Species; break;
        case 3: result.rank_hint = Rank::Subspecies; break;
        default: break; // leave unknown
        }
    }
    return result;
}

/// Query texts to try against the backbone, most specific first. Hybrid
/// catalogs disagree on the marker, so hybrids are queried with the
/// ×-attached form first and the marker-free form second; both are accepted
/// by the match endpoint.
inline std::vector<std::string> hybrid_candidates(const NormalizedName& name) {
    if (!name.is_hybrid) {
        return {name.canonical_text};
    }
    std::string bare;
    for (const std::string& token : split_whitespace(name.canonical_text)) {
        if (!bare.empty()) bare += ' ';
        if (detail::has_marker_prefix(token)) {
            bare += token.substr(detail::kHybridMarker.size());
        } else {
            bare += token;
        }
    }
    return {name.canonical_text, bare};
}

} // namespace taxowl
