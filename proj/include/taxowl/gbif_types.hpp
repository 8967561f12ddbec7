// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "taxowl/error.hpp"
#include "taxowl/rank.hpp"

namespace taxowl {

/// Name usage status in the backbone. OTHER preserves vocabulary the
/// backbone may add over time; the raw string is kept alongside.
enum class TaxonomicStatus { Accepted, Synonym, Doubtful, Other };

enum class MatchType { Exact, Fuzzy, HigherRank, None, Other };

inline TaxonomicStatus status_from_string(std::string_view s) {
    if (s == "ACCEPTED") return TaxonomicStatus::Accepted;
    if (s == "SYNONYM") return TaxonomicStatus::Synonym;
    if (s == "DOUBTFUL") return TaxonomicStatus::Doubtful;
    return TaxonomicStatus::Other;
}

inline MatchType match_type_from_string(std::string_view s) {
    if (s == "EXACT") return MatchType::Exact;
    if (s == "FUZZY") return MatchType::Fuzzy;
    if (s == "HIGHERRANK") return MatchType::HigherRank;
    if (s == "NONE") return MatchType::None;
    return MatchType::Other;
}

/// Decoded `species/match` response.
///
/// For SYNONYM matches the backbone reports the ACCEPTED taxon's
/// classification in the per-rank fields: rank_keys[SPECIES] is the accepted
/// species key while usage_key is the synonym's own key, and accepted_usage_key
/// points at the accepted usage. For non-synonym matches usage_key equals
/// rank_keys[rank].
struct TaxonMatch {
    std::uint64_t usage_key = 0;
    std::string scientific_name;
    std::string canonical_name;
    Rank rank = Rank::Species;
    TaxonomicStatus status = TaxonomicStatus::Other;
    std::string status_raw;
    int confidence = 0;
    MatchType match_type = MatchType::None;
    std::string match_type_raw;
    bool synonym = false;
    std::map<Rank, std::string> rank_names;
    std::map<Rank, std::uint64_t> rank_keys;
    std::optional<std::uint64_t> accepted_usage_key;

    bool is_none() const { return match_type == MatchType::None; }

    /// Accepted species name carried on synonym matches (absent for genus
    /// and higher-rank queries without a species level).
    std::optional<std::string> species_name() const {
        auto it = rank_names.find(Rank::Species);
        if (it == rank_names.end()) return std::nullopt;
        return it->second;
    }
    std::optional<std::uint64_t> species_key() const {
        auto it = rank_keys.find(Rank::Species);
        if (it == rank_keys.end()) return std::nullopt;
        return it->second;
    }

    friend bool operator==(const TaxonMatch&, const TaxonMatch&) = default;
};

/// Decoded `species/{key}` record.
struct TaxonRecord {
    std::uint64_t key = 0;
    std::string scientific_name;
    std::string canonical_name;
    Rank rank = Rank::Species;
    TaxonomicStatus status = TaxonomicStatus::Other;
    std::string status_raw;
    std::optional<std::uint64_t> parent_key;
    std::optional<std::string> vernacular_name;
    std::optional<std::uint64_t> num_descendants;

    friend bool operator==(const TaxonRecord&, const TaxonRecord&) = default;
};

namespace detail {

inline std::uint64_t require_key(const nlohmann::json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_number_unsigned() || it->get<std::uint64_t>() == 0) {
        throw Error(ErrorCode::Decode, std::string("missing or invalid field '") + field + "'");
    }
    return it->get<std::uint64_t>();
}

inline std::string require_string(const nlohmann::json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_string()) {
        throw Error(ErrorCode::Decode, std::string("missing or invalid field '") + field + "'");
    }
    return it->get<std::string>();
}

inline Rank require_rank(const nlohmann::json& j, const char* field) {
    auto r = rank_from_string(require_string(j, field));
    if (!r) {
        throw Error(ErrorCode::Decode, std::string("unrecognized rank in field '") + field + "'");
    }
    return *r;
}

// JSON field names for the per-rank name/key pairs of a match response.
struct RankField {
    Rank rank;
    const char* name;
    const char* key;
};
inline constexpr RankField kRankFields[] = {
    {Rank::Kingdom, "kingdom", "kingdomKey"}, {Rank::Phylum, "phylum", "phylumKey"},
    {Rank::Class, "class", "classKey"},       {Rank::Order, "order", "orderKey"},
    {Rank::Family, "family", "familyKey"},    {Rank::Genus, "genus", "genusKey"},
    {Rank::Species, "species", "speciesKey"},
};

} // namespace detail

/// Decodes a raw match response body. Returns a NONE match (rather than
/// throwing) when the backbone found nothing; the caller decides policy.
inline TaxonMatch decode_match(const std::string& body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Decode, std::string("match response is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw Error(ErrorCode::Decode, "match response is not a JSON object");
    }

    TaxonMatch m;
    m.match_type_raw = detail::require_string(j, "matchType");
    m.match_type = match_type_from_string(m.match_type_raw);
    if (j.contains("confidence") && j["confidence"].is_number_integer()) {
        m.confidence = j["confidence"].get<int>();
    }
    if (m.is_none()) {
        return m;
    }

    m.usage_key = detail::require_key(j, "usageKey");
    m.scientific_name = detail::require_string(j, "scientificName");
    m.canonical_name = detail::require_string(j, "canonicalName");
    m.rank = detail::require_rank(j, "rank");
    m.status_raw = detail::require_string(j, "status");
    m.status = status_from_string(m.status_raw);
    auto syn = j.find("synonym");
    if (syn == j.end() || !syn->is_boolean()) {
        throw Error(ErrorCode::Decode, "missing or invalid field 'synonym'");
    }
    m.synonym = syn->get<bool>();
    if (m.status != TaxonomicStatus::Other && m.synonym != (m.status == TaxonomicStatus::Synonym)) {
        throw Error(ErrorCode::Decode, "synonym flag disagrees with status '" + m.status_raw + "'");
    }
    if (auto it = j.find("acceptedUsageKey"); it != j.end() && it->is_number_unsigned()) {
        m.accepted_usage_key = it->get<std::uint64_t>();
    }

    for (const auto& f : detail::kRankFields) {
        bool has_name = j.contains(f.name) && j[f.name].is_string();
        bool has_key = j.contains(f.key) && j[f.key].is_number_unsigned();
        if (has_name != has_key) {
            throw Error(ErrorCode::Decode,
                        std::string("rank fields out of step: '") + f.name + "' vs '" + f.key + "'");
        }
        if (has_name) {
            m.rank_names[f.rank] = j[f.name].get<std::string>();
            m.rank_keys[f.rank] = j[f.key].get<std::uint64_t>();
        }
    }

    // Non-synonym matches carry their own key at the matched rank.
    if (!m.synonym && m.rank != Rank::Subspecies) {
        auto it = m.rank_keys.find(m.rank);
        if (it != m.rank_keys.end() && it->second != m.usage_key) {
            throw Error(ErrorCode::Decode, "usageKey disagrees with " + std::string(rank_name(m.rank)) +
                                               " key for an accepted match");
        }
    }
    return m;
}

inline TaxonRecord decode_taxon_record(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw Error(ErrorCode::Decode, "taxon record is not a JSON object");
    }
    TaxonRecord r;
    r.key = detail::require_key(j, "key");
    r.scientific_name = detail::require_string(j, "scientificName");
    r.canonical_name = detail::require_string(j, "canonicalName");
    r.rank = detail::require_rank(j, "rank");
    r.status_raw = detail::require_string(j, "taxonomicStatus");
    r.status = status_from_string(r.status_raw);
    if (auto it = j.find("parentKey"); it != j.end() && it->is_number_unsigned()) {
        r.parent_key = it->get<std::uint64_t>();
    }
    if (auto it = j.find("vernacularName"); it != j.end() && it->is_string()) {
        r.vernacular_name = it->get<std::string>();
    }
    if (auto it = j.find("numDescendants"); it != j.end() && it->is_number_unsigned()) {
        r.num_descendants = it->get<std::uint64_t>();
    }
    return r;
}

inline TaxonRecord decode_taxon_record(const std::string& body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Decode, std::string("taxon record is not valid JSON: ") + e.what());
    }
    return decode_taxon_record(j);
}

} // namespace taxowl
