// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "taxowl/error.hpp"
#include "taxowl/gbif_client.hpp"
#include "taxowl/name_normalizer.hpp"
#include "taxowl/rank.hpp"

namespace taxowl {

struct ChainLink {
    Rank rank;
    std::string name;
    std::uint64_t key = 0;

    friend bool operator==(const ChainLink&, const ChainLink&) = default;
};

enum class Resolution { Accepted, SynonymReplaced, FuzzyMatched };

/// One input name resolved to its accepted taxon, with the full ancestor
/// chain from kingdom down to the taxon's own rank. Synonyms are replaced:
/// the chain never contains the superseded name.
struct ResolvedTaxon {
    std::string input_name;
    std::string accepted_name;
    std::uint64_t accepted_key = 0;
    std::vector<ChainLink> chain;
    Resolution resolution = Resolution::Accepted;
    TaxonMatch original_match;
    std::vector<std::string> notes;
};

/// Deduplicated rank-ordered tree keyed by usage key. One node per key;
/// every parent sits at a strictly higher rank, so the structure is acyclic
/// by construction.
struct TaxonomyGraph {
    struct Node {
        std::uint64_t key = 0;
        std::string label;
        Rank rank = Rank::Kingdom;
        std::optional<std::uint64_t> parent;

        friend bool operator==(const Node&, const Node&) = default;
    };

    std::map<std::uint64_t, Node> nodes;
    std::set<std::uint64_t> roots;

    bool empty() const { return nodes.empty(); }

    friend bool operator==(const TaxonomyGraph&, const TaxonomyGraph&) = default;
};

enum class Outcome { Accepted, SynonymReplaced, FuzzyMatched, Failed };

inline constexpr std::string_view outcome_name(Outcome o) {
    switch (o) {
    case Outcome::Accepted: return "ACCEPTED";
    case Outcome::SynonymReplaced: return "SYNONYM_REPLACED";
    case Outcome::FuzzyMatched: return "FUZZY_MATCHED";
    case Outcome::Failed: return "FAILED";
    }
    return "UNKNOWN";
}

struct ReportRow {
    std::string input;
    std::string normalized;
    Outcome outcome = Outcome::Failed;
    std::string match_type;  // raw backbone vocabulary, empty before a match
    int confidence = -1;     // negative = not applicable
    std::string accepted_name;
    std::uint64_t accepted_key = 0;
    std::string detail;
};

/// Per-input-name outcomes, order-preserving (one row per input).
struct ConversionReport {
    std::vector<ReportRow> rows;

    int count(Outcome o) const {
        int n = 0;
        for (const auto& r : rows) {
            if (r.outcome == o) ++n;
        }
        return n;
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "input,normalized,outcome,matchType,confidence,acceptedName,acceptedKey\n";
        for (const auto& r : rows) {
            os << csv_field(r.input) << ',' << csv_field(r.normalized) << ','
               << outcome_name(r.outcome) << ',' << csv_field(r.match_type) << ',';
            if (r.confidence >= 0) os << r.confidence;
            os << ',' << csv_field(r.accepted_name) << ',';
            if (r.accepted_key != 0) os << r.accepted_key;
            os << '\n';
        }
        return os.str();
    }

private:
    static std::string csv_field(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += "\"\"";
            else out += c;
        }
        out += '"';
        return out;
    }
};

/// Match-acceptance policy: EXACT always passes; FUZZY passes when allowed
/// or confident enough, and is always flagged; HIGHERRANK never passes.
struct MatchPolicy {
    int fuzzy_confidence_threshold = 90;
    bool allow_fuzzy = false;
};

/// Resolves a backbone match to its accepted taxon. For synonyms the
/// accepted usage is fetched and the chain reflects the accepted taxon
/// only; the per-rank fields of a synonym match already describe the
/// accepted classification, so chain and leaf agree.
inline ResolvedTaxon resolve_accepted(const TaxonMatch& match, GbifClient& client,
                                      const MatchPolicy& policy = {}) {
    if (match.is_none()) {
        throw Error(ErrorCode::NoMatch, "cannot resolve a NONE match");
    }

    switch (match.match_type) {
    case MatchType::Exact:
        break;
    case MatchType::Fuzzy:
        if (!policy.allow_fuzzy && match.confidence < policy.fuzzy_confidence_threshold) {
            throw Error(ErrorCode::LowConfidence,
                        "fuzzy match '" + match.canonical_name + "' at confidence " +
                            std::to_string(match.confidence) + " below threshold " +
                            std::to_string(policy.fuzzy_confidence_threshold));
        }
        break;
    case MatchType::HigherRank:
        throw Error(ErrorCode::LowConfidence,
                    "only a higher rank matched ('" + match.canonical_name + "')");
    default:
        throw Error(ErrorCode::LowConfidence, "unusable match type '" + match.match_type_raw + "'");
    }

    ResolvedTaxon taxon;
    taxon.original_match = match;

    Rank leaf_rank;
    if (match.status == TaxonomicStatus::Synonym) {
        std::optional<std::uint64_t> accepted_key = match.accepted_usage_key;
        if (!accepted_key) accepted_key = match.species_key();
        if (!accepted_key) {
            throw Error(ErrorCode::UnresolvableSynonym,
                        "'" + match.canonical_name + "' is a synonym without an accepted reference");
        }
        TaxonRecord accepted = client.get_taxon(*accepted_key);
        if (accepted.status == TaxonomicStatus::Synonym) {
            throw Error(ErrorCode::UnresolvableSynonym,
                        "accepted reference of '" + match.canonical_name +
                            "' is itself a synonym (" + accepted.canonical_name + ")");
        }
        taxon.accepted_key = accepted.key;
        taxon.accepted_name = accepted.canonical_name;
        leaf_rank = accepted.rank;
        taxon.resolution = Resolution::SynonymReplaced;
        taxon.notes.push_back("synonym of " + accepted.canonical_name);
        if (match.match_type == MatchType::Fuzzy) {
            taxon.notes.push_back("matched fuzzily at confidence " +
                                  std::to_string(match.confidence));
        }
    } else {
        taxon.accepted_key = match.usage_key;
        taxon.accepted_name = match.canonical_name;
        leaf_rank = match.rank;
        taxon.resolution = match.match_type == MatchType::Fuzzy ? Resolution::FuzzyMatched
                                                                : Resolution::Accepted;
        if (match.match_type == MatchType::Fuzzy) {
            taxon.notes.push_back("matched fuzzily at confidence " +
                                  std::to_string(match.confidence));
        }
    }

    for (Rank r : kAllRanks) {
        if (!is_higher_rank(r, leaf_rank)) break;
        auto key_it = match.rank_keys.find(r);
        if (key_it == match.rank_keys.end()) {
            taxon.notes.push_back("backbone record has no " + std::string(rank_name(r)) + " level");
            continue;
        }
        taxon.chain.push_back(ChainLink{r, match.rank_names.at(r), key_it->second});
    }
    taxon.chain.push_back(ChainLink{leaf_rank, taxon.accepted_name, taxon.accepted_key});
    return taxon;
}

/// Adds one resolved chain to the graph. Every chain element ends up in the
/// graph exactly once; re-adding an existing key with the identical label is
/// a no-op. A key that reappears with a different label, rank or parent
/// signals corpus inconsistency and fails loudly.
inline void accumulate(const ResolvedTaxon& taxon, TaxonomyGraph& graph) {
    if (taxon.chain.empty()) {
        throw Error(ErrorCode::Malformed, "empty resolution chain for '" + taxon.input_name + "'");
    }
    for (size_t i = 1; i < taxon.chain.size(); ++i) {
        if (!is_higher_rank(taxon.chain[i - 1].rank, taxon.chain[i].rank)) {
            throw Error(ErrorCode::Malformed, "chain ranks not strictly descending for '" +
                                                  taxon.input_name + "'");
        }
    }

    for (size_t i = 0; i < taxon.chain.size(); ++i) {
        const ChainLink& link = taxon.chain[i];
        std::optional<std::uint64_t> parent;
        if (i > 0) parent = taxon.chain[i - 1].key;

        auto it = graph.nodes.find(link.key);
        if (it == graph.nodes.end()) {
            graph.nodes[link.key] = TaxonomyGraph::Node{link.key, link.name, link.rank, parent};
            if (parent) {
                graph.roots.erase(link.key);
            } else {
                graph.roots.insert(link.key);
            }
            continue;
        }

        TaxonomyGraph::Node& node = it->second;
        if (node.label != link.name) {
            throw Error(ErrorCode::LabelConflict,
                        "key " + std::to_string(link.key) + " already labelled '" + node.label +
                            "', refusing '" + link.name + "'");
        }
        if (node.rank != link.rank) {
            throw Error(ErrorCode::LabelConflict,
                        "key " + std::to_string(link.key) + " already ranked " +
                            std::string(rank_name(node.rank)) + ", refusing " +
                            std::string(rank_name(link.rank)));
        }
        if (parent) {
            if (!node.parent) {
                // Previously seen as the top of a gapped chain; now we know
                // its parent.
                node.parent = parent;
                graph.roots.erase(node.key);
            } else if (*node.parent != *parent) {
                throw Error(ErrorCode::LabelConflict,
                            "key " + std::to_string(link.key) + " already parented to " +
                                std::to_string(*node.parent) + ", refusing " +
                                std::to_string(*parent));
            }
        }
    }
}

struct BuildOptions {
    MatchPolicy policy;
    int parallelism = 4;
};

namespace detail {

struct NameResolution {
    std::optional<ResolvedTaxon> taxon;
    ReportRow row;
};

/// Matches the candidates of one normalized name in order; falls back to
/// the species-level binomial when a trinomial is unknown to the backbone.
inline TaxonMatch match_with_fallback(const NormalizedName& name, GbifClient& client,
                                      std::vector<std::string>& notes) {
    std::optional<Error> last_no_match;
    for (const std::string& candidate : hybrid_candidates(name)) {
        try {
            return client.match_name(candidate);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoMatch) throw;
            last_no_match = e;
        }
    }
    auto tokens = split_whitespace(name.canonical_text);
    if (name.rank_hint == Rank::Subspecies && tokens.size() == 3) {
        std::string binomial = tokens[0] + " " + tokens[1];
        TaxonMatch match = client.match_name(binomial); // NoMatch propagates
        notes.push_back("trinomial not in backbone; downgraded to species-level query '" +
                        binomial + "'");
        return match;
    }
    throw *last_no_match;
}

inline NameResolution resolve_one(const RawNameEntry& entry, GbifClient& client,
                                  const MatchPolicy& policy) {
    NameResolution out;
    out.row.input = entry.raw_text;
    try {
        NormalizedName normalized = normalize(entry);
        out.row.normalized = normalized.canonical_text;

        std::vector<std::string> notes;
        TaxonMatch match = match_with_fallback(normalized, client, notes);
        out.row.match_type = match.match_type_raw;
        out.row.confidence = match.confidence;

        ResolvedTaxon taxon = resolve_accepted(match, client, policy);
        taxon.input_name = entry.raw_text;
        taxon.notes.insert(taxon.notes.begin(), notes.begin(), notes.end());

        switch (taxon.resolution) {
        case Resolution::Accepted: out.row.outcome = Outcome::Accepted; break;
        case Resolution::SynonymReplaced: out.row.outcome = Outcome::SynonymReplaced; break;
        case Resolution::FuzzyMatched: out.row.outcome = Outcome::FuzzyMatched; break;
        }
        out.row.accepted_name = taxon.accepted_name;
        out.row.accepted_key = taxon.accepted_key;
        std::string detail;
        for (const auto& note : taxon.notes) {
            if (!detail.empty()) detail += "; ";
            detail += note;
        }
        out.row.detail = detail;
        out.taxon = std::move(taxon);
    } catch (const Error& e) {
        out.row.outcome = Outcome::Failed;
        out.row.detail = e.what();
    }
    return out;
}

} // namespace detail

/// Resolves every input name and accumulates one deduplicated graph.
/// Per-name failures become FAILED report entries and never abort the
/// batch; a LabelConflict while accumulating (one key, two labels) still
/// propagates, because it means the corpus contradicts itself.
///
/// Distinct names are resolved in parallel (bounded by
/// BuildOptions::parallelism); accumulation runs sequentially in input
/// order, so the result equals the sequential one regardless of response
/// arrival order.
inline std::pair<TaxonomyGraph, ConversionReport> build(const std::vector<RawNameEntry>& names,
                                                        GbifClient& client,
                                                        const BuildOptions& options = {}) {
    std::vector<detail::NameResolution> results(names.size());

    int workers = options.parallelism < 1 ? 1 : options.parallelism;
    if (workers > static_cast<int>(names.size())) workers = static_cast<int>(names.size());

    if (workers <= 1) {
        for (size_t i = 0; i < names.size(); ++i) {
            results[i] = detail::resolve_one(names[i], client, options.policy);
        }
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < names.size(); i = next.fetch_add(1)) {
                    results[i] = detail::resolve_one(names[i], client, options.policy);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    TaxonomyGraph graph;
    ConversionReport report;
    report.rows.reserve(names.size());
    for (auto& result : results) {
        if (result.taxon) {
            accumulate(*result.taxon, graph);
        }
        report.rows.push_back(std::move(result.row));
    }
    return {std::move(graph), std::move(report)};
}

} // namespace taxowl
