// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "taxowl/cache_store.hpp"
#include "taxowl/gbif_client.hpp"
#include "taxowl/http_transport.hpp"
#include "taxowl/name_normalizer.hpp"
#include "taxowl/owl_emitter.hpp"
#include "taxowl/owl_merger.hpp"
#include "taxowl/taxonomy_builder.hpp"
#include "taxowl/transport.hpp"

namespace taxowl::cli {

/// Exit codes form the scripting contract: 0 = clean, 2 = output produced
/// but some names failed, 1 = fatal (unreadable input, unwritable output,
/// unusable transport).
inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

struct RunConfig {
    std::vector<std::string> inline_names;
    std::string names_file;
    std::string output_path; // empty or "-" = stdout
    std::string report_path; // empty = derive from output_path
    std::string iri_base = kDefaultClassIriBase;
    std::string lang_tag = "lat";
    int fuzzy_threshold = 90;
    bool allow_fuzzy = false;
    std::string fixtures_dir;
    std::string cache_dir;
    bool refresh = false;
    int parallelism = 4;
    bool comments = false;
    std::string base_url = "https://api.gbif.org/v1/";
};

namespace detail {

struct TransportBundle {
    std::shared_ptr<Transport> transport;
    std::shared_ptr<CacheThroughTransport> cache; // set in cache-through mode
};

inline TransportBundle make_transport(const RunConfig& config) {
    TransportBundle bundle;
    if (!config.fixtures_dir.empty()) {
        bundle.transport = std::make_shared<FixtureTransport>(config.fixtures_dir);
        return bundle;
    }
    auto live = std::make_shared<HttpTransport>(config.base_url);
    if (!config.cache_dir.empty()) {
        auto store = std::make_shared<CacheStore>(config.cache_dir);
        auto max_age = config.refresh ? std::chrono::seconds::zero() : kInfiniteAge;
        bundle.cache = std::make_shared<CacheThroughTransport>(store, live, max_age);
        bundle.transport = bundle.cache;
        return bundle;
    }
    bundle.transport = live;
    return bundle;
}

inline std::optional<Rank> parse_rank_hint(std::string_view word) {
    return rank_from_string(word);
}

/// Names file: one name per line, '#' comment lines, optional trailing
/// tab-separated rank hint (Species/Genus/Subspecies).
inline std::vector<RawNameEntry> read_names_file(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::StoreIo, "cannot read names file " + path);
    }
    std::vector<RawNameEntry> names;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        RawNameEntry entry;
        auto tab = view.find('\t');
        if (tab == std::string_view::npos) {
            entry.raw_text = std::string(view);
        } else {
            entry.raw_text = std::string(trim(view.substr(0, tab)));
            std::string_view hint = trim(view.substr(tab + 1));
            if (!hint.empty()) {
                entry.rank_hint = parse_rank_hint(hint);
                if (!entry.rank_hint) {
                    err << path << ":" << line_number << ": unknown rank hint '" << hint << "'\n";
                    throw Error(ErrorCode::Malformed, "unusable names file");
                }
            }
        }
        if (!entry.raw_text.empty()) names.push_back(std::move(entry));
    }
    return names;
}

inline std::vector<RawNameEntry> gather_names(const RunConfig& config, std::ostream& err) {
    std::vector<RawNameEntry> names;
    if (!config.names_file.empty()) {
        names = read_names_file(config.names_file, err);
    }
    for (const std::string& name : config.inline_names) {
        if (!trim(name).empty()) names.push_back(RawNameEntry{name, std::nullopt});
    }
    return names;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::StoreIo, "cannot write " + path);
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out.good()) {
        throw Error(ErrorCode::StoreIo, "short write to " + path);
    }
}

inline void print_summary(const ConversionReport& report, const TransportBundle& bundle,
                          std::ostream& out) {
    out << "processed " << report.rows.size() << " names: " << report.count(Outcome::Accepted)
        << " accepted, " << report.count(Outcome::SynonymReplaced) << " synonym-replaced, "
        << report.count(Outcome::FuzzyMatched) << " fuzzy, " << report.count(Outcome::Failed)
        << " failed\n";
    for (const ReportRow& row : report.rows) {
        if (row.outcome == Outcome::Failed) {
            out << "  FAILED " << row.input << ": " << row.detail << "\n";
        } else if (row.outcome == Outcome::SynonymReplaced ||
                   row.outcome == Outcome::FuzzyMatched) {
            out << "  " << outcome_name(row.outcome) << " " << row.input << " -> "
                << row.accepted_name << " (" << row.accepted_key << ")\n";
        }
    }
    if (bundle.cache) {
        out << "cache: " << bundle.cache->hits() << " hits, " << bundle.cache->misses()
            << " fetches";
        if (auto oldest = bundle.cache->oldest_hit()) {
            out << " (oldest entry " << format_utc(*oldest) << ")";
        }
        out << "\n";
    }
}

inline BuildOptions build_options(const RunConfig& config) {
    BuildOptions options;
    options.policy.fuzzy_confidence_threshold = config.fuzzy_threshold;
    options.policy.allow_fuzzy = config.allow_fuzzy;
    options.parallelism = config.parallelism;
    return options;
}

} // namespace detail

/// `convert`: resolve names, build the deduplicated graph, write OWL plus a
/// machine-readable report, summarize to `out`.
inline int cmd_convert(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        std::vector<RawNameEntry> names = detail::gather_names(config, err);
        if (names.empty()) {
            err << "error: no input names (use --names or --names-file)\n";
            return kExitFatal;
        }
        if (config.parallelism < 1) {
            err << "error: parallelism must be >= 1\n";
            return kExitFatal;
        }

        detail::TransportBundle bundle = detail::make_transport(config);
        GbifClient client(bundle.transport);

        auto [graph, report] = build(names, client, detail::build_options(config));

        EmitConfig emit_config;
        emit_config.class_iri_base = config.iri_base;
        emit_config.language_tag = config.lang_tag;
        emit_config.comments = config.comments;
        std::string owl = emit(graph, emit_config);

        const bool to_stdout = config.output_path.empty() || config.output_path == "-";
        std::ostream& summary = to_stdout ? err : out;
        if (graph.empty()) {
            err << "warning: empty graph, emitting a document with zero classes\n";
        }
        if (to_stdout) {
            out << owl;
        } else {
            detail::write_file(config.output_path, owl);
            summary << "wrote " << config.output_path << " (" << graph.nodes.size()
                    << " classes)\n";
        }

        std::string report_path = config.report_path;
        if (report_path.empty() && !to_stdout) {
            report_path = config.output_path + ".report.csv";
        }
        if (!report_path.empty()) {
            detail::write_file(report_path, report.to_csv());
            summary << "report: " << report_path << "\n";
        }

        detail::print_summary(report, bundle, summary);
        return report.count(Outcome::Failed) == 0 ? kExitOk : kExitPartial;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
}

/// `check`: report the backbone's verdict per name without producing OWL.
inline int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        std::vector<RawNameEntry> names = detail::gather_names(config, err);
        if (names.empty()) {
            err << "error: no input names (use --names or --names-file)\n";
            return kExitFatal;
        }

        detail::TransportBundle bundle = detail::make_transport(config);
        GbifClient client(bundle.transport);

        struct CheckRow {
            std::string name, status, match_type, confidence, accepted;
        };
        std::vector<CheckRow> rows;
        int failed = 0;
        for (const RawNameEntry& entry : names) {
            CheckRow row;
            row.name = entry.raw_text;
            try {
                NormalizedName normalized = normalize(entry);
                std::vector<std::string> notes;
                TaxonMatch match = taxowl::detail::match_with_fallback(normalized, client, notes);
                row.status = match.status_raw;
                row.match_type = match.match_type_raw;
                row.confidence = std::to_string(match.confidence);
                if (match.status == TaxonomicStatus::Synonym) {
                    if (auto accepted = match.species_name()) {
                        row.accepted = *accepted;
                    } else if (match.accepted_usage_key) {
                        row.accepted = client.get_taxon(*match.accepted_usage_key).canonical_name;
                    }
                }
            } catch (const Error& e) {
                ++failed;
                row.status = "FAILED";
                row.match_type = e.code() == ErrorCode::NoMatch ? "NONE" : "";
                row.accepted = "";
            }
            rows.push_back(std::move(row));
        }

        size_t name_width = 4;
        for (const auto& row : rows) name_width = std::max(name_width, row.name.size());
        out << std::left << std::setw(static_cast<int>(name_width + 2)) << "name"
            << std::setw(10) << "status" << std::setw(12) << "matchType" << std::setw(6) << "conf"
            << "accepted\n";
        for (const auto& row : rows) {
            out << std::left << std::setw(static_cast<int>(name_width + 2)) << row.name
                << std::setw(10) << row.status << std::setw(12) << row.match_type << std::setw(6)
                << row.confidence << row.accepted << "\n";
        }

        if (!config.report_path.empty()) {
            auto field = [](const std::string& s) {
                if (s.find_first_of(",\"\n") == std::string::npos) return s;
                std::string quoted = "\"";
                for (char c : s) quoted += (c == '"') ? std::string("\"\"") : std::string(1, c);
                return quoted + "\"";
            };
            std::ostringstream csv;
            csv << "input,status,matchType,confidence,accepted\n";
            for (const auto& row : rows) {
                csv << field(row.name) << ',' << row.status << ',' << row.match_type << ','
                    << row.confidence << ',' << field(row.accepted) << '\n';
            }
            detail::write_file(config.report_path, csv.str());
        }
        return failed == 0 ? kExitOk : kExitPartial;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
}

/// `merge`: deduplicate classes/labels/edges across documents.
inline int cmd_merge(const std::vector<std::string>& paths, const std::string& output_path,
                     std::ostream& out, std::ostream& err) {
    try {
        if (paths.empty()) {
            err << "error: merge needs at least one input document\n";
            return kExitFatal;
        }
        std::vector<ParsedFragment> fragments;
        fragments.reserve(paths.size());
        for (const std::string& path : paths) {
            std::ifstream in(path, std::ios::binary);
            if (!in) {
                err << "error: cannot read " << path << "\n";
                return kExitFatal;
            }
            std::ostringstream text;
            text << in.rdbuf();
            fragments.push_back(parse_owl(text.str(), path));
        }
        MergeResult merged = merge(fragments);
        for (const std::string& warning : merged.warnings) {
            err << "warning: " << warning << "\n";
        }
        std::string owl = serialize_owl(merged.document);
        if (output_path.empty() || output_path == "-") {
            out << owl;
        } else {
            detail::write_file(output_path, owl);
            err << "wrote " << output_path << " (" << merged.document.classes.size()
                << " classes)\n";
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
}

namespace detail {

inline AxiomKind parse_axiom_kind(std::string_view word) {
    if (word == "some-intersection") return AxiomKind::SomeValuesIntersection;
    if (word == "exactly-1") return AxiomKind::ExactCardinalityOne;
    if (word == "some") return AxiomKind::SomeValuesSingle;
    throw Error(ErrorCode::Malformed, "unknown axiom kind '" + std::string(word) +
                                          "' (expected some-intersection, exactly-1 or some)");
}

inline bool is_iri_token(std::string_view token) {
    return starts_with(token, "http://") || starts_with(token, "https://") ||
           starts_with(token, "urn:");
}

/// Resolves a name or passes an absolute IRI through. Symbolic tokens that
/// are neither fail like any unmatched name.
inline std::string resolve_axiom_term(const std::string& token, GbifClient& client,
                                      const RunConfig& config) {
    if (is_iri_token(token)) return token;
    NormalizedName normalized = normalize(RawNameEntry{token, std::nullopt});
    std::optional<Error> last;
    for (const std::string& candidate : hybrid_candidates(normalized)) {
        try {
            TaxonMatch match = client.match_name(candidate);
            MatchPolicy policy;
            policy.fuzzy_confidence_threshold = config.fuzzy_threshold;
            policy.allow_fuzzy = config.allow_fuzzy;
            ResolvedTaxon taxon = resolve_accepted(match, client, policy);
            return config.iri_base + std::to_string(taxon.accepted_key);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoMatch) throw;
            last = e;
        }
    }
    throw *last;
}

} // namespace detail

/// `axioms`: resolve an axiom spec file through the pipeline and emit the
/// restriction fragment (or append it to an existing document).
inline int cmd_axioms(const RunConfig& config, const std::string& spec_path,
                      const std::string& append_path, std::ostream& out, std::ostream& err) {
    try {
        std::ifstream in(spec_path, std::ios::binary);
        if (!in) {
            err << "error: cannot read axiom spec " << spec_path << "\n";
            return kExitFatal;
        }
        detail::TransportBundle bundle = detail::make_transport(config);
        GbifClient client(bundle.transport);

        std::vector<RestrictionAxiom> axioms;
        std::string line;
        int line_number = 0;
        while (std::getline(in, line)) {
            ++line_number;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::string_view view = trim(line);
            if (view.empty() || view.front() == '#') continue;
            try {
                auto fields = split(view, '|');
                if (fields.size() != 4) {
                    throw Error(ErrorCode::Malformed,
                                "expected 'subject | kind | property | targets'");
                }
                RestrictionAxiom axiom;
                axiom.subject_iri =
                    detail::resolve_axiom_term(std::string(trim(fields[0])), client, config);
                axiom.kind = detail::parse_axiom_kind(trim(fields[1]));
                axiom.property_name = std::string(trim(fields[2]));
                if (axiom.property_name.empty()) {
                    throw Error(ErrorCode::Malformed, "empty property name");
                }
                for (const std::string& target : split(trim(fields[3]), '+')) {
                    std::string token(trim(target));
                    if (token.empty()) {
                        throw Error(ErrorCode::Malformed, "empty target");
                    }
                    axiom.target_iris.push_back(
                        detail::resolve_axiom_term(token, client, config));
                }
                if (axiom.kind == AxiomKind::SomeValuesIntersection &&
                    axiom.target_iris.size() < 2) {
                    throw Error(ErrorCode::Malformed,
                                "some-intersection needs at least two targets");
                }
                if (axiom.kind != AxiomKind::SomeValuesIntersection &&
                    axiom.target_iris.size() != 1) {
                    throw Error(ErrorCode::Malformed, "this kind takes exactly one target");
                }
                axioms.push_back(std::move(axiom));
            } catch (const Error& e) {
                err << "error: " << spec_path << ":" << line_number << ": "
                    << Error(ErrorCode::UnresolvedTarget, e.what()).what() << "\n";
                return kExitFatal;
            }
        }

        std::string fragment = emit_axioms(axioms);
        if (!append_path.empty()) {
            std::ifstream doc_in(append_path, std::ios::binary);
            if (!doc_in) {
                err << "error: cannot read " << append_path << "\n";
                return kExitFatal;
            }
            std::ostringstream text;
            text << doc_in.rdbuf();
            std::string doc = text.str();
            const std::string closing = "</rdf:RDF>";
            auto pos = doc.rfind(closing);
            if (pos == std::string::npos) {
                err << "error: " << append_path << " has no closing </rdf:RDF> to append before\n";
                return kExitFatal;
            }
            std::string indented;
            std::istringstream frag_in(fragment);
            std::string frag_line;
            while (std::getline(frag_in, frag_line)) {
                indented += frag_line.empty() ? std::string() : "    " + frag_line;
                indented += '\n';
            }
            doc.insert(pos, indented + "\n");
            detail::write_file(append_path, doc);
            err << "appended " << axioms.size() << " axioms to " << append_path << "\n";
        } else if (config.output_path.empty() || config.output_path == "-") {
            out << fragment;
        } else {
            detail::write_file(config.output_path, fragment);
            err << "wrote " << config.output_path << "\n";
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
}

/// `cache inspect`: list entries of a cache store.
inline int cmd_cache_inspect(const std::string& cache_dir, std::ostream& out, std::ostream& err) {
    try {
        CacheStore store(cache_dir, /*read_only=*/true);
        auto entries = store.list();
        for (const CacheEntry& entry : entries) {
            out << format_utc(entry.fetched_at) << "  " << entry.request_key;
            if (!entry.backbone_note.empty()) out << "  # " << entry.backbone_note;
            out << "\n";
        }
        out << entries.size() << " entries in " << cache_dir << "\n";
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
}

/// `cache clear`: drop all entries.
inline int cmd_cache_clear(const std::string& cache_dir, std::ostream& out, std::ostream& err) {
    try {
        CacheStore store(cache_dir);
        size_t n = store.list().size();
        store.clear();
        out << "cleared " << n << " entries from " << cache_dir << "\n";
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
}

} // namespace taxowl::cli
