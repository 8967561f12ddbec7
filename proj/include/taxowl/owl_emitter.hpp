// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taxowl/error.hpp"
#include "taxowl/rank.hpp"
#include "taxowl/taxonomy_builder.hpp"

namespace taxowl {

inline constexpr const char* kRdfNamespace = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr const char* kRdfsNamespace = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr const char* kOwlNamespace = "http://www.w3.org/2002/07/owl#";

/// Default class IRI base: the human-browsable species pages rather than
/// the API records, so emitted IRIs double as linked-data entry points.
inline constexpr const char* kDefaultClassIriBase = "https://www.gbif.org/species/";

struct OwlLabel {
    std::string text;
    std::string lang;

    friend bool operator==(const OwlLabel&, const OwlLabel&) = default;
    friend auto operator<=>(const OwlLabel& a, const OwlLabel& b) {
        if (auto c = a.lang <=> b.lang; c != 0) return c;
        return a.text <=> b.text;
    }
};

struct OwlClass {
    std::string iri;
    std::vector<OwlLabel> labels;
    std::vector<std::string> parents;
    std::optional<Rank> rank;        // known when built from a taxonomy graph
    std::optional<std::uint64_t> key; // numeric IRI tail, used for ordering

    friend bool operator==(const OwlClass&, const OwlClass&) = default;
};

/// Ordered class declarations; serializable byte-exactly to RDF/XML.
struct OwlDocument {
    std::vector<OwlClass> classes;

    friend bool operator==(const OwlDocument&, const OwlDocument&) = default;
};

enum class AxiomKind { SomeValuesIntersection, ExactCardinalityOne, SomeValuesSingle };

struct RestrictionAxiom {
    std::string subject_iri;
    AxiomKind kind = AxiomKind::SomeValuesSingle;
    std::string property_name;
    std::vector<std::string> target_iris;
};

struct EmitConfig {
    std::string class_iri_base = kDefaultClassIriBase;
    /// "lat" per the backbone's Latin labels; "la" for BCP-47 strictness.
    std::string language_tag = "lat";
    /// Human-oriented rank banners ("<!-- Kingdom Animalia -->") before each
    /// class. Not semantic; off by default.
    bool comments = false;
};

namespace detail {

inline std::string xml_escape(std::string_view s, bool attribute) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"':
            if (attribute) out += "&quot;";
            else out += c;
            break;
        default: out += c;
        }
    }
    return out;
}

inline std::optional<std::uint64_t> numeric_iri_tail(std::string_view iri) {
    auto slash = iri.find_last_of('/');
    std::string_view tail = slash == std::string_view::npos ? iri : iri.substr(slash + 1);
    if (tail.empty()) return std::nullopt;
    std::uint64_t value = 0;
    for (char c : tail) {
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return value;
}

// Numeric keys ascending, then non-numeric IRIs lexicographically.
inline bool iri_key_less(const std::string& a, const std::string& b) {
    auto ka = numeric_iri_tail(a);
    auto kb = numeric_iri_tail(b);
    if (ka && kb) {
        if (*ka != *kb) return *ka < *kb;
        return a < b;
    }
    if (ka != kb) return ka.has_value(); // numeric before non-numeric
    return a < b;
}

} // namespace detail

/// Lays the graph out as an ordered document: classes sorted by
/// (rank, key ascending), one label in the configured language, one
/// subclass edge per parent link. The ordering is what makes emission
/// deterministic regardless of construction order.
inline OwlDocument document_from_graph(const TaxonomyGraph& graph, const EmitConfig& config = {}) {
    std::vector<const TaxonomyGraph::Node*> nodes;
    nodes.reserve(graph.nodes.size());
    for (const auto& [key, node] : graph.nodes) {
        nodes.push_back(&node);
    }
    std::sort(nodes.begin(), nodes.end(), [](const auto* a, const auto* b) {
        if (a->rank != b->rank) return is_higher_rank(a->rank, b->rank);
        return a->key < b->key;
    });

    OwlDocument doc;
    doc.classes.reserve(nodes.size());
    for (const auto* node : nodes) {
        OwlClass cls;
        cls.iri = config.class_iri_base + std::to_string(node->key);
        cls.labels.push_back(OwlLabel{node->label, config.language_tag});
        if (node->parent) {
            cls.parents.push_back(config.class_iri_base + std::to_string(*node->parent));
        }
        cls.rank = node->rank;
        cls.key = node->key;
        doc.classes.push_back(std::move(cls));
    }
    return doc;
}

/// Serializes a document to the RDF/XML dialect: rdf:RDF root with the
/// rdf/rdfs/owl namespaces, one owl:Class per entry, rdfs:label with a
/// language tag, rdfs:subClassOf per parent. UTF-8, LF line endings,
/// 4-space indent, rdf:about before children — the byte-exact contract
/// golden files rely on.
inline std::string serialize_owl(const OwlDocument& doc, bool comments = false) {
    std::string out;
    out += "<rdf:RDF xmlns:rdf=\"";
    out += kRdfNamespace;
    out += "\"\n         xmlns:rdfs=\"";
    out += kRdfsNamespace;
    out += "\"\n         xmlns:owl=\"";
    out += kOwlNamespace;
    out += "\">\n";
    for (const OwlClass& cls : doc.classes) {
        out += '\n';
        if (comments && cls.rank && !cls.labels.empty()) {
            out += "    <!-- " + rank_title(*cls.rank) + " " + cls.labels.front().text + " -->\n";
        }
        out += "    <owl:Class rdf:about=\"" + detail::xml_escape(cls.iri, true) + "\">\n";
        for (const OwlLabel& label : cls.labels) {
            out += "        <rdfs:label";
            if (!label.lang.empty()) {
                out += " xml:lang=\"" + detail::xml_escape(label.lang, true) + "\"";
            }
            out += ">" + detail::xml_escape(label.text, false) + "</rdfs:label>\n";
        }
        for (const std::string& parent : cls.parents) {
            out += "        <rdfs:subClassOf rdf:resource=\"" + detail::xml_escape(parent, true) +
                   "\"/>\n";
        }
        out += "    </owl:Class>\n";
    }
    out += "\n</rdf:RDF>\n";
    return out;
}

/// Graph to RDF/XML text. An empty graph is legal and yields a document
/// with the namespace header and zero classes; callers may surface that as
/// a warning.
inline std::string emit(const TaxonomyGraph& graph, const EmitConfig& config = {}) {
    return serialize_owl(document_from_graph(graph, config), config.comments);
}

/// Renders restriction axioms in the functional-style XML vocabulary:
/// an existential over an intersection for hybrid parentage, a qualified
/// exact-cardinality-1 for member-of-taxon, or a plain existential.
inline std::string emit_axioms(const std::vector<RestrictionAxiom>& axioms) {
    std::string out;
    for (const RestrictionAxiom& axiom : axioms) {
        if (axiom.kind == AxiomKind::SomeValuesIntersection) {
            if (axiom.target_iris.size() < 2) {
                throw Error(ErrorCode::Malformed,
                            "intersection restriction needs at least two targets (subject " +
                                axiom.subject_iri + ")");
            }
        } else if (axiom.target_iris.size() != 1) {
            throw Error(ErrorCode::Malformed, "restriction needs exactly one target (subject " +
                                                  axiom.subject_iri + ")");
        }
        if (!out.empty()) out += '\n';
        out += "<Class IRI=\"" + detail::xml_escape(axiom.subject_iri, true) + "\"/>\n";
        const std::string property =
            "    <ObjectProperty IRI=\"" + detail::xml_escape(axiom.property_name, true) + "\"/>\n";
        switch (axiom.kind) {
        case AxiomKind::SomeValuesIntersection:
            out += "<ObjectSomeValuesFrom>\n";
            out += property;
            out += "    <ObjectIntersectionOf>\n";
            for (const std::string& target : axiom.target_iris) {
                out += "        <Class IRI=\"" + detail::xml_escape(target, true) + "\"/>\n";
            }
            out += "    </ObjectIntersectionOf>\n";
            out += "</ObjectSomeValuesFrom>\n";
            break;
        case AxiomKind::ExactCardinalityOne:
            out += "<ObjectExactCardinality cardinality=\"1\">\n";
            out += property;
            out += "    <Class IRI=\"" + detail::xml_escape(axiom.target_iris.front(), true) +
                   "\"/>\n";
            out += "</ObjectExactCardinality>\n";
            break;
        case AxiomKind::SomeValuesSingle:
            out += "<ObjectSomeValuesFrom>\n";
            out += property;
            out += "    <Class IRI=\"" + detail::xml_escape(axiom.target_iris.front(), true) +
                   "\"/>\n";
            out += "</ObjectSomeValuesFrom>\n";
            break;
        }
    }
    return out;
}

} // namespace taxowl
