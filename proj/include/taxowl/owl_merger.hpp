// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "taxowl/error.hpp"
#include "taxowl/owl_emitter.hpp"
#include "taxowl/xml.hpp"

namespace taxowl {

struct ParsedClass {
    std::string iri;
    std::vector<OwlLabel> labels;
    std::vector<std::string> parents;
    int line = 0;
};

/// Lossless capture of one document's classes, labels and subclass edges.
struct ParsedFragment {
    std::vector<ParsedClass> classes;
    std::string source_name;
};

namespace detail {

inline bool looks_like_absolute_iri(std::string_view iri) {
    auto letter = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    size_t i = 0;
    if (i >= iri.size() || !letter(iri[i])) return false;
    ++i;
    while (i < iri.size() && (letter(iri[i]) || (iri[i] >= '0' && iri[i] <= '9') ||
                              iri[i] == '+' || iri[i] == '-' || iri[i] == '.')) {
        ++i;
    }
    return i < iri.size() && iri[i] == ':' && i + 1 < iri.size();
}

[[noreturn]] inline void dialect_error(const std::string& source, int line,
                                       const std::string& message) {
    throw Error(ErrorCode::UnknownDialect, source + ":" + std::to_string(line) + ": " + message);
}

inline void check_root_namespaces(const xml::Element& root, const std::string& source) {
    struct Expected {
        const char* attr;
        const char* uri;
    };
    const Expected expected[] = {
        {"xmlns:rdf", kRdfNamespace},
        {"xmlns:rdfs", kRdfsNamespace},
        {"xmlns:owl", kOwlNamespace},
    };
    for (const auto& e : expected) {
        const std::string* value = root.attribute(e.attr);
        if (!value) dialect_error(source, root.line, std::string("missing ") + e.attr);
        if (*value != e.uri) {
            dialect_error(source, root.line,
                          std::string("unexpected URI for ") + e.attr + ": " + *value);
        }
    }
    for (const auto& attr : root.attributes) {
        bool known = false;
        for (const auto& e : expected) {
            if (attr.name == e.attr) known = true;
        }
        if (!known) dialect_error(source, root.line, "unsupported root attribute '" + attr.name + "'");
    }
}

inline bool only_whitespace(std::string_view s) {
    for (char c : s) {
        if (!xml::detail::is_space(c)) return false;
    }
    return true;
}

} // namespace detail

/// Reads one document in the emitter's dialect. Anything outside the
/// supported vocabulary is rejected with its source location rather than
/// silently dropped.
inline ParsedFragment parse_owl(std::string_view text, std::string source_name = "<input>") {
    xml::Element root = xml::parse_document(text);
    if (root.name != "rdf:RDF") {
        detail::dialect_error(source_name, root.line, "root element is '" + root.name +
                                                          "', expected 'rdf:RDF'");
    }
    detail::check_root_namespaces(root, source_name);
    if (!detail::only_whitespace(root.text)) {
        detail::dialect_error(source_name, root.line, "unexpected text content in rdf:RDF");
    }

    ParsedFragment fragment;
    fragment.source_name = std::move(source_name);
    for (const xml::Element& child : root.children) {
        if (child.name != "owl:Class") {
            detail::dialect_error(fragment.source_name, child.line,
                                  "unsupported element '" + child.name + "'");
        }
        const std::string* about = child.attribute("rdf:about");
        if (!about) {
            detail::dialect_error(fragment.source_name, child.line, "owl:Class without rdf:about");
        }
        if (!detail::looks_like_absolute_iri(*about)) {
            detail::dialect_error(fragment.source_name, child.line,
                                  "class IRI is not absolute: '" + *about + "'");
        }
        ParsedClass cls;
        cls.iri = *about;
        cls.line = child.line;
        if (!detail::only_whitespace(child.text)) {
            detail::dialect_error(fragment.source_name, child.line,
                                  "unexpected text content in owl:Class");
        }
        for (const xml::Element& member : child.children) {
            if (member.name == "rdfs:label") {
                OwlLabel label;
                label.text = member.text;
                if (const std::string* lang = member.attribute("xml:lang")) {
                    label.lang = *lang;
                }
                if (!member.children.empty()) {
                    detail::dialect_error(fragment.source_name, member.line,
                                          "rdfs:label must contain only text");
                }
                cls.labels.push_back(std::move(label));
            } else if (member.name == "rdfs:subClassOf") {
                const std::string* resource = member.attribute("rdf:resource");
                if (!resource) {
                    detail::dialect_error(fragment.source_name, member.line,
                                          "rdfs:subClassOf without rdf:resource");
                }
                if (!detail::looks_like_absolute_iri(*resource)) {
                    detail::dialect_error(fragment.source_name, member.line,
                                          "parent IRI is not absolute: '" + *resource + "'");
                }
                cls.parents.push_back(*resource);
            } else {
                detail::dialect_error(fragment.source_name, member.line,
                                      "unsupported element '" + member.name + "'");
            }
        }
        fragment.classes.push_back(std::move(cls));
    }
    return fragment;
}

struct MergeResult {
    OwlDocument document;
    std::vector<std::string> warnings;
};

/// Folds fragments into one deduplicated document: one class per IRI,
/// label sets and parent-edge sets unioned with set semantics, so merging
/// is idempotent and order-insensitive. Two sources disagreeing on a
/// same-language label is an error naming both; a parent that is referenced
/// but never declared becomes a label-less placeholder class plus a
/// warning, since per-species fragments legitimately share ancestors.
///
/// Rank information does not survive serialization, so merged documents
/// are ordered by IRI key (numeric ascending) instead of the emitter's
/// rank-major order.
inline MergeResult merge(const std::vector<ParsedFragment>& fragments) {
    struct Merged {
        // lang -> (text -> first source that contributed it)
        std::map<std::string, std::map<std::string, std::string>> labels;
        std::set<std::string> parents;
    };
    std::map<std::string, Merged> classes;

    for (const ParsedFragment& fragment : fragments) {
        for (const ParsedClass& cls : fragment.classes) {
            Merged& merged = classes[cls.iri];
            for (const OwlLabel& label : cls.labels) {
                auto& texts = merged.labels[label.lang];
                texts.emplace(label.text, fragment.source_name);
                if (texts.size() > 1) {
                    auto first = texts.begin();
                    auto second = std::next(first);
                    throw Error(ErrorCode::LabelConflict,
                                "class " + cls.iri + " has conflicting labels '" + first->first +
                                    "' (" + first->second + ") vs '" + second->first + "' (" +
                                    second->second + ") for language '" + label.lang + "'");
                }
            }
            for (const std::string& parent : cls.parents) {
                merged.parents.insert(parent);
            }
        }
    }

    MergeResult result;

    // Referenced-but-undeclared parents become placeholder classes.
    std::vector<std::string> missing;
    for (const auto& [iri, merged] : classes) {
        for (const std::string& parent : merged.parents) {
            if (classes.find(parent) == classes.end()) {
                missing.push_back(parent);
                result.warnings.push_back("parent " + parent + " referenced by " + iri +
                                          " is not declared; adding a label-less placeholder");
            }
        }
    }
    for (const std::string& iri : missing) {
        classes.emplace(iri, Merged{});
    }

    // Cycle check over the union of subclass edges.
    {
        enum class Color { White, Grey, Black };
        std::map<std::string, Color> color;
        for (const auto& [iri, merged] : classes) color[iri] = Color::White;

        struct Frame {
            const std::string* iri;
            std::set<std::string>::const_iterator next, end;
        };
        for (const auto& [start, merged_start] : classes) {
            if (color[start] != Color::White) continue;
            std::vector<Frame> stack;
            color[start] = Color::Grey;
            stack.push_back({&start, merged_start.parents.begin(), merged_start.parents.end()});
            while (!stack.empty()) {
                Frame& frame = stack.back();
                if (frame.next == frame.end) {
                    color[*frame.iri] = Color::Black;
                    stack.pop_back();
                    continue;
                }
                const std::string& parent = *frame.next++;
                auto it = classes.find(parent);
                if (it == classes.end()) continue;
                Color& c = color[parent];
                if (c == Color::Grey) {
                    throw Error(ErrorCode::ParentCycle,
                                "subclass edges form a cycle through " + parent);
                }
                if (c == Color::White) {
                    c = Color::Grey;
                    stack.push_back({&it->first, it->second.parents.begin(), it->second.parents.end()});
                }
            }
        }
    }

    std::vector<std::string> order;
    order.reserve(classes.size());
    for (const auto& [iri, merged] : classes) order.push_back(iri);
    std::sort(order.begin(), order.end(), detail::iri_key_less);

    for (const std::string& iri : order) {
        const Merged& merged = classes[iri];
        OwlClass cls;
        cls.iri = iri;
        cls.key = detail::numeric_iri_tail(iri);
        for (const auto& [lang, texts] : merged.labels) {
            for (const auto& [text, source] : texts) {
                cls.labels.push_back(OwlLabel{text, lang});
            }
        }
        std::sort(cls.labels.begin(), cls.labels.end());
        cls.parents.assign(merged.parents.begin(), merged.parents.end());
        std::sort(cls.parents.begin(), cls.parents.end(), detail::iri_key_less);
        result.document.classes.push_back(std::move(cls));
    }
    return result;
}

} // namespace taxowl
