// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "taxowl/error.hpp"

namespace taxowl::xml {

// Minimal non-validating XML reader, just enough for the RDF/XML dialect
// this project reads and writes: elements, attributes, character data,
// comments, an optional declaration, and the five predefined entities plus
// numeric character references. No DTDs, no CDATA, no processing
// instructions beyond the declaration.

struct Attribute {
    std::string name;
    std::string value;
};

struct Element {
    std::string name;
    std::vector<Attribute> attributes;
    std::vector<Element> children;
    std::string text; // concatenated character data, entity-decoded
    int line = 0;

    const std::string* attribute(std::string_view attr_name) const {
        for (const auto& a : attributes) {
            if (a.name == attr_name) return &a.value;
        }
        return nullptr;
    }
};

namespace detail {

struct Cursor {
    std::string_view input;
    size_t pos = 0;
    int line = 1;

    bool eof() const { return pos >= input.size(); }
    char peek() const { return input[pos]; }
    char take() {
        char c = input[pos++];
        if (c == '\n') ++line;
        return c;
    }
    bool consume(std::string_view s) {
        if (input.substr(pos, s.size()) != s) return false;
        for (size_t i = 0; i < s.size(); ++i) take();
        return true;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw Error(ErrorCode::MalformedXml, message + " at line " + std::to_string(line));
    }
};

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

inline bool is_name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':';
}

inline bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

inline void skip_space(Cursor& c) {
    while (!c.eof() && is_space(c.peek())) c.take();
}

inline void skip_comment(Cursor& c) {
    // cursor sits after "<!--"
    while (!c.consume("-->")) {
        if (c.eof()) c.fail("unterminated comment");
        c.take();
    }
}

inline void skip_misc(Cursor& c) {
    for (;;) {
        skip_space(c);
        if (c.consume("<!--")) {
            skip_comment(c);
            continue;
        }
        return;
    }
}

inline std::string parse_name(Cursor& c) {
    if (c.eof() || !is_name_start(c.peek())) c.fail("expected a name");
    std::string name;
    while (!c.eof() && is_name_char(c.peek())) name.push_back(c.take());
    return name;
}

inline void append_reference(Cursor& c, std::string& out) {
    // cursor sits after '&'
    std::string entity;
    while (!c.eof() && c.peek() != ';') {
        entity.push_back(c.take());
        if (entity.size() > 8) c.fail("unterminated entity reference");
    }
    if (c.eof()) c.fail("unterminated entity reference");
    c.take(); // ';'
    if (entity == "amp") out += '&';
    else if (entity == "lt") out += '<';
    else if (entity == "gt") out += '>';
    else if (entity == "quot") out += '"';
    else if (entity == "apos") out += '\'';
    else if (entity.size() > 1 && entity[0] == '#') {
        bool hex = entity[1] == 'x' || entity[1] == 'X';
        unsigned long code = 0;
        size_t i = hex ? 2 : 1;
        if (i >= entity.size()) c.fail("empty character reference");
        for (; i < entity.size(); ++i) {
            char d = entity[i];
            int v;
            if (d >= '0' && d <= '9') v = d - '0';
            else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
            else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
            else c.fail("bad character reference");
            code = code * (hex ? 16 : 10) + static_cast<unsigned long>(v);
            if (code > 0x10FFFF) c.fail("character reference out of range");
        }
        // encode as UTF-8
        if (code < 0x80) {
            out += static_cast<char>(code);
        } else if (code < 0x800) {
            out += static_cast<char>(0xC0 | (code >> 6));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else if (code < 0x10000) {
            out += static_cast<char>(0xE0 | (code >> 12));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (code >> 18));
            out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        }
    } else {
        c.fail("unknown entity '&" + entity + ";'");
    }
}

inline std::string parse_attribute_value(Cursor& c) {
    if (c.eof() || (c.peek() != '"' && c.peek() != '\'')) c.fail("expected a quoted value");
    char quote = c.take();
    std::string value;
    for (;;) {
        if (c.eof()) c.fail("unterminated attribute value");
        char ch = c.take();
        if (ch == quote) break;
        if (ch == '<') c.fail("'<' in attribute value");
        if (ch == '&') {
            append_reference(c, value);
        } else {
            value.push_back(ch);
        }
    }
    return value;
}

inline Element parse_element(Cursor& c, int depth) {
    if (depth > 64) c.fail("document nested too deeply");
    // cursor sits after '<'
    Element element;
    element.line = c.line;
    element.name = parse_name(c);
    for (;;) {
        skip_space(c);
        if (c.eof()) c.fail("unterminated start tag");
        if (c.consume("/>")) return element;
        if (c.consume(">")) break;
        Attribute attr;
        attr.name = parse_name(c);
        skip_space(c);
        if (!c.consume("=")) c.fail("expected '=' after attribute name");
        skip_space(c);
        attr.value = parse_attribute_value(c);
        for (const auto& existing : element.attributes) {
            if (existing.name == attr.name) c.fail("duplicate attribute '" + attr.name + "'");
        }
        element.attributes.push_back(std::move(attr));
    }

    // content
    for (;;) {
        if (c.eof()) c.fail("unterminated element '" + element.name + "'");
        char ch = c.peek();
        if (ch == '<') {
            if (c.consume("<!--")) {
                skip_comment(c);
                continue;
            }
            if (c.consume("</")) {
                std::string closing = parse_name(c);
                if (closing != element.name) {
                    c.fail("mismatched closing tag '" + closing + "' for '" + element.name + "'");
                }
                skip_space(c);
                if (!c.consume(">")) c.fail("malformed closing tag");
                return element;
            }
            if (c.consume("<!")) c.fail("unsupported markup declaration");
            if (c.consume("<?")) c.fail("unexpected processing instruction");
            c.take(); // '<'
            element.children.push_back(parse_element(c, depth + 1));
        } else if (ch == '&') {
            c.take();
            append_reference(c, element.text);
        } else {
            element.text.push_back(c.take());
        }
    }
}

} // namespace detail

/// Parses a complete document and returns its root element.
inline Element parse_document(std::string_view input) {
    detail::Cursor c{input};
    if (c.consume("\xEF\xBB\xBF")) {
        // UTF-8 BOM
    }
    detail::skip_space(c);
    if (c.consume("<?xml")) {
        while (!c.consume("?>")) {
            if (c.eof()) c.fail("unterminated XML declaration");
            c.take();
        }
    }
    detail::skip_misc(c);
    if (c.eof() || !c.consume("<")) c.fail("expected a root element");
    Element root = detail::parse_element(c, 0);
    detail::skip_misc(c);
    if (!c.eof()) c.fail("content after the root element");
    return root;
}

} // namespace taxowl::xml
