#pragma once

#include <cctype>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace support {

// Structural summary of a DOT document. Not a full grammar, just enough to
// catch unbalanced braces, unterminated strings, and dangling edge endpoints
// in the documents this project emits.
struct DotSummary {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::size_t subgraph_count = 0;
    std::set<std::string> declared;
    std::vector<std::string> problems;

    bool ok() const { return problems.empty(); }
};

namespace dot_detail {

struct Token {
    enum class Kind { Id, Quoted, Symbol, Arrow };
    Kind kind;
    std::string text;
};

inline bool id_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':' ||
           c == '#' || c == '-';
}

inline bool tokenize(const std::string& text, std::vector<Token>& out, std::string& error) {
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '"') {
            std::string value;
            ++i;
            bool closed = false;
            while (i < text.size()) {
                if (text[i] == '\\' && i + 1 < text.size()) {
                    value += text[i + 1];
                    i += 2;
                    continue;
                }
                if (text[i] == '"') {
                    closed = true;
                    ++i;
                    break;
                }
                value += text[i++];
            }
            if (!closed) {
                error = "unterminated quoted string";
                return false;
            }
            out.push_back({Token::Kind::Quoted, value});
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Token::Kind::Arrow, "->"});
            i += 2;
            continue;
        }
        if (c == '{' || c == '}' || c == '[' || c == ']' || c == ';' || c == '=' || c == ',') {
            out.push_back({Token::Kind::Symbol, std::string(1, c)});
            ++i;
            continue;
        }
        if (id_char(c)) {
            std::string value;
            while (i < text.size() && id_char(text[i])) value += text[i++];
            out.push_back({Token::Kind::Id, value});
            continue;
        }
        error = std::string("unexpected character '") + c + "'";
        return false;
    }
    return true;
}

}  // namespace dot_detail

inline DotSummary lint_dot(const std::string& text) {
    using dot_detail::Token;
    DotSummary summary;

    std::vector<Token> tokens;
    std::string error;
    if (!dot_detail::tokenize(text, tokens, error)) {
        summary.problems.push_back(error);
        return summary;
    }
    if (tokens.size() < 3 || tokens[0].kind != Token::Kind::Id || tokens[0].text != "digraph") {
        summary.problems.push_back("document does not start with digraph");
        return summary;
    }

    int depth = 0;
    std::vector<std::string> edge_endpoints;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& tok = tokens[i];
        if (tok.kind == Token::Kind::Symbol && tok.text == "{") ++depth;
        if (tok.kind == Token::Kind::Symbol && tok.text == "}") {
            --depth;
            if (depth < 0) {
                summary.problems.push_back("unbalanced closing brace");
                return summary;
            }
        }
        if (tok.kind == Token::Kind::Id && tok.text == "subgraph") ++summary.subgraph_count;
        if (tok.kind == Token::Kind::Quoted) {
            bool arrow_before = i > 0 && tokens[i - 1].kind == Token::Kind::Arrow;
            bool arrow_after =
                i + 1 < tokens.size() && tokens[i + 1].kind == Token::Kind::Arrow;
            bool attr_value = i > 0 && tokens[i - 1].kind == Token::Kind::Symbol &&
                              tokens[i - 1].text == "=";
            if (attr_value) continue;
            if (arrow_after && !arrow_before) {
                ++summary.edge_count;
                edge_endpoints.push_back(tok.text);
            } else if (arrow_before) {
                edge_endpoints.push_back(tok.text);
            } else {
                ++summary.node_count;
                summary.declared.insert(tok.text);
            }
        }
    }
    if (depth != 0) summary.problems.push_back("unbalanced open brace");
    for (const auto& name : edge_endpoints) {
        if (!summary.declared.count(name))
            summary.problems.push_back("edge references undeclared node " + name);
    }
    return summary;
}

}  // namespace support
