#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tmt/diag.hpp"

namespace tmt {

enum class Tok : std::uint8_t {
    Ident,
    Int,
    ObjLit,  // 'name
    LBrace, RBrace, LBracket, RBracket, LParen, RParen,
    Comma, Colon, Dot, DotDot, Pipe,
    Assign,  // :=
    Arrow,   // ->
    Eq, Ne, Le, Ge, Lt, Gt,
    Plus, Minus, Star,
    Tilde,   // ~
    AndOp,   // conjunction: slash-backslash
    OrOp,    // disjunction: backslash-slash
    Eof,
};

struct Token {
    Tok kind = Tok::Eof;
    std::string_view text;
    std::int64_t int_val = 0;
    SourceSpan span;

    bool is(Tok k) const { return kind == k; }
    bool is_word(std::string_view w) const { return kind == Tok::Ident && text == w; }
};

inline std::string token_desc(const Token& t) {
    switch (t.kind) {
        case Tok::Eof: return "end of input";
        case Tok::Int: return "integer " + std::string(t.text);
        case Tok::ObjLit: return "'" + std::string(t.text);
        default: return "'" + std::string(t.text) + "'";
    }
}

/// Tokenizes a whole source unit. `//` starts a comment running to the end
/// of the line. Throws SpecError on stray characters.
inline std::vector<Token> lex(std::string_view src, const std::string& file) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto make_span = [&](std::size_t len) {
        return SourceSpan{file, int(line), int(col), int(line), int(col + len)};
    };
    auto push = [&](Tok kind, std::size_t len) {
        out.push_back(Token{kind, src.substr(i, len), 0, make_span(len)});
        advance(len);
    };

    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t n = 1;
            while (i + n < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i + n])) || src[i + n] == '_'))
                ++n;
            push(Tok::Ident, n);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t n = 1;
            while (i + n < src.size() && std::isdigit(static_cast<unsigned char>(src[i + n]))) ++n;
            Token t{Tok::Int, src.substr(i, n), 0, make_span(n)};
            t.int_val = std::stoll(std::string(t.text));
            out.push_back(t);
            advance(n);
            continue;
        }
        if (c == '\'') {
            std::size_t n = 1;
            while (i + n < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i + n])) || src[i + n] == '_'))
                ++n;
            if (n == 1) throw SpecError(make_span(1), "expected a name after '");
            Token t{Tok::ObjLit, src.substr(i + 1, n - 1), 0, make_span(n)};
            out.push_back(t);
            advance(n);
            continue;
        }
        auto two = i + 1 < src.size() ? src.substr(i, 2) : std::string_view{};
        if (two == ":=") { push(Tok::Assign, 2); continue; }
        if (two == "->") { push(Tok::Arrow, 2); continue; }
        if (two == "<>") { push(Tok::Ne, 2); continue; }
        if (two == "<=") { push(Tok::Le, 2); continue; }
        if (two == ">=") { push(Tok::Ge, 2); continue; }
        if (two == "..") { push(Tok::DotDot, 2); continue; }
        if (two == "/\\") { push(Tok::AndOp, 2); continue; }
        if (two == "\\/") { push(Tok::OrOp, 2); continue; }
        switch (c) {
            case '{': push(Tok::LBrace, 1); continue;
            case '}': push(Tok::RBrace, 1); continue;
            case '[': push(Tok::LBracket, 1); continue;
            case ']': push(Tok::RBracket, 1); continue;
            case '(': push(Tok::LParen, 1); continue;
            case ')': push(Tok::RParen, 1); continue;
            case ',': push(Tok::Comma, 1); continue;
            case ':': push(Tok::Colon, 1); continue;
            case '.': push(Tok::Dot, 1); continue;
            case '|': push(Tok::Pipe, 1); continue;
            case '=': push(Tok::Eq, 1); continue;
            case '<': push(Tok::Lt, 1); continue;
            case '>': push(Tok::Gt, 1); continue;
            case '+': push(Tok::Plus, 1); continue;
            case '-': push(Tok::Minus, 1); continue;
            case '*': push(Tok::Star, 1); continue;
            case '~': push(Tok::Tilde, 1); continue;
            default:
                throw SpecError(make_span(1), std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back(Token{Tok::Eof, {}, 0, SourceSpan{file, int(line), int(col), int(line), int(col)}});
    return out;
}

}  // namespace tmt
