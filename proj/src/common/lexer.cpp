// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/lexer.hpp>

#include <array>
#include <cctype>

namespace kaya {

namespace {

constexpr std::array<std::string_view, 10> two_char_puncts = {
    "==", "!=", "<=", ">=", "&&", "||", "+=", "-=", "*=", "=>",
};

constexpr std::string_view single_char_puncts = "{}()[];,.=<>+-*/%!:";

bool is_ident_start(char c) noexcept
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) noexcept
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

[[noreturn]] void lex_fail(std::size_t line, std::size_t column, std::string message)
{
    throw DiagnosticError{{Diagnostic{ErrorCode::syntax_error, std::move(message), line, column}}};
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, CommentStyle comments)
{
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t line = 1;
    std::size_t column = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            }
            else {
                ++column;
            }
        }
    };

    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        const bool line_comment =
            comments == CommentStyle::hash ? c == '#'
                                           : (c == '/' && i + 1 < text.size() && text[i + 1] == '/');
        if (line_comment) {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }

        Token tok;
        tok.line = line;
        tok.column = column;

        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && is_ident_char(text[j]))
                ++j;
            tok.kind = Token::Kind::identifier;
            tok.text = std::string{text.substr(i, j - i)};
            advance(j - i);
        }
        else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            if (c == '0' && j + 1 < text.size() && (text[j + 1] == 'x' || text[j + 1] == 'X')) {
                j += 2;
                while (j < text.size() && std::isxdigit(static_cast<unsigned char>(text[j])))
                    ++j;
                tok.kind = Token::Kind::hex;
                if (j == i + 2)
                    lex_fail(line, column, "hex literal without digits");
            }
            else {
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                    ++j;
                tok.kind = Token::Kind::number;
            }
            if (j < text.size() && is_ident_char(text[j]))
                lex_fail(line, column, "malformed number literal");
            tok.text = std::string{text.substr(i, j - i)};
            advance(j - i);
        }
        else if (c == '"') {
            tok.kind = Token::Kind::string;
            advance(1);
            bool closed = false;
            while (i < text.size()) {
                const char s = text[i];
                if (s == '"') {
                    advance(1);
                    closed = true;
                    break;
                }
                if (s == '\n')
                    break;
                if (s == '\\' && i + 1 < text.size()) {
                    const char e = text[i + 1];
                    if (e == '"' || e == '\\')
                        tok.text.push_back(e);
                    else if (e == 'n')
                        tok.text.push_back('\n');
                    else
                        lex_fail(line, column, "unknown escape sequence");
                    advance(2);
                    continue;
                }
                tok.text.push_back(s);
                advance(1);
            }
            if (!closed)
                lex_fail(tok.line, tok.column, "unterminated string literal");
        }
        else {
            tok.kind = Token::Kind::punct;
            const auto rest = text.substr(i);
            for (auto p : two_char_puncts) {
                if (rest.starts_with(p)) {
                    tok.text = std::string{p};
                    break;
                }
            }
            if (tok.text.empty()) {
                if (single_char_puncts.find(c) == std::string_view::npos)
                    lex_fail(line, column, std::string{"unexpected character '"} + c + "'");
                tok.text = std::string(1, c);
            }
            advance(tok.text.size());
        }
        out.push_back(std::move(tok));
    }

    Token end;
    end.kind = Token::Kind::end;
    end.line = line;
    end.column = column;
    out.push_back(std::move(end));
    return out;
}

std::string describe(const Token& token)
{
    switch (token.kind) {
    case Token::Kind::end: return "end of input";
    case Token::Kind::string: return "string \"" + token.text + "\"";
    default: return "'" + token.text + "'";
    }
}

std::string quote(std::string_view text)
{
    std::string out = "\"";
    for (char c : text) {
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

const Token& TokenCursor::peek(std::size_t ahead) const noexcept
{
    const auto idx = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[idx];
}

const Token& TokenCursor::next() noexcept
{
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size())
        ++pos_;
    return t;
}

bool TokenCursor::accept(std::string_view punct_or_ident)
{
    if (peek().is(punct_or_ident)) {
        next();
        return true;
    }
    return false;
}

const Token& TokenCursor::expect(std::string_view punct_or_ident)
{
    if (!peek().is(punct_or_ident))
        fail(peek(), "'" + std::string{punct_or_ident} + "'");
    return next();
}

const Token& TokenCursor::expect(Token::Kind kind, std::string_view what)
{
    if (peek().kind != kind)
        fail(peek(), what);
    return next();
}

void TokenCursor::fail(const Token& at, std::string_view expected) const
{
    throw DiagnosticError{{Diagnostic{ErrorCode::syntax_error,
                                      "expected " + std::string{expected} + ", found " + describe(at),
                                      at.line, at.column}}};
}

}  // namespace kaya
