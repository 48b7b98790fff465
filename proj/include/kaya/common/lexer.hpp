// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/common/error.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kaya {

struct Token {
    enum class Kind { identifier, number, hex, string, punct, end };

    Kind kind = Kind::end;
    /// Identifier/number/punct text; unescaped contents for strings.
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;

    bool is(std::string_view punct_or_ident) const noexcept
    {
        return (kind == Kind::punct || kind == Kind::identifier) && text == punct_or_ident;
    }
};

enum class CommentStyle { double_slash, hash };

/// Tokenizes the shared lexical layer of MiniSol and DBDL. Throws
/// DiagnosticError on an unterminated string or stray character.
std::vector<Token> tokenize(std::string_view text, CommentStyle comments);

std::string describe(const Token& token);

/// Inverse of string-token unescaping: wraps in quotes and escapes quote, backslash and newline.
std::string quote(std::string_view text);

/// Cursor over a token vector with the expect/accept helpers both parsers use.
class TokenCursor {
public:
    explicit TokenCursor(std::vector<Token> tokens) : tokens_{std::move(tokens)} {}

    const Token& peek(std::size_t ahead = 0) const noexcept;
    const Token& next() noexcept;
    bool at_end() const noexcept { return peek().kind == Token::Kind::end; }

    bool accept(std::string_view punct_or_ident);
    const Token& expect(std::string_view punct_or_ident);
    const Token& expect(Token::Kind kind, std::string_view what);

    [[noreturn]] void fail(const Token& at, std::string_view expected) const;

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace kaya
