// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kaya {

enum class ErrorCode {
    syntax_error,
    duplicate_name,
    undeclared_name,
    unsupported_type,
    type_mismatch,
    depth_mismatch,
    unknown_address,
    value_overflow,
    unknown_token,
    unknown_alias,
    unknown_contract,
    unknown_source,
    unknown_function,
    unknown_variable,
    arity_mismatch,
    argument_kind,
    non_payable_value,
    no_events,
    invalid_word,
    unsupported_format,
    io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// A located message. Line and column are 1-based; zero means "no position".
struct Diagnostic {
    ErrorCode code{};
    std::string message;
    std::size_t line = 0;
    std::size_t column = 0;

    std::string to_string() const;
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error{message}, code_{code}
    {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Thrown by parsers and validators; carries every diagnostic collected.
class DiagnosticError : public Error {
public:
    explicit DiagnosticError(std::vector<Diagnostic> diagnostics);

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

}  // namespace kaya
