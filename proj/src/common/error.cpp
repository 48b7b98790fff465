// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/error.hpp>

namespace kaya {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::syntax_error: return "SyntaxError";
    case ErrorCode::duplicate_name: return "DuplicateName";
    case ErrorCode::undeclared_name: return "UndeclaredName";
    case ErrorCode::unsupported_type: return "UnsupportedType";
    case ErrorCode::type_mismatch: return "TypeMismatch";
    case ErrorCode::depth_mismatch: return "DepthMismatch";
    case ErrorCode::unknown_address: return "UnknownAddress";
    case ErrorCode::value_overflow: return "ValueOverflow";
    case ErrorCode::unknown_token: return "UnknownToken";
    case ErrorCode::unknown_alias: return "UnknownAlias";
    case ErrorCode::unknown_contract: return "UnknownContract";
    case ErrorCode::unknown_source: return "UnknownSource";
    case ErrorCode::unknown_function: return "UnknownFunction";
    case ErrorCode::unknown_variable: return "UnknownVariable";
    case ErrorCode::arity_mismatch: return "ArityMismatch";
    case ErrorCode::argument_kind: return "ArgumentKind";
    case ErrorCode::non_payable_value: return "NonPayableValue";
    case ErrorCode::no_events: return "NoEvents";
    case ErrorCode::invalid_word: return "InvalidWord";
    case ErrorCode::unsupported_format: return "UnsupportedFormat";
    case ErrorCode::io_error: return "IoError";
    }
    return "Unknown";
}

std::string Diagnostic::to_string() const
{
    std::string out;
    if (line != 0)
        out += std::to_string(line) + ":" + std::to_string(column) + ": ";
    out += kaya::to_string(code);
    out += ": ";
    out += message;
    return out;
}

namespace {

std::string join(const std::vector<Diagnostic>& diagnostics)
{
    std::string out;
    for (const auto& d : diagnostics) {
        if (!out.empty())
            out += '\n';
        out += d.to_string();
    }
    return out;
}

}  // namespace

DiagnosticError::DiagnosticError(std::vector<Diagnostic> diagnostics)
    : Error{diagnostics.empty() ? ErrorCode::syntax_error : diagnostics.front().code,
            join(diagnostics)},
      diagnostics_{std::move(diagnostics)}
{}

}  // namespace kaya
