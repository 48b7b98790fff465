// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/minisol/ast.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace kaya::minisol {

/// Parses MiniSol source. Throws DiagnosticError (SyntaxError, DuplicateName,
/// UndeclaredName) with 1-based positions.
SourceUnit parse_source(std::string_view text);

/// Canonical pretty-printer; parse_source(format_source(u)) reproduces u's contracts.
std::string format_source(const SourceUnit& unit);
std::string format_contract(const ContractDecl& contract);
std::string format_expr(const Expr& expr);

struct VariableInfo {
    std::string name;
    TypeExpr type;
    std::size_t decl_index = 0;

    friend bool operator==(const VariableInfo&, const VariableInfo&) = default;
};

/// State variables in declaration order.
std::vector<VariableInfo> extract_variables(const ContractDecl& contract);

}  // namespace kaya::minisol
