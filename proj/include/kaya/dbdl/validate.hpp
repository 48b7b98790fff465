// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/dbdl/dbdl.hpp>
#include <kaya/layout/storage_layout.hpp>
#include <kaya/minisol/ast.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kaya::dbdl {

struct NamedSource {
    std::string name;
    minisol::SourceUnit unit;
};

/// Parsed contract sources, addressed by the file names DBDL refers to.
class SourceSet {
public:
    void add(std::string name, minisol::SourceUnit unit);

    /// Exact name first, then a match on the final path component.
    const minisol::SourceUnit* find(std::string_view ref) const noexcept;
    std::span<const NamedSource> sources() const noexcept { return sources_; }

private:
    std::vector<NamedSource> sources_;
};

/// The contract an alias binds to: the one named like the alias, otherwise
/// the unit's only contract.
const minisol::ContractDecl* bind_contract(const minisol::SourceUnit& unit, std::string_view alias) noexcept;

struct BoundContract {
    std::string alias;
    minisol::ContractDecl decl;
    layout::StorageLayout layout;
    Address address;
};

struct BoundValue {
    layout::VariablePath path;
    minisol::ElementaryType type;
    Word value;
};

struct BoundCall {
    std::string contract;
    std::string function;
    std::vector<Word> args;
    Address sender;
    Word value;
    /// Canonical DBDL text of the event.
    std::string text;
};

struct BoundExpectation {
    layout::VariablePath path;
    minisol::ElementaryType type;
    Comparator cmp = Comparator::eq;
    Word expected;
    /// Canonical DBDL text of the expectation.
    std::string text;
};

/// A test case with every alias, path and literal resolved against the
/// contract sources. Paths use the contract alias as their contract name.
struct BoundCase {
    std::string name;
    std::vector<BoundContract> contracts;
    std::vector<std::pair<Address, Word>> balances;
    std::vector<BoundValue> prestate;
    std::vector<BoundCall> events;
    std::vector<BoundExpectation> expectations;
    /// Account and contract addresses to alias, for readable paths.
    layout::AliasNames aliases;

    const BoundContract* find_contract(std::string_view alias) const noexcept;
};

std::vector<Diagnostic> validate(const TestCase& testcase, const SourceSet& sources);
std::vector<Diagnostic> validate(const TestSuite& suite, const SourceSet& sources);

/// Throws DiagnosticError carrying exactly what validate reports.
BoundCase bind_case(const TestCase& testcase, const SourceSet& sources);

}  // namespace kaya::dbdl
