// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/common/error.hpp>
#include <kaya/common/word.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kaya::dbdl {

/// Where a construct started in DBDL text. Zero for constructs built in
/// code. Positions never take part in structural equality.
struct Pos {
    std::size_t line = 0;
    std::size_t column = 0;

    friend bool operator==(const Pos&, const Pos&) noexcept { return true; }
};

struct Literal {
    enum class Kind : std::uint8_t { number, hex, boolean, alias };

    Kind kind = Kind::number;
    /// Numeric value; 0/1 for booleans, unused for aliases.
    Word value = 0;
    std::string alias;

    static Literal number(Word v) { return {Kind::number, std::move(v), {}}; }
    static Literal hex(Word v) { return {Kind::hex, std::move(v), {}}; }
    static Literal boolean(bool b) { return {Kind::boolean, b ? 1 : 0, {}}; }
    static Literal named(std::string a) { return {Kind::alias, 0, std::move(a)}; }

    friend bool operator==(const Literal&, const Literal&) = default;
};

/// `Alias.variable[k]...`, optionally ending in `.length`.
struct Path {
    std::string contract;
    std::string variable;
    std::vector<Literal> keys;
    bool length = false;
    Pos pos;

    friend bool operator==(const Path&, const Path&) = default;
};

struct ContractRef {
    std::string alias;
    std::string source;
    Pos pos;

    friend bool operator==(const ContractRef&, const ContractRef&) = default;
};

struct Account {
    std::string alias;
    Word balance = 0;
    Pos pos;

    friend bool operator==(const Account&, const Account&) = default;
};

struct PreStateParam {
    Path path;
    Literal value;

    friend bool operator==(const PreStateParam&, const PreStateParam&) = default;
};

struct Event {
    std::string contract;
    std::string function;
    std::vector<Literal> args;
    std::string sender;
    Word value = 0;
    Pos pos;

    friend bool operator==(const Event&, const Event&) = default;
};

enum class Comparator : std::uint8_t { eq, ne, lt, le, gt, ge };

struct Expectation {
    Path path;
    Comparator cmp = Comparator::eq;
    Literal expected;

    friend bool operator==(const Expectation&, const Expectation&) = default;
};

struct TestCase {
    std::string name;
    std::vector<ContractRef> contracts;
    std::vector<Account> accounts;
    std::vector<PreStateParam> prestate;
    std::vector<Event> events;
    std::vector<Expectation> expectations;
    Pos pos;

    friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct TestSuite {
    std::vector<TestCase> cases;

    friend bool operator==(const TestSuite&, const TestSuite&) = default;
};

/// Parses a suite. Syntax errors throw at the first problem; name checks
/// that need no contract source (duplicate cases or aliases, undeclared
/// aliases, empty event lists) are collected and thrown together.
TestSuite parse_dbdl(std::string_view text);

/// The source-independent checks parse_dbdl applies, for cases built in code.
std::vector<Diagnostic> check_names(const TestSuite& suite);
std::vector<Diagnostic> check_names(const TestCase& testcase);

std::string format_dbdl(const TestSuite& suite);
std::string format_case(const TestCase& testcase);
std::string format_path(const Path& path);
std::string format_literal(const Literal& literal);
std::string format_event(const Event& event);
std::string format_expectation(const Expectation& expectation);
/// `N ether` when divisible by 10^18 and nonzero, else `N wei`.
std::string format_amount(const Word& wei);
std::string_view to_string(Comparator cmp) noexcept;

// Fragment parsers; each must consume its whole input.
Path parse_path(std::string_view text);
Literal parse_literal(std::string_view text);
Word parse_amount(std::string_view text);
Comparator parse_comparator(std::string_view text);

bool compare(const Word& lhs, Comparator cmp, const Word& rhs, bool is_signed);

/// Low 20 bytes of keccak256("kaya:" + alias).
Address account_address(std::string_view alias);
/// Low 20 bytes of keccak256("kaya:contract:" + alias).
Address contract_address(std::string_view alias);

}  // namespace kaya::dbdl
