// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/lexer.hpp>
#include <kaya/dbdl/dbdl.hpp>
#include <kaya/layout/keccak.hpp>

#include <array>
#include <set>

namespace kaya::dbdl {

namespace {

constexpr std::array<std::string_view, 14> reserved = {
    "testcase", "contract", "from",  "account", "balance", "prestate", "events",
    "call",     "value",    "expect", "ether",  "wei",     "true",     "false",
};

bool is_reserved(std::string_view word) noexcept
{
    for (auto r : reserved)
        if (r == word)
            return true;
    return false;
}

const Word& ether() noexcept
{
    static const Word one_ether{"1000000000000000000"};
    return one_ether;
}

Pos pos_of(const Token& t) noexcept
{
    return {t.line, t.column};
}

class Parser {
public:
    explicit Parser(std::string_view text) : cur_{tokenize(text, CommentStyle::hash)} {}

    TestSuite suite()
    {
        TestSuite out;
        while (!cur_.at_end())
            out.cases.push_back(testcase());
        return out;
    }

    Path path()
    {
        Path p;
        p.pos = pos_of(cur_.peek());
        p.contract = ident("contract alias");
        cur_.expect(".");
        p.variable = ident("variable name");
        while (cur_.accept("[")) {
            p.keys.push_back(literal());
            cur_.expect("]");
        }
        if (cur_.peek().is(".") && cur_.peek(1).is("length")) {
            cur_.next();
            cur_.next();
            p.length = true;
        }
        return p;
    }

    Literal literal()
    {
        const Token& t = cur_.peek();
        switch (t.kind) {
        case Token::Kind::number:
            return Literal::number(word(cur_.next()));
        case Token::Kind::hex:
            return Literal::hex(word(cur_.next()));
        case Token::Kind::identifier:
            if (t.text == "true" || t.text == "false")
                return Literal::boolean(cur_.next().text == "true");
            return Literal::named(ident("literal"));
        default:
            cur_.fail(t, "literal");
        }
    }

    Word amount()
    {
        const Token& t = cur_.peek();
        if (t.kind != Token::Kind::number)
            cur_.fail(t, "amount");
        const Word n = word(cur_.next());
        if (cur_.accept("wei"))
            return n;
        if (!cur_.peek().is("ether"))
            cur_.fail(cur_.peek(), "'ether' or 'wei'");
        cur_.next();
        const BigInt wei = BigInt{n} * BigInt{ether()};
        if (wei > BigInt{max_word()})
            throw DiagnosticError{{Diagnostic{ErrorCode::value_overflow,
                                              "amount does not fit in 256 bits", t.line, t.column}}};
        return Word{wei};
    }

    Comparator comparator()
    {
        static constexpr std::array<std::pair<std::string_view, Comparator>, 6> table = {{
            {"==", Comparator::eq},
            {"!=", Comparator::ne},
            {"<", Comparator::lt},
            {"<=", Comparator::le},
            {">", Comparator::gt},
            {">=", Comparator::ge},
        }};
        for (const auto& [text, cmp] : table) {
            if (cur_.accept(text))
                return cmp;
        }
        cur_.fail(cur_.peek(), "comparison operator");
    }

    void finish()
    {
        if (!cur_.at_end())
            cur_.fail(cur_.peek(), "end of input");
    }

private:
    TokenCursor cur_;

    std::string ident(std::string_view what)
    {
        const Token& t = cur_.peek();
        if (t.kind != Token::Kind::identifier || is_reserved(t.text))
            cur_.fail(t, what);
        return cur_.next().text;
    }

    Word word(const Token& t)
    {
        try {
            return parse_word(t.text);
        }
        catch (const Error& e) {
            throw DiagnosticError{{Diagnostic{e.code(), e.what(), t.line, t.column}}};
        }
    }

    TestCase testcase()
    {
        TestCase tc;
        tc.pos = pos_of(cur_.peek());
        cur_.expect("testcase");
        tc.name = cur_.expect(Token::Kind::string, "case name").text;
        cur_.expect("{");

        while (cur_.peek().is("contract")) {
            ContractRef ref;
            ref.pos = pos_of(cur_.next());
            ref.alias = ident("contract alias");
            cur_.expect("from");
            ref.source = cur_.expect(Token::Kind::string, "source file").text;
            tc.contracts.push_back(std::move(ref));
        }
        while (cur_.peek().is("account")) {
            Account acc;
            acc.pos = pos_of(cur_.next());
            acc.alias = ident("account alias");
            cur_.expect("{");
            cur_.expect("balance");
            cur_.expect(":");
            acc.balance = amount();
            cur_.expect("}");
            tc.accounts.push_back(std::move(acc));
        }
        if (cur_.accept("prestate")) {
            cur_.expect("{");
            while (!cur_.accept("}")) {
                PreStateParam param;
                param.path = path();
                cur_.expect("=");
                param.value = literal();
                tc.prestate.push_back(std::move(param));
            }
        }
        cur_.expect("events");
        cur_.expect("{");
        while (!cur_.accept("}"))
            tc.events.push_back(event());
        if (cur_.accept("expect")) {
            cur_.expect("{");
            while (!cur_.accept("}")) {
                Expectation ex;
                ex.path = path();
                ex.cmp = comparator();
                ex.expected = literal();
                tc.expectations.push_back(std::move(ex));
            }
        }
        cur_.expect("}");
        return tc;
    }

    Event event()
    {
        Event ev;
        ev.pos = pos_of(cur_.peek());
        cur_.expect("call");
        ev.contract = ident("contract alias");
        cur_.expect(".");
        ev.function = ident("function name");
        cur_.expect("(");
        if (!cur_.accept(")")) {
            do {
                ev.args.push_back(literal());
            } while (cur_.accept(","));
            cur_.expect(")");
        }
        cur_.expect("from");
        ev.sender = ident("sender alias");
        if (cur_.accept("value"))
            ev.value = amount();
        return ev;
    }
};

void check_literal(const Literal& lit, const std::set<std::string>& aliases, Pos pos,
                   std::vector<Diagnostic>& out)
{
    if (lit.kind == Literal::Kind::alias && !aliases.contains(lit.alias))
        out.push_back({ErrorCode::unknown_alias, "undeclared alias '" + lit.alias + "'", pos.line, pos.column});
}

void check_path(const Path& p, const std::set<std::string>& contracts,
                const std::set<std::string>& aliases, std::vector<Diagnostic>& out)
{
    if (!contracts.contains(p.contract))
        out.push_back({ErrorCode::unknown_alias, "undeclared contract alias '" + p.contract + "'",
                       p.pos.line, p.pos.column});
    for (const auto& k : p.keys)
        check_literal(k, aliases, p.pos, out);
}

}  // namespace

std::vector<Diagnostic> check_names(const TestCase& tc)
{
    std::vector<Diagnostic> out;
    std::set<std::string> contracts;
    std::set<std::string> accounts;
    for (const auto& ref : tc.contracts) {
        if (!contracts.insert(ref.alias).second)
            out.push_back({ErrorCode::duplicate_name, "duplicate alias '" + ref.alias + "'", ref.pos.line,
                           ref.pos.column});
    }
    for (const auto& acc : tc.accounts) {
        const bool clash = contracts.contains(acc.alias) || accounts.contains(acc.alias);
        accounts.insert(acc.alias);
        if (clash)
            out.push_back({ErrorCode::duplicate_name, "duplicate alias '" + acc.alias + "'", acc.pos.line,
                           acc.pos.column});
    }
    std::set<std::string> aliases = accounts;
    aliases.insert(contracts.begin(), contracts.end());

    for (const auto& param : tc.prestate) {
        check_path(param.path, contracts, aliases, out);
        check_literal(param.value, aliases, param.path.pos, out);
    }
    for (const auto& ev : tc.events) {
        if (!contracts.contains(ev.contract))
            out.push_back({ErrorCode::unknown_alias, "undeclared contract alias '" + ev.contract + "'",
                           ev.pos.line, ev.pos.column});
        if (!accounts.contains(ev.sender))
            out.push_back({ErrorCode::unknown_alias, "undeclared account '" + ev.sender + "'", ev.pos.line,
                           ev.pos.column});
        for (const auto& a : ev.args)
            check_literal(a, aliases, ev.pos, out);
    }
    if (tc.events.empty())
        out.push_back({ErrorCode::no_events, "test case '" + tc.name + "' has no events", tc.pos.line,
                       tc.pos.column});
    for (const auto& ex : tc.expectations) {
        check_path(ex.path, contracts, aliases, out);
        check_literal(ex.expected, aliases, ex.path.pos, out);
    }
    return out;
}

std::vector<Diagnostic> check_names(const TestSuite& suite)
{
    std::vector<Diagnostic> out;
    std::set<std::string> names;
    for (const auto& tc : suite.cases) {
        if (!names.insert(tc.name).second)
            out.push_back({ErrorCode::duplicate_name, "duplicate test case \"" + tc.name + "\"", tc.pos.line,
                           tc.pos.column});
        auto more = check_names(tc);
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

TestSuite parse_dbdl(std::string_view text)
{
    Parser p{text};
    auto suite = p.suite();
    if (auto diags = check_names(suite); !diags.empty())
        throw DiagnosticError{std::move(diags)};
    return suite;
}

Path parse_path(std::string_view text)
{
    Parser p{text};
    auto out = p.path();
    p.finish();
    return out;
}

Literal parse_literal(std::string_view text)
{
    Parser p{text};
    auto out = p.literal();
    p.finish();
    return out;
}

Word parse_amount(std::string_view text)
{
    Parser p{text};
    auto out = p.amount();
    p.finish();
    return out;
}

Comparator parse_comparator(std::string_view text)
{
    Parser p{text};
    auto out = p.comparator();
    p.finish();
    return out;
}

std::string_view to_string(Comparator cmp) noexcept
{
    switch (cmp) {
    case Comparator::eq: return "==";
    case Comparator::ne: return "!=";
    case Comparator::lt: return "<";
    case Comparator::le: return "<=";
    case Comparator::gt: return ">";
    case Comparator::ge: return ">=";
    }
    return "?";
}

bool compare(const Word& lhs, Comparator cmp, const Word& rhs, bool is_signed)
{
    const BigInt a = is_signed ? to_signed(lhs) : to_unsigned(lhs);
    const BigInt b = is_signed ? to_signed(rhs) : to_unsigned(rhs);
    switch (cmp) {
    case Comparator::eq: return a == b;
    case Comparator::ne: return a != b;
    case Comparator::lt: return a < b;
    case Comparator::le: return a <= b;
    case Comparator::gt: return a > b;
    case Comparator::ge: return a >= b;
    }
    return false;
}

std::string format_amount(const Word& wei)
{
    if (wei != 0 && wei % ether() == 0)
        return to_decimal(Word{wei / ether()}) + " ether";
    return to_decimal(wei) + " wei";
}

std::string format_literal(const Literal& lit)
{
    switch (lit.kind) {
    case Literal::Kind::number: return to_decimal(lit.value);
    case Literal::Kind::hex:
        return lit.value <= width_mask(20) ? to_hex_padded(lit.value, 20) : to_hex(lit.value);
    case Literal::Kind::boolean: return lit.value != 0 ? "true" : "false";
    case Literal::Kind::alias: return lit.alias;
    }
    return {};
}

std::string format_path(const Path& p)
{
    std::string out = p.contract + "." + p.variable;
    for (const auto& k : p.keys)
        out += "[" + format_literal(k) + "]";
    if (p.length)
        out += ".length";
    return out;
}

std::string format_event(const Event& ev)
{
    std::string out = "call " + ev.contract + "." + ev.function + "(";
    for (std::size_t i = 0; i < ev.args.size(); ++i) {
        if (i != 0)
            out += ", ";
        out += format_literal(ev.args[i]);
    }
    out += ") from " + ev.sender;
    if (ev.value != 0)
        out += " value " + format_amount(ev.value);
    return out;
}

std::string format_expectation(const Expectation& ex)
{
    return format_path(ex.path) + " " + std::string{to_string(ex.cmp)} + " " + format_literal(ex.expected);
}

std::string format_case(const TestCase& tc)
{
    std::string out = "testcase " + quote(tc.name) + " {\n";
    for (const auto& ref : tc.contracts)
        out += "    contract " + ref.alias + " from " + quote(ref.source) + "\n";
    for (const auto& acc : tc.accounts)
        out += "    account " + acc.alias + " { balance: " + format_amount(acc.balance) + " }\n";
    if (!tc.prestate.empty()) {
        out += "    prestate {\n";
        for (const auto& p : tc.prestate)
            out += "        " + format_path(p.path) + " = " + format_literal(p.value) + "\n";
        out += "    }\n";
    }
    out += "    events {\n";
    for (const auto& ev : tc.events)
        out += "        " + format_event(ev) + "\n";
    out += "    }\n";
    if (!tc.expectations.empty()) {
        out += "    expect {\n";
        for (const auto& ex : tc.expectations)
            out += "        " + format_expectation(ex) + "\n";
        out += "    }\n";
    }
    out += "}\n";
    return out;
}

std::string format_dbdl(const TestSuite& suite)
{
    std::string out;
    for (const auto& tc : suite.cases) {
        if (!out.empty())
            out += "\n";
        out += format_case(tc);
    }
    return out;
}

Address account_address(std::string_view alias)
{
    return to_address(layout::keccak256_word("kaya:" + std::string{alias}));
}

Address contract_address(std::string_view alias)
{
    return to_address(layout::keccak256_word("kaya:contract:" + std::string{alias}));
}

}  // namespace kaya::dbdl
