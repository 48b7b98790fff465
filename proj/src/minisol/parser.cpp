// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/lexer.hpp>
#include <kaya/minisol/parser.hpp>

#include <map>
#include <set>

namespace kaya::minisol {

namespace {

const std::set<std::string, std::less<>> reserved_words = {
    "contract", "function", "mapping", "payable", "returns", "require", "if",   "else",
    "for",      "return",   "pay",     "true",    "false",   "msg",     "bool", "address",
    "int256",   "push",     "length",
};

std::optional<ElementaryType> elementary_keyword(std::string_view word)
{
    if (word == "bool")
        return ElementaryType::boolean();
    if (word == "address")
        return ElementaryType::address();
    if (word == "int256")
        return ElementaryType::int256();
    if (word.starts_with("uint") && word.size() > 4 && word[4] != '0') {
        unsigned bits = 0;
        for (char c : word.substr(4)) {
            if (c < '0' || c > '9')
                return std::nullopt;
            bits = bits * 10 + static_cast<unsigned>(c - '0');
            if (bits > 256)
                return std::nullopt;
        }
        if (bits >= 8 && bits % 8 == 0)
            return ElementaryType::uint(bits);
    }
    return std::nullopt;
}

bool is_reserved(std::string_view word)
{
    return reserved_words.contains(word) || elementary_keyword(word).has_value();
}

struct Site {
    std::string name;
    std::size_t line = 0;
    std::size_t column = 0;
};

enum class Use { read, write, length, push };

struct UseSite {
    Site site;
    std::size_t depth = 0;
    Use use = Use::read;
};

struct FunctionSites {
    Site name;
    std::vector<Site> params;
    std::vector<Site> locals;
    std::vector<UseSite> uses;
};

struct ContractSites {
    Site name;
    std::vector<Site> vars;
    std::vector<FunctionSites> functions;
};

class Parser {
public:
    explicit Parser(std::string_view text) : cur_{tokenize(text, CommentStyle::double_slash)} {}

    std::vector<ContractDecl> parse_unit()
    {
        std::vector<ContractDecl> out;
        while (!cur_.at_end())
            out.push_back(parse_contract());
        return out;
    }

    std::vector<ContractSites> sites;

private:
    Site expect_ident()
    {
        const Token& t = cur_.peek();
        if (t.kind != Token::Kind::identifier || is_reserved(t.text))
            cur_.fail(t, "identifier");
        cur_.next();
        return Site{t.text, t.line, t.column};
    }

    ContractDecl parse_contract()
    {
        cur_.expect("contract");
        sites.emplace_back();
        ContractDecl c;
        sites.back().name = expect_ident();
        c.name = sites.back().name.name;
        cur_.expect("{");
        while (!cur_.accept("}")) {
            if (cur_.peek().is("function")) {
                c.functions.push_back(parse_function());
                continue;
            }
            StateVarDecl v;
            v.type = parse_type();
            auto site = expect_ident();
            v.name = site.name;
            v.decl_index = c.state_vars.size();
            sites.back().vars.push_back(std::move(site));
            cur_.expect(";");
            c.state_vars.push_back(std::move(v));
        }
        return c;
    }

    ElementaryType parse_elementary()
    {
        const Token& t = cur_.peek();
        if (t.kind == Token::Kind::identifier) {
            if (auto e = elementary_keyword(t.text)) {
                cur_.next();
                return *e;
            }
        }
        cur_.fail(t, "elementary type");
    }

    TypeExpr parse_type()
    {
        TypeExpr base;
        if (cur_.accept("mapping")) {
            cur_.expect("(");
            const auto key = parse_elementary();
            cur_.expect("=>");
            auto value = parse_type();
            cur_.expect(")");
            base = TypeExpr::mapping(key, std::move(value));
        }
        else {
            base = TypeExpr::elementary(parse_elementary());
        }
        while (cur_.accept("[")) {
            if (cur_.accept("]")) {
                base = TypeExpr::dyn_array(std::move(base));
                continue;
            }
            const Token& n = cur_.expect(Token::Kind::number, "array length or ']'");
            const Word len = parse_word(n.text);
            if (len == 0 || len > Word{0xffffffffULL})
                throw DiagnosticError{{Diagnostic{ErrorCode::unsupported_type,
                                                  "fixed array length must be in 1..4294967295",
                                                  n.line, n.column}}};
            cur_.expect("]");
            base = TypeExpr::fixed_array(std::move(base), static_cast<std::uint64_t>(len));
        }
        return base;
    }

    FunctionDecl parse_function()
    {
        cur_.expect("function");
        auto& fs = sites.back().functions.emplace_back();
        fn_ = &fs;
        FunctionDecl f;
        fs.name = expect_ident();
        f.name = fs.name.name;
        cur_.expect("(");
        if (!cur_.peek().is(")")) {
            do {
                Param p;
                p.type = parse_elementary();
                auto site = expect_ident();
                p.name = site.name;
                fs.params.push_back(std::move(site));
                f.params.push_back(std::move(p));
            } while (cur_.accept(","));
        }
        cur_.expect(")");
        if (cur_.accept("payable"))
            f.payable = true;
        if (cur_.accept("returns")) {
            cur_.expect("(");
            f.returns = parse_elementary();
            cur_.expect(")");
        }
        f.body = parse_block();
        fn_ = nullptr;
        return f;
    }

    std::vector<Stmt> parse_block()
    {
        cur_.expect("{");
        std::vector<Stmt> out;
        while (!cur_.accept("}"))
            out.push_back(parse_stmt());
        return out;
    }

    Stmt parse_stmt()
    {
        const Token& t = cur_.peek();
        Stmt s;
        if (t.kind == Token::Kind::identifier && elementary_keyword(t.text)) {
            s.kind = Stmt::Kind::local;
            s.local_type = parse_elementary();
            auto site = expect_ident();
            s.target.name = site.name;
            fn_->locals.push_back(std::move(site));
            cur_.expect("=");
            s.exprs.push_back(parse_expr());
            cur_.expect(";");
            return s;
        }
        if (cur_.accept("require")) {
            s.kind = Stmt::Kind::require;
            cur_.expect("(");
            s.exprs.push_back(parse_expr());
            if (cur_.accept(","))
                s.message = cur_.expect(Token::Kind::string, "string literal").text;
            cur_.expect(")");
            cur_.expect(";");
            return s;
        }
        if (cur_.accept("if")) {
            s.kind = Stmt::Kind::if_;
            cur_.expect("(");
            s.exprs.push_back(parse_expr());
            cur_.expect(")");
            s.body = parse_block();
            if (cur_.accept("else")) {
                s.has_else = true;
                s.else_body = parse_block();
            }
            return s;
        }
        if (cur_.accept("for")) {
            s.kind = Stmt::Kind::for_;
            cur_.expect("(");
            auto counter = expect_ident();
            s.target.name = counter.name;
            fn_->uses.push_back({counter, 0, Use::write});
            cur_.expect("=");
            s.exprs.push_back(parse_expr());
            cur_.expect(";");
            s.exprs.push_back(parse_expr());
            cur_.expect(";");
            const auto step = expect_ident();
            if (step.name != s.target.name)
                throw DiagnosticError{{Diagnostic{ErrorCode::syntax_error,
                                                  "expected '" + s.target.name + "', found '" + step.name + "'",
                                                  step.line, step.column}}};
            cur_.expect("+=");
            s.exprs.push_back(parse_expr());
            cur_.expect(")");
            s.body = parse_block();
            return s;
        }
        if (cur_.accept("return")) {
            s.kind = Stmt::Kind::return_;
            if (!cur_.peek().is(";"))
                s.exprs.push_back(parse_expr());
            cur_.expect(";");
            return s;
        }
        if (cur_.accept("pay")) {
            s.kind = Stmt::Kind::pay;
            cur_.expect("(");
            s.exprs.push_back(parse_expr());
            cur_.expect(",");
            s.exprs.push_back(parse_expr());
            cur_.expect(")");
            cur_.expect(";");
            return s;
        }

        const auto use_index = fn_->uses.size();
        s.target = parse_lvalue(Use::write);
        if (cur_.accept(".")) {
            cur_.expect("push");
            s.kind = Stmt::Kind::push;
            fn_->uses[use_index].use = Use::push;
            cur_.expect("(");
            s.exprs.push_back(parse_expr());
            cur_.expect(")");
            cur_.expect(";");
            return s;
        }
        s.kind = Stmt::Kind::assign;
        const Token& op = cur_.peek();
        if (op.is("="))
            s.assign_op = AssignOp::assign;
        else if (op.is("+="))
            s.assign_op = AssignOp::add;
        else if (op.is("-="))
            s.assign_op = AssignOp::sub;
        else if (op.is("*="))
            s.assign_op = AssignOp::mul;
        else
            cur_.fail(op, "assignment operator or '.push'");
        cur_.next();
        s.exprs.push_back(parse_expr());
        cur_.expect(";");
        return s;
    }

    LValue parse_lvalue(Use use)
    {
        auto site = expect_ident();
        const auto use_index = fn_->uses.size();
        fn_->uses.push_back({site, 0, use});
        LValue lv;
        lv.name = site.name;
        while (cur_.accept("[")) {
            lv.indices.push_back(parse_expr());
            cur_.expect("]");
        }
        fn_->uses[use_index].depth = lv.indices.size();
        return lv;
    }

    static int precedence(const Token& t) noexcept
    {
        if (t.kind != Token::Kind::punct)
            return -1;
        const auto& s = t.text;
        if (s == "||")
            return 1;
        if (s == "&&")
            return 2;
        if (s == "==" || s == "!=")
            return 3;
        if (s == "<" || s == "<=" || s == ">" || s == ">=")
            return 4;
        if (s == "+" || s == "-")
            return 5;
        if (s == "*" || s == "/" || s == "%")
            return 6;
        return -1;
    }

    static BinaryOp binary_op(std::string_view s) noexcept
    {
        if (s == "+") return BinaryOp::add;
        if (s == "-") return BinaryOp::sub;
        if (s == "*") return BinaryOp::mul;
        if (s == "/") return BinaryOp::div;
        if (s == "%") return BinaryOp::mod;
        if (s == "<") return BinaryOp::lt;
        if (s == "<=") return BinaryOp::le;
        if (s == ">") return BinaryOp::gt;
        if (s == ">=") return BinaryOp::ge;
        if (s == "==") return BinaryOp::eq;
        if (s == "!=") return BinaryOp::ne;
        if (s == "&&") return BinaryOp::logical_and;
        return BinaryOp::logical_or;
    }

    // Left-associative precedence climbing.
    Expr parse_expr(int min_prec = 1)
    {
        Expr lhs = parse_unary();
        for (;;) {
            const int prec = precedence(cur_.peek());
            if (prec < min_prec)
                return lhs;
            const auto op = binary_op(cur_.next().text);
            Expr rhs = parse_expr(prec + 1);
            lhs = Expr::make_binary(op, std::move(lhs), std::move(rhs));
        }
    }

    Expr parse_unary()
    {
        if (cur_.accept("!"))
            return Expr::make_not(parse_unary());
        return parse_primary();
    }

    Expr parse_primary()
    {
        const Token& t = cur_.peek();
        if (t.kind == Token::Kind::number || t.kind == Token::Kind::hex) {
            cur_.next();
            try {
                return Expr::make_number(parse_word(t.text));
            }
            catch (const Error& e) {
                throw DiagnosticError{{Diagnostic{ErrorCode::syntax_error, e.what(), t.line, t.column}}};
            }
        }
        if (cur_.accept("true"))
            return Expr::make_bool(true);
        if (cur_.accept("false"))
            return Expr::make_bool(false);
        if (cur_.accept("(")) {
            Expr inner = parse_expr();
            cur_.expect(")");
            return inner;
        }
        if (cur_.accept("msg")) {
            cur_.expect(".");
            if (cur_.accept("sender"))
                return Expr::make_msg_sender();
            if (cur_.accept("value"))
                return Expr::make_msg_value();
            cur_.fail(cur_.peek(), "'sender' or 'value'");
        }
        if (t.kind != Token::Kind::identifier || is_reserved(t.text))
            cur_.fail(t, "expression");
        const auto use_index = fn_->uses.size();
        LValue lv = parse_lvalue(Use::read);
        if (cur_.peek().is(".") && cur_.peek(1).is("length")) {
            cur_.next();
            cur_.next();
            fn_->uses[use_index].use = Use::length;
            return Expr::make_length(std::move(lv));
        }
        return Expr::make_access(std::move(lv));
    }

    TokenCursor cur_;
    FunctionSites* fn_ = nullptr;
};

const TypeExpr* descend(const TypeExpr& type, std::size_t depth)
{
    const TypeExpr* t = &type;
    for (std::size_t i = 0; i < depth; ++i) {
        if (t->is_value_type())
            return nullptr;
        t = &t->value_type();
    }
    return t;
}

class Checker {
public:
    std::vector<Diagnostic> diags;

    void check(const std::vector<ContractDecl>& contracts, const std::vector<ContractSites>& sites)
    {
        std::set<std::string> contract_names;
        for (std::size_t i = 0; i < contracts.size(); ++i) {
            const auto& cs = sites[i];
            if (!contract_names.insert(cs.name.name).second)
                report(ErrorCode::duplicate_name, "duplicate contract '" + cs.name.name + "'", cs.name);
            check_contract(contracts[i], cs);
        }
    }

private:
    void report(ErrorCode code, std::string message, const Site& at)
    {
        diags.push_back(Diagnostic{code, std::move(message), at.line, at.column});
    }

    void check_contract(const ContractDecl& c, const ContractSites& cs)
    {
        std::set<std::string> members;
        for (const auto& v : cs.vars)
            if (!members.insert(v.name).second)
                report(ErrorCode::duplicate_name, "duplicate name '" + v.name + "'", v);
        for (const auto& f : cs.functions)
            if (!members.insert(f.name.name).second)
                report(ErrorCode::duplicate_name, "duplicate name '" + f.name.name + "'", f.name);

        for (std::size_t i = 0; i < c.functions.size(); ++i)
            check_function(c, cs.functions[i], members);
    }

    void check_function(const ContractDecl& c, const FunctionSites& fs, const std::set<std::string>& members)
    {
        std::set<std::string> locals;
        auto declare = [&](const Site& s) {
            if (members.contains(s.name) || !locals.insert(s.name).second)
                report(ErrorCode::duplicate_name, "duplicate name '" + s.name + "'", s);
        };
        for (const auto& p : fs.params)
            declare(p);
        for (const auto& l : fs.locals)
            declare(l);

        for (const auto& u : fs.uses) {
            if (locals.contains(u.site.name)) {
                if (u.depth != 0 || u.use == Use::length || u.use == Use::push)
                    report(ErrorCode::type_mismatch, "'" + u.site.name + "' is not an array or mapping", u.site);
                continue;
            }
            const auto* var = c.find_variable(u.site.name);
            if (var == nullptr) {
                report(ErrorCode::undeclared_name, "undeclared name '" + u.site.name + "'", u.site);
                continue;
            }
            const auto* t = descend(var->type, u.depth);
            if (t == nullptr) {
                report(ErrorCode::type_mismatch, "too many indices on '" + u.site.name + "'", u.site);
                continue;
            }
            switch (u.use) {
            case Use::read:
            case Use::write:
                if (!t->is_value_type())
                    report(ErrorCode::type_mismatch,
                           "'" + u.site.name + "' does not denote a value of elementary type", u.site);
                break;
            case Use::length:
                if (t->kind != TypeExpr::Kind::dyn_array && t->kind != TypeExpr::Kind::fixed_array)
                    report(ErrorCode::type_mismatch, "'.length' requires an array", u.site);
                break;
            case Use::push:
                if (t->kind != TypeExpr::Kind::dyn_array || !t->value_type().is_value_type())
                    report(ErrorCode::type_mismatch,
                           "'.push' requires a dynamic array of elementary type", u.site);
                break;
            }
        }
    }
};

}  // namespace

SourceUnit parse_source(std::string_view text)
{
    Parser parser{text};
    SourceUnit unit;
    unit.text = std::string{text};
    unit.contracts = parser.parse_unit();

    Checker checker;
    checker.check(unit.contracts, parser.sites);
    if (!checker.diags.empty())
        throw DiagnosticError{std::move(checker.diags)};
    return unit;
}

std::vector<VariableInfo> extract_variables(const ContractDecl& contract)
{
    std::vector<VariableInfo> out;
    out.reserve(contract.state_vars.size());
    for (const auto& v : contract.state_vars)
        out.push_back(VariableInfo{v.name, v.type, v.decl_index});
    return out;
}

}  // namespace kaya::minisol
