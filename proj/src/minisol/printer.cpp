// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/lexer.hpp>
#include <kaya/minisol/parser.hpp>

namespace kaya::minisol {

namespace {

int precedence(BinaryOp op) noexcept
{
    switch (op) {
    case BinaryOp::logical_or: return 1;
    case BinaryOp::logical_and: return 2;
    case BinaryOp::eq:
    case BinaryOp::ne: return 3;
    case BinaryOp::lt:
    case BinaryOp::le:
    case BinaryOp::gt:
    case BinaryOp::ge: return 4;
    case BinaryOp::add:
    case BinaryOp::sub: return 5;
    case BinaryOp::mul:
    case BinaryOp::div:
    case BinaryOp::mod: return 6;
    }
    return 0;
}

constexpr int unary_precedence = 7;

int precedence(const Expr& e) noexcept
{
    if (e.kind == Expr::Kind::binary)
        return precedence(e.op);
    if (e.kind == Expr::Kind::logical_not)
        return unary_precedence;
    return 8;
}

class Printer {
public:
    std::string out;

    void contract(const ContractDecl& c)
    {
        out += "contract " + c.name + " {\n";
        for (const auto& v : c.state_vars)
            out += "    " + to_string(v.type) + " " + v.name + ";\n";
        for (const auto& f : c.functions) {
            if (!c.state_vars.empty() || &f != &c.functions.front())
                out += "\n";
            function(f);
        }
        out += "}\n";
    }

    void expr(const Expr& e)
    {
        switch (e.kind) {
        case Expr::Kind::number:
            out += to_decimal(e.number);
            break;
        case Expr::Kind::boolean:
            out += e.flag ? "true" : "false";
            break;
        case Expr::Kind::msg_sender:
            out += "msg.sender";
            break;
        case Expr::Kind::msg_value:
            out += "msg.value";
            break;
        case Expr::Kind::access:
            lvalue(e.target);
            break;
        case Expr::Kind::length:
            lvalue(e.target);
            out += ".length";
            break;
        case Expr::Kind::logical_not:
            out += "!";
            operand(e.operands[0], unary_precedence, false);
            break;
        case Expr::Kind::binary: {
            const int p = precedence(e.op);
            operand(e.operands[0], p, false);
            out += " ";
            out += to_string(e.op);
            out += " ";
            operand(e.operands[1], p, true);
            break;
        }
        }
    }

private:
    void indent(int depth) { out.append(static_cast<std::size_t>(depth) * 4, ' '); }

    void function(const FunctionDecl& f)
    {
        out += "    function " + f.name + "(";
        for (std::size_t i = 0; i < f.params.size(); ++i) {
            if (i != 0)
                out += ", ";
            out += to_string(f.params[i].type) + " " + f.params[i].name;
        }
        out += ")";
        if (f.payable)
            out += " payable";
        if (f.returns)
            out += " returns (" + to_string(*f.returns) + ")";
        out += " ";
        block(f.body, 1);
        out += "\n";
    }

    void block(const std::vector<Stmt>& body, int depth)
    {
        out += "{\n";
        for (const auto& s : body)
            stmt(s, depth + 1);
        indent(depth);
        out += "}";
    }

    void lvalue(const LValue& lv)
    {
        out += lv.name;
        for (const auto& idx : lv.indices) {
            out += "[";
            expr(idx);
            out += "]";
        }
    }

    // Left-associative: a right operand of equal precedence needs parentheses.
    void operand(const Expr& e, int parent, bool right)
    {
        const int p = precedence(e);
        const bool parens = p < parent || (right && p == parent);
        if (parens)
            out += "(";
        expr(e);
        if (parens)
            out += ")";
    }

    void stmt(const Stmt& s, int depth)
    {
        indent(depth);
        switch (s.kind) {
        case Stmt::Kind::assign:
            lvalue(s.target);
            out += " ";
            out += to_string(s.assign_op);
            out += " ";
            expr(s.exprs[0]);
            out += ";\n";
            break;
        case Stmt::Kind::require:
            out += "require(";
            expr(s.exprs[0]);
            if (s.message)
                out += ", " + quote(*s.message);
            out += ");\n";
            break;
        case Stmt::Kind::if_:
            out += "if (";
            expr(s.exprs[0]);
            out += ") ";
            block(s.body, depth);
            if (s.has_else) {
                out += " else ";
                block(s.else_body, depth);
            }
            out += "\n";
            break;
        case Stmt::Kind::for_:
            out += "for (" + s.target.name + " = ";
            expr(s.exprs[0]);
            out += "; ";
            expr(s.exprs[1]);
            out += "; " + s.target.name + " += ";
            expr(s.exprs[2]);
            out += ") ";
            block(s.body, depth);
            out += "\n";
            break;
        case Stmt::Kind::return_:
            out += "return";
            if (!s.exprs.empty()) {
                out += " ";
                expr(s.exprs[0]);
            }
            out += ";\n";
            break;
        case Stmt::Kind::pay:
            out += "pay(";
            expr(s.exprs[0]);
            out += ", ";
            expr(s.exprs[1]);
            out += ");\n";
            break;
        case Stmt::Kind::local:
            out += to_string(s.local_type) + " " + s.target.name + " = ";
            expr(s.exprs[0]);
            out += ";\n";
            break;
        case Stmt::Kind::push:
            lvalue(s.target);
            out += ".push(";
            expr(s.exprs[0]);
            out += ");\n";
            break;
        }
    }
};

}  // namespace

std::string format_contract(const ContractDecl& contract)
{
    Printer p;
    p.contract(contract);
    return p.out;
}

std::string format_source(const SourceUnit& unit)
{
    std::string out;
    for (const auto& c : unit.contracts) {
        if (!out.empty())
            out += "\n";
        out += format_contract(c);
    }
    return out;
}

std::string format_expr(const Expr& expr)
{
    Printer p;
    p.expr(expr);
    return p.out;
}

}  // namespace kaya::minisol
