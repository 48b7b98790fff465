// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/minisol/ast.hpp>

#include <algorithm>

namespace kaya::minisol {

unsigned ElementaryType::width() const noexcept
{
    switch (kind) {
    case ElementaryKind::uint_: return bits / 8;
    case ElementaryKind::int256: return 32;
    case ElementaryKind::boolean: return 1;
    case ElementaryKind::address: return 20;
    }
    return 32;
}

TypeExpr TypeExpr::elementary(ElementaryType t)
{
    TypeExpr out;
    out.kind = Kind::elementary;
    out.elem = t;
    return out;
}

TypeExpr TypeExpr::mapping(ElementaryType key, TypeExpr value)
{
    TypeExpr out;
    out.kind = Kind::mapping;
    out.elem = key;
    out.inner.push_back(std::move(value));
    return out;
}

TypeExpr TypeExpr::dyn_array(TypeExpr elem)
{
    TypeExpr out;
    out.kind = Kind::dyn_array;
    out.inner.push_back(std::move(elem));
    return out;
}

TypeExpr TypeExpr::fixed_array(TypeExpr elem, std::uint64_t length)
{
    TypeExpr out;
    out.kind = Kind::fixed_array;
    out.inner.push_back(std::move(elem));
    out.length = length;
    return out;
}

std::string to_string(const ElementaryType& type)
{
    switch (type.kind) {
    case ElementaryKind::uint_: return "uint" + std::to_string(type.bits);
    case ElementaryKind::int256: return "int256";
    case ElementaryKind::boolean: return "bool";
    case ElementaryKind::address: return "address";
    }
    return "?";
}

std::string to_string(const TypeExpr& type)
{
    switch (type.kind) {
    case TypeExpr::Kind::elementary:
        return to_string(type.elem);
    case TypeExpr::Kind::mapping:
        return "mapping(" + to_string(type.elem) + " => " + to_string(type.value_type()) + ")";
    case TypeExpr::Kind::dyn_array:
        return to_string(type.value_type()) + "[]";
    case TypeExpr::Kind::fixed_array:
        return to_string(type.value_type()) + "[" + std::to_string(type.length) + "]";
    }
    return "?";
}

std::string_view to_string(BinaryOp op) noexcept
{
    switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::mod: return "%";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    case BinaryOp::eq: return "==";
    case BinaryOp::ne: return "!=";
    case BinaryOp::logical_and: return "&&";
    case BinaryOp::logical_or: return "||";
    }
    return "?";
}

std::string_view to_string(AssignOp op) noexcept
{
    switch (op) {
    case AssignOp::assign: return "=";
    case AssignOp::add: return "+=";
    case AssignOp::sub: return "-=";
    case AssignOp::mul: return "*=";
    }
    return "?";
}

Expr Expr::make_number(Word value)
{
    Expr e;
    e.kind = Kind::number;
    e.number = value;
    return e;
}

Expr Expr::make_bool(bool value)
{
    Expr e;
    e.kind = Kind::boolean;
    e.flag = value;
    return e;
}

Expr Expr::make_msg_sender()
{
    Expr e;
    e.kind = Kind::msg_sender;
    return e;
}

Expr Expr::make_msg_value()
{
    Expr e;
    e.kind = Kind::msg_value;
    return e;
}

Expr Expr::make_access(LValue target)
{
    Expr e;
    e.kind = Kind::access;
    e.target = std::move(target);
    return e;
}

Expr Expr::make_length(LValue target)
{
    Expr e;
    e.kind = Kind::length;
    e.target = std::move(target);
    return e;
}

Expr Expr::make_not(Expr operand)
{
    Expr e;
    e.kind = Kind::logical_not;
    e.operands.push_back(std::move(operand));
    return e;
}

Expr Expr::make_binary(BinaryOp op, Expr lhs, Expr rhs)
{
    Expr e;
    e.kind = Kind::binary;
    e.op = op;
    e.operands.push_back(std::move(lhs));
    e.operands.push_back(std::move(rhs));
    return e;
}

const StateVarDecl* ContractDecl::find_variable(std::string_view name) const noexcept
{
    auto it = std::find_if(state_vars.begin(), state_vars.end(),
                           [&](const auto& v) { return v.name == name; });
    return it == state_vars.end() ? nullptr : &*it;
}

const FunctionDecl* ContractDecl::find_function(std::string_view name) const noexcept
{
    auto it = std::find_if(functions.begin(), functions.end(),
                           [&](const auto& f) { return f.name == name; });
    return it == functions.end() ? nullptr : &*it;
}

const ContractDecl* SourceUnit::find_contract(std::string_view name) const noexcept
{
    auto it = std::find_if(contracts.begin(), contracts.end(),
                           [&](const auto& c) { return c.name == name; });
    return it == contracts.end() ? nullptr : &*it;
}

}  // namespace kaya::minisol
