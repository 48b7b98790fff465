// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/common/word.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kaya::minisol {

enum class ElementaryKind : std::uint8_t { uint_, int256, boolean, address };

struct ElementaryType {
    ElementaryKind kind = ElementaryKind::uint_;
    unsigned bits = 256;  // meaningful for uint_ only

    static ElementaryType uint(unsigned bits) { return {ElementaryKind::uint_, bits}; }
    static ElementaryType int256() { return {ElementaryKind::int256, 256}; }
    static ElementaryType boolean() { return {ElementaryKind::boolean, 8}; }
    static ElementaryType address() { return {ElementaryKind::address, 160}; }

    /// Storage width in bytes (1..32).
    unsigned width() const noexcept;
    bool is_signed() const noexcept { return kind == ElementaryKind::int256; }

    friend bool operator==(const ElementaryType&, const ElementaryType&) = default;
};

struct TypeExpr {
    enum class Kind : std::uint8_t { elementary, mapping, dyn_array, fixed_array };

    Kind kind = Kind::elementary;
    /// The type itself for elementary, the key type for mappings.
    ElementaryType elem;
    /// Value type (mapping) or element type (arrays); empty for elementary.
    std::vector<TypeExpr> inner;
    std::uint64_t length = 0;  // fixed_array only

    static TypeExpr elementary(ElementaryType t);
    static TypeExpr mapping(ElementaryType key, TypeExpr value);
    static TypeExpr dyn_array(TypeExpr elem);
    static TypeExpr fixed_array(TypeExpr elem, std::uint64_t length);

    bool is_value_type() const noexcept { return kind == Kind::elementary; }
    const TypeExpr& value_type() const { return inner.front(); }

    friend bool operator==(const TypeExpr&, const TypeExpr&) = default;
};

std::string to_string(const ElementaryType& type);
std::string to_string(const TypeExpr& type);

struct Expr;

/// IDENT { "[" expr "]" }
struct LValue {
    std::string name;
    std::vector<Expr> indices;

    friend bool operator==(const LValue&, const LValue&) = default;
};

enum class BinaryOp : std::uint8_t {
    add, sub, mul, div, mod,
    lt, le, gt, ge, eq, ne,
    logical_and, logical_or,
};

std::string_view to_string(BinaryOp op) noexcept;

struct Expr {
    enum class Kind : std::uint8_t {
        number,      // literal
        boolean,     // literal
        msg_sender,
        msg_value,
        access,      // lvalue read
        length,      // lvalue.length
        logical_not,
        binary,
    };

    Kind kind = Kind::number;
    Word number = 0;
    bool flag = false;
    LValue target;
    BinaryOp op = BinaryOp::add;
    std::vector<Expr> operands;

    static Expr make_number(Word value);
    static Expr make_bool(bool value);
    static Expr make_msg_sender();
    static Expr make_msg_value();
    static Expr make_access(LValue target);
    static Expr make_length(LValue target);
    static Expr make_not(Expr operand);
    static Expr make_binary(BinaryOp op, Expr lhs, Expr rhs);

    friend bool operator==(const Expr&, const Expr&) = default;
};

enum class AssignOp : std::uint8_t { assign, add, sub, mul };

std::string_view to_string(AssignOp op) noexcept;

struct Stmt {
    enum class Kind : std::uint8_t {
        assign,     // target op value
        require,    // require(cond [, message])
        if_,        // if (cond) body [else else_body]
        for_,       // for (counter = init; cond; counter += step) body
        return_,    // return [value]
        pay,        // pay(to, amount)
        local,      // elem name = value
        push,       // target.push(value)
    };

    Kind kind = Kind::assign;
    LValue target;
    AssignOp assign_op = AssignOp::assign;
    /// Meaning per kind: assign/local/push value; require/if/for condition;
    /// for init+step; return value; pay recipient+amount.
    std::vector<Expr> exprs;
    std::optional<std::string> message;
    ElementaryType local_type;
    std::vector<Stmt> body;
    std::vector<Stmt> else_body;
    bool has_else = false;

    friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct Param {
    std::string name;
    ElementaryType type;

    friend bool operator==(const Param&, const Param&) = default;
};

struct FunctionDecl {
    std::string name;
    std::vector<Param> params;
    bool payable = false;
    std::optional<ElementaryType> returns;
    std::vector<Stmt> body;

    friend bool operator==(const FunctionDecl&, const FunctionDecl&) = default;
};

struct StateVarDecl {
    std::string name;
    TypeExpr type;
    std::size_t decl_index = 0;

    friend bool operator==(const StateVarDecl&, const StateVarDecl&) = default;
};

struct ContractDecl {
    std::string name;
    std::vector<StateVarDecl> state_vars;
    std::vector<FunctionDecl> functions;

    const StateVarDecl* find_variable(std::string_view name) const noexcept;
    const FunctionDecl* find_function(std::string_view name) const noexcept;

    friend bool operator==(const ContractDecl&, const ContractDecl&) = default;
};

struct SourceUnit {
    std::string text;
    std::vector<ContractDecl> contracts;

    const ContractDecl* find_contract(std::string_view name) const noexcept;
};

}  // namespace kaya::minisol
