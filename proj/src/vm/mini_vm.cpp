// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/error.hpp>
#include <kaya/vm/mini_vm.hpp>

#include <map>

namespace kaya::vm {

using minisol::BinaryOp;
using minisol::ElementaryKind;
using minisol::ElementaryType;
using minisol::Expr;
using minisol::LValue;
using minisol::Stmt;
using minisol::TypeExpr;

namespace {

struct Revert {
    std::string reason;
};

struct StepLimit {};

struct Value {
    BigInt v;
    ElementaryKind kind = ElementaryKind::uint_;
};

const BigInt& two_256()
{
    static const BigInt v = BigInt{1} << 256;
    return v;
}

const BigInt& int_min()
{
    static const BigInt v = -(BigInt{1} << 255);
    return v;
}

const BigInt& int_max()
{
    static const BigInt v = (BigInt{1} << 255) - 1;
    return v;
}

std::pair<BigInt, BigInt> range_of(const ElementaryType& t)
{
    switch (t.kind) {
    case ElementaryKind::boolean: return {0, 1};
    case ElementaryKind::int256: return {int_min(), int_max()};
    case ElementaryKind::address: return {0, (BigInt{1} << 160) - 1};
    case ElementaryKind::uint_: break;
    }
    return {0, (BigInt{1} << t.bits) - 1};
}

Word encode(const Value& val, const ElementaryType& t)
{
    const auto [lo, hi] = range_of(t);
    if (val.v < lo || val.v > hi)
        throw Revert{"value " + to_decimal(val.v) + " out of range for " + minisol::to_string(t)};
    return val.v < 0 ? Word{two_256() + val.v} : Word{val.v};
}

Value decode(const Word& w, const ElementaryType& t)
{
    switch (t.kind) {
    case ElementaryKind::int256: return {to_signed(w), t.kind};
    case ElementaryKind::boolean:
        if (w > 1)
            throw Revert{"TypeConfusion: bool location holds " + to_hex(w)};
        return {to_unsigned(w), t.kind};
    default: return {to_unsigned(w), t.kind};
    }
}

bool truth(const Value& v)
{
    if (v.kind != ElementaryKind::boolean)
        throw Revert{"TypeConfusion: condition is not a bool"};
    return v.v != 0;
}

Value boolean(bool b)
{
    return {b ? 1 : 0, ElementaryKind::boolean};
}

Value arithmetic(BinaryOp op, const Value& a, const Value& b)
{
    const bool is_signed = a.kind == ElementaryKind::int256 || b.kind == ElementaryKind::int256;
    BigInt r;
    switch (op) {
    case BinaryOp::add: r = a.v + b.v; break;
    case BinaryOp::sub: r = a.v - b.v; break;
    case BinaryOp::mul: r = a.v * b.v; break;
    case BinaryOp::div:
        if (b.v == 0)
            throw Revert{"division by zero"};
        r = a.v / b.v;
        break;
    case BinaryOp::mod:
        if (b.v == 0)
            throw Revert{"division by zero"};
        r = a.v % b.v;
        break;
    default: throw Revert{"not an arithmetic operator"};
    }
    const bool fits = is_signed ? (r >= int_min() && r <= int_max()) : (r >= 0 && r < two_256());
    if (!fits)
        throw Revert{"arithmetic overflow"};
    return {std::move(r), is_signed ? ElementaryKind::int256 : ElementaryKind::uint_};
}

BinaryOp to_binary(minisol::AssignOp op)
{
    switch (op) {
    case minisol::AssignOp::add: return BinaryOp::add;
    case minisol::AssignOp::sub: return BinaryOp::sub;
    case minisol::AssignOp::mul: return BinaryOp::mul;
    case minisol::AssignOp::assign: break;
    }
    return BinaryOp::add;
}

void collect_locals(const std::vector<Stmt>& body, std::vector<const Stmt*>& out)
{
    for (const auto& s : body) {
        if (s.kind == Stmt::Kind::local)
            out.push_back(&s);
        collect_locals(s.body, out);
        collect_locals(s.else_body, out);
    }
}

class Interpreter {
public:
    Interpreter(WorldState& state, const DeployedContract& contract, const CallContext& ctx,
                std::uint64_t step_limit, std::size_t event_index)
        : state_{state}, contract_{contract}, ctx_{ctx}, limit_{step_limit}, event_{event_index}
    {}

    std::vector<TraceRecord> traces;
    std::optional<Word> returned;
    std::uint64_t steps = 0;

    void run(const minisol::FunctionDecl& fn, const std::vector<Word>& args)
    {
        fn_ = &fn;
        if (ctx_.value != 0) {
            if (!fn.payable)
                throw Revert{"function " + fn.name + " is not payable"};
            const Word have = state_.balance(ctx_.sender);
            if (have < ctx_.value)
                throw Revert{"insufficient balance for call value"};
            state_.set_balance(ctx_.sender, have - ctx_.value);
            state_.set_balance(contract_.address, state_.balance(contract_.address) + ctx_.value);
        }
        for (std::size_t i = 0; i < fn.params.size(); ++i)
            locals_[fn.params[i].name] = {fn.params[i].type, args[i]};
        std::vector<const Stmt*> decls;
        collect_locals(fn.body, decls);
        for (const auto* d : decls)
            locals_[d->target.name] = {d->local_type, 0};

        exec(fn.body);
        if (fn.returns && !returned)
            returned = Word{0};
    }

private:
    struct Local {
        ElementaryType type;
        Word word = 0;
    };

    WorldState& state_;
    const DeployedContract& contract_;
    const CallContext& ctx_;
    std::uint64_t limit_;
    std::size_t event_;
    const minisol::FunctionDecl* fn_ = nullptr;
    std::map<std::string, Local> locals_;

    void step()
    {
        if (++steps > limit_)
            throw StepLimit{};
    }

    layout::SlotAddress resolve(const layout::VariablePath& path)
    {
        try {
            return layout::resolve_address(*contract_.layout, path, *contract_.registry);
        }
        catch (const Error& e) {
            throw Revert{e.what()};
        }
    }

    Word load_length(layout::VariablePath path)
    {
        path.accessors.push_back(layout::Accessor::length());
        return state_.load(contract_.alias, resolve(path).slot);
    }

    /// Path and type of a state-variable lvalue, evaluating its indices.
    std::pair<layout::VariablePath, const TypeExpr*> locate(const LValue& lv)
    {
        const auto* var = contract_.layout->find(lv.name);
        if (!var)
            throw Revert{"no state variable '" + lv.name + "'"};
        layout::VariablePath path{contract_.alias, lv.name, {}};
        const TypeExpr* type = &var->type;
        for (const auto& idx : lv.indices) {
            const Value v = eval(idx);
            switch (type->kind) {
            case TypeExpr::Kind::mapping: {
                Word key;
                try {
                    key = encode(v, type->elem);
                }
                catch (const Revert&) {
                    throw Revert{"mapping key " + to_decimal(v.v) + " out of range"};
                }
                path.accessors.push_back(layout::Accessor::key(key));
                break;
            }
            case TypeExpr::Kind::fixed_array:
                if (v.v < 0 || v.v >= type->length)
                    throw Revert{"index " + to_decimal(v.v) + " out of bounds"};
                path.accessors.push_back(layout::Accessor::index(Word{v.v}));
                break;
            case TypeExpr::Kind::dyn_array:
                if (v.v < 0 || v.v >= BigInt{load_length(path)})
                    throw Revert{"index " + to_decimal(v.v) + " out of bounds"};
                path.accessors.push_back(layout::Accessor::index(Word{v.v}));
                break;
            case TypeExpr::Kind::elementary:
                throw Revert{"too many indices on '" + lv.name + "'"};
            }
            type = &type->value_type();
        }
        return {std::move(path), type};
    }

    Value read(const LValue& lv)
    {
        if (const auto it = locals_.find(lv.name); it != locals_.end())
            return decode(it->second.word, it->second.type);
        const auto [path, type] = locate(lv);
        if (type->kind != TypeExpr::Kind::elementary)
            throw Revert{"'" + lv.name + "' is not a value"};
        const auto a = resolve(path);
        return decode(extract_bytes(state_.load(contract_.alias, a.slot), a.offset, a.width), type->elem);
    }

    void store(const layout::VariablePath& path, const ElementaryType& type, const Value& value)
    {
        const Word encoded = encode(value, type);
        const auto a = resolve(path);
        const Word old_word = state_.load(contract_.alias, a.slot);
        const Word new_word = insert_bytes(old_word, a.offset, a.width, encoded);
        state_.store(contract_.alias, a.slot, new_word);
        traces.push_back({event_, traces.size(), contract_.alias, a.slot, a.offset, a.width, old_word, new_word});
    }

    void write(const LValue& lv, const Value& value)
    {
        if (auto it = locals_.find(lv.name); it != locals_.end()) {
            it->second.word = encode(value, it->second.type);
            return;
        }
        const auto [path, type] = locate(lv);
        if (type->kind != TypeExpr::Kind::elementary)
            throw Revert{"'" + lv.name + "' is not a value"};
        store(path, type->elem, value);
    }

    Value eval(const Expr& e)
    {
        switch (e.kind) {
        case Expr::Kind::number: return {to_unsigned(e.number), ElementaryKind::uint_};
        case Expr::Kind::boolean: return boolean(e.flag);
        case Expr::Kind::msg_sender: return {to_unsigned(to_word(ctx_.sender)), ElementaryKind::address};
        case Expr::Kind::msg_value: return {to_unsigned(ctx_.value), ElementaryKind::uint_};
        case Expr::Kind::access: return read(e.target);
        case Expr::Kind::length: {
            const auto [path, type] = locate(e.target);
            if (type->kind == TypeExpr::Kind::fixed_array)
                return {BigInt{type->length}, ElementaryKind::uint_};
            if (type->kind != TypeExpr::Kind::dyn_array)
                throw Revert{"'" + e.target.name + "' has no length"};
            return {to_unsigned(load_length(path)), ElementaryKind::uint_};
        }
        case Expr::Kind::logical_not: return boolean(!truth(eval(e.operands[0])));
        case Expr::Kind::binary: break;
        }

        switch (e.op) {
        case BinaryOp::logical_and:
            return boolean(truth(eval(e.operands[0])) && truth(eval(e.operands[1])));
        case BinaryOp::logical_or:
            return boolean(truth(eval(e.operands[0])) || truth(eval(e.operands[1])));
        default: break;
        }
        const Value a = eval(e.operands[0]);
        const Value b = eval(e.operands[1]);
        switch (e.op) {
        case BinaryOp::lt: return boolean(a.v < b.v);
        case BinaryOp::le: return boolean(a.v <= b.v);
        case BinaryOp::gt: return boolean(a.v > b.v);
        case BinaryOp::ge: return boolean(a.v >= b.v);
        case BinaryOp::eq: return boolean(a.v == b.v);
        case BinaryOp::ne: return boolean(a.v != b.v);
        default: return arithmetic(e.op, a, b);
        }
    }

    /// True once a return statement ran.
    bool exec(const std::vector<Stmt>& body)
    {
        for (const auto& s : body) {
            if (exec(s))
                return true;
        }
        return false;
    }

    bool exec(const Stmt& s)
    {
        step();
        switch (s.kind) {
        case Stmt::Kind::assign: {
            Value v = eval(s.exprs[0]);
            if (s.assign_op != minisol::AssignOp::assign)
                v = arithmetic(to_binary(s.assign_op), read(s.target), v);
            write(s.target, v);
            return false;
        }
        case Stmt::Kind::require:
            if (!truth(eval(s.exprs[0])))
                throw Revert{s.message.value_or("require failed")};
            return false;
        case Stmt::Kind::if_:
            if (truth(eval(s.exprs[0])))
                return exec(s.body);
            return s.has_else && exec(s.else_body);
        case Stmt::Kind::for_: {
            const LValue counter{s.target.name, {}};
            write(counter, eval(s.exprs[0]));
            for (;;) {
                step();
                if (!truth(eval(s.exprs[1])))
                    return false;
                if (exec(s.body))
                    return true;
                write(counter, arithmetic(BinaryOp::add, read(counter), eval(s.exprs[2])));
            }
        }
        case Stmt::Kind::return_:
            if (!s.exprs.empty()) {
                const Value v = eval(s.exprs[0]);
                if (fn_->returns)
                    returned = encode(v, *fn_->returns);
            }
            else if (fn_->returns) {
                returned = Word{0};
            }
            return true;
        case Stmt::Kind::pay: {
            const Value to = eval(s.exprs[0]);
            if (to.kind != ElementaryKind::address)
                throw Revert{"TypeConfusion: pay recipient is not an address"};
            const Word amount = encode(eval(s.exprs[1]), ElementaryType::uint(256));
            const Word have = state_.balance(contract_.address);
            if (have < amount)
                throw Revert{"insufficient contract balance"};
            const Address recipient = to_address(Word{to.v});
            state_.set_balance(contract_.address, have - amount);
            state_.set_balance(recipient, state_.balance(recipient) + amount);
            return false;
        }
        case Stmt::Kind::local: {
            const Value v = eval(s.exprs[0]);
            locals_[s.target.name].word = encode(v, s.local_type);
            return false;
        }
        case Stmt::Kind::push: {
            const Value v = eval(s.exprs[0]);
            const auto [path, type] = locate(s.target);
            if (type->kind != TypeExpr::Kind::dyn_array || !type->value_type().is_value_type())
                throw Revert{"'" + s.target.name + "' does not support push"};
            const auto& elem = type->value_type().elem;
            encode(v, elem);  // range check before any write
            const Word length = load_length(path);
            auto length_path = path;
            length_path.accessors.push_back(layout::Accessor::length());
            store(length_path, ElementaryType::uint(256), {to_unsigned(length) + 1, ElementaryKind::uint_});
            auto elem_path = path;
            elem_path.accessors.push_back(layout::Accessor::index(length));
            store(elem_path, elem, v);
            return false;
        }
        }
        return false;
    }
};

Word coerce_argument(const Word& arg, const minisol::Param& p, std::size_t index)
{
    const Word limit = p.type.kind == ElementaryKind::boolean ? Word{1} : width_mask(p.type.width());
    if (arg > limit)
        throw Error{ErrorCode::argument_kind,
                    "argument " + std::to_string(index + 1) + " does not fit " + minisol::to_string(p.type)};
    return arg;
}

}  // namespace

WorldState MiniVm::deploy_prestate(std::span<const DeployedContract> contracts, std::span<const Balance> balances,
                                   std::span<const PreStateWrite> params) const
{
    return vm::deploy_prestate(contracts, balances, params);
}

ExecutionOutcome MiniVm::execute_call(WorldState& state, const DeployedContract& contract, std::string_view function,
                                      const CallContext& ctx, std::uint64_t step_limit,
                                      std::size_t event_index) const
{
    const auto* fn = contract.decl->find_function(function);
    if (!fn)
        throw Error{ErrorCode::unknown_function,
                    "'" + contract.alias + "' has no function '" + std::string{function} + "'"};
    if (fn->params.size() != ctx.args.size())
        throw Error{ErrorCode::arity_mismatch, contract.alias + "." + fn->name + " takes " +
                                                   std::to_string(fn->params.size()) + " argument(s), got " +
                                                   std::to_string(ctx.args.size())};
    std::vector<Word> args;
    for (std::size_t i = 0; i < ctx.args.size(); ++i)
        args.push_back(coerce_argument(ctx.args[i], fn->params[i], i));

    const auto before = state.accounts();
    const auto token = state.snapshot();
    Interpreter interp{state, contract, ctx, step_limit, event_index};
    ExecutionOutcome out;
    try {
        interp.run(*fn, args);
        out.status = Status::success;
        out.return_value = interp.returned;
        out.traces = std::move(interp.traces);
    }
    catch (const Revert& r) {
        state.rollback(token);
        out.status = Status::revert;
        out.reason = r.reason;
    }
    catch (const StepLimit&) {
        state.rollback(token);
        out.status = Status::step_limit_exceeded;
        out.reason = "step limit of " + std::to_string(step_limit) + " exceeded";
    }
    state.discard(token);
    out.steps = interp.steps;

    for (const auto& [address, wei] : state.accounts()) {
        const auto it = before.find(address);
        const BigInt delta = BigInt{wei} - (it == before.end() ? BigInt{0} : BigInt{it->second});
        if (delta != 0)
            out.balance_deltas.emplace(address, delta);
    }
    return out;
}

}  // namespace kaya::vm
