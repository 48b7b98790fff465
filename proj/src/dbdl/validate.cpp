// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/dbdl/validate.hpp>

#include <map>
#include <optional>
#include <set>

namespace kaya::dbdl {

using minisol::ElementaryKind;
using minisol::ElementaryType;
using minisol::TypeExpr;

void SourceSet::add(std::string name, minisol::SourceUnit unit)
{
    sources_.push_back({std::move(name), std::move(unit)});
}

namespace {

std::string_view file_component(std::string_view path) noexcept
{
    const auto slash = path.find_last_of("/\\");
    return slash == std::string_view::npos ? path : path.substr(slash + 1);
}

}  // namespace

const minisol::SourceUnit* SourceSet::find(std::string_view ref) const noexcept
{
    for (const auto& s : sources_)
        if (s.name == ref)
            return &s.unit;
    for (const auto& s : sources_)
        if (file_component(s.name) == file_component(ref))
            return &s.unit;
    return nullptr;
}

const minisol::ContractDecl* bind_contract(const minisol::SourceUnit& unit, std::string_view alias) noexcept
{
    if (const auto* c = unit.find_contract(alias))
        return c;
    return unit.contracts.size() == 1 ? &unit.contracts.front() : nullptr;
}

const BoundContract* BoundCase::find_contract(std::string_view alias) const noexcept
{
    for (const auto& c : contracts)
        if (c.alias == alias)
            return &c;
    return nullptr;
}

namespace {

class Binder {
public:
    Binder(const TestCase& tc, const SourceSet& sources) : tc_{tc}, sources_{sources} {}

    std::vector<Diagnostic> diags;
    BoundCase out;

    void run()
    {
        diags = check_names(tc_);
        out.name = tc_.name;
        bind_contracts();
        for (const auto& acc : tc_.accounts) {
            const auto addr = account_address(acc.alias);
            addresses_.emplace(acc.alias, addr);
            out.balances.emplace_back(addr, acc.balance);
            out.aliases.emplace(to_word(addr), acc.alias);
        }
        for (const auto& p : tc_.prestate) {
            auto target = bind_path(p.path);
            if (!target)
                continue;
            auto v = coerce(p.value, target->type, ErrorCode::type_mismatch, ErrorCode::value_overflow,
                            p.path.pos);
            if (v)
                out.prestate.push_back({std::move(target->path), target->type, *v});
        }
        for (const auto& ev : tc_.events)
            bind_event(ev);
        for (const auto& ex : tc_.expectations) {
            auto target = bind_path(ex.path);
            if (!target)
                continue;
            auto v = coerce(ex.expected, target->type, ErrorCode::type_mismatch, ErrorCode::value_overflow,
                            ex.path.pos);
            if (v)
                out.expectations.push_back(
                    {std::move(target->path), target->type, ex.cmp, *v, format_expectation(ex)});
        }
    }

private:
    struct Target {
        layout::VariablePath path;
        ElementaryType type;
    };

    const TestCase& tc_;
    const SourceSet& sources_;
    std::map<std::string, Address> addresses_;

    void report(ErrorCode code, std::string message, Pos pos)
    {
        diags.push_back({code, std::move(message), pos.line, pos.column});
    }

    void bind_contracts()
    {
        for (const auto& ref : tc_.contracts) {
            const auto* unit = sources_.find(ref.source);
            if (!unit) {
                report(ErrorCode::unknown_source, "no contract source named \"" + ref.source + "\"", ref.pos);
                continue;
            }
            const auto* decl = bind_contract(*unit, ref.alias);
            if (!decl) {
                report(ErrorCode::unknown_contract,
                       "\"" + ref.source + "\" has no contract named '" + ref.alias + "'", ref.pos);
                continue;
            }
            if (out.find_contract(ref.alias))
                continue;
            const auto addr = contract_address(ref.alias);
            addresses_.emplace(ref.alias, addr);
            out.aliases.emplace(to_word(addr), ref.alias);
            out.contracts.push_back({ref.alias, *decl, layout::compute_layout(*decl), addr});
        }
    }

    std::optional<Word> coerce(const Literal& lit, const ElementaryType& type, ErrorCode kind_error,
                               ErrorCode overflow_error, Pos pos)
    {
        const auto text = format_literal(lit);
        switch (lit.kind) {
        case Literal::Kind::alias: {
            const auto it = addresses_.find(lit.alias);
            if (it == addresses_.end())
                return std::nullopt;  // reported by check_names
            if (type.kind != ElementaryKind::address) {
                report(kind_error, "alias '" + text + "' used where " + to_string(type) + " is expected", pos);
                return std::nullopt;
            }
            return to_word(it->second);
        }
        case Literal::Kind::boolean:
            if (type.kind != ElementaryKind::boolean) {
                report(kind_error, "'" + text + "' used where " + to_string(type) + " is expected", pos);
                return std::nullopt;
            }
            return lit.value;
        case Literal::Kind::number:
        case Literal::Kind::hex:
            break;
        }
        const Word limit = type.kind == ElementaryKind::boolean ? Word{1} : width_mask(type.width());
        if (lit.value > limit) {
            report(overflow_error, text + " does not fit " + to_string(type), pos);
            return std::nullopt;
        }
        return lit.value;
    }

    std::optional<Target> bind_path(const Path& p)
    {
        const auto* contract = out.find_contract(p.contract);
        if (!contract)
            return std::nullopt;
        const auto* var = contract->layout.find(p.variable);
        if (!var) {
            report(ErrorCode::unknown_variable,
                   format_path(p) + ": '" + p.contract + "' has no state variable '" + p.variable + "'", p.pos);
            return std::nullopt;
        }
        layout::VariablePath path{p.contract, p.variable, {}};
        const TypeExpr* type = &var->type;
        const auto text = format_path(p);
        for (const auto& key : p.keys) {
            if (type->kind == TypeExpr::Kind::elementary) {
                report(ErrorCode::depth_mismatch, "too many accessors in " + text, p.pos);
                return std::nullopt;
            }
            if (type->kind == TypeExpr::Kind::mapping) {
                auto k = coerce(key, type->elem, ErrorCode::type_mismatch, ErrorCode::type_mismatch, p.pos);
                if (!k)
                    return std::nullopt;
                path.accessors.push_back(layout::Accessor::key(*k));
            }
            else {
                if (key.kind != Literal::Kind::number && key.kind != Literal::Kind::hex) {
                    report(ErrorCode::type_mismatch, "array index in " + text + " must be a number", p.pos);
                    return std::nullopt;
                }
                path.accessors.push_back(layout::Accessor::index(key.value));
            }
            type = &type->value_type();
        }
        if (p.length) {
            if (type->kind != TypeExpr::Kind::dyn_array) {
                report(ErrorCode::type_mismatch, text + ": .length needs a dynamic array", p.pos);
                return std::nullopt;
            }
            path.accessors.push_back(layout::Accessor::length());
        }
        else if (type->kind != TypeExpr::Kind::elementary) {
            report(ErrorCode::depth_mismatch, text + " does not name a value-type location", p.pos);
            return std::nullopt;
        }

        // Catches what only the layout knows, such as fixed-array bounds.
        layout::AddressRegistry scratch;
        try {
            layout::resolve_address(contract->layout, path, scratch);
        }
        catch (const Error& e) {
            report(e.code(), text + ": " + e.what(), p.pos);
            return std::nullopt;
        }
        const auto elementary = layout::location_type(contract->layout, path);
        return Target{std::move(path), elementary};
    }

    void bind_event(const Event& ev)
    {
        const auto* contract = out.find_contract(ev.contract);
        const auto sender = addresses_.find(ev.sender);
        if (!contract)
            return;
        const auto* fn = contract->decl.find_function(ev.function);
        if (!fn) {
            report(ErrorCode::unknown_function,
                   "'" + ev.contract + "' has no function '" + ev.function + "'", ev.pos);
            return;
        }
        if (fn->params.size() != ev.args.size()) {
            report(ErrorCode::arity_mismatch,
                   ev.contract + "." + ev.function + " takes " + std::to_string(fn->params.size()) +
                       " argument(s), got " + std::to_string(ev.args.size()),
                   ev.pos);
            return;
        }
        if (ev.value != 0 && !fn->payable) {
            report(ErrorCode::non_payable_value,
                   ev.contract + "." + ev.function + " is not payable but is sent " + format_amount(ev.value),
                   ev.pos);
            return;
        }
        BoundCall call{ev.contract, ev.function, {}, {}, ev.value, format_event(ev)};
        bool ok = true;
        for (std::size_t i = 0; i < ev.args.size(); ++i) {
            auto w = coerce(ev.args[i], fn->params[i].type, ErrorCode::argument_kind, ErrorCode::value_overflow,
                            ev.pos);
            ok = ok && w.has_value();
            call.args.push_back(w.value_or(Word{0}));
        }
        if (!ok || sender == addresses_.end())
            return;
        call.sender = sender->second;
        out.events.push_back(std::move(call));
    }
};

}  // namespace

std::vector<Diagnostic> validate(const TestCase& testcase, const SourceSet& sources)
{
    Binder b{testcase, sources};
    b.run();
    return std::move(b.diags);
}

std::vector<Diagnostic> validate(const TestSuite& suite, const SourceSet& sources)
{
    std::vector<Diagnostic> out;
    std::set<std::string> names;
    for (const auto& tc : suite.cases) {
        if (!names.insert(tc.name).second)
            out.push_back({ErrorCode::duplicate_name, "duplicate test case \"" + tc.name + "\"", tc.pos.line,
                           tc.pos.column});
        auto more = validate(tc, sources);
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

BoundCase bind_case(const TestCase& testcase, const SourceSet& sources)
{
    Binder b{testcase, sources};
    b.run();
    if (!b.diags.empty())
        throw DiagnosticError{std::move(b.diags)};
    return std::move(b.out);
}

}  // namespace kaya::dbdl
