// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/error.hpp>
#include <kaya/layout/keccak.hpp>
#include <kaya/layout/storage_layout.hpp>

#include <algorithm>

namespace kaya::layout {

using minisol::ElementaryKind;
using minisol::ElementaryType;
using minisol::TypeExpr;

namespace {

Word hash_slot(const Word& slot)
{
    const auto bytes = to_bytes32(slot);
    return keccak256_word(bytes);
}

Word hash_key(const Word& key, const Word& slot)
{
    std::array<std::uint8_t, 64> buf{};
    const auto k = to_bytes32(key);
    const auto s = to_bytes32(slot);
    std::copy(k.begin(), k.end(), buf.begin());
    std::copy(s.begin(), s.end(), buf.begin() + 32);
    return keccak256_word(buf);
}

bool fits(const ElementaryType& type, const Word& value)
{
    if (type.kind == ElementaryKind::boolean)
        return value <= 1;
    return value <= width_mask(type.width());
}

std::string describe(const VariablePath& path)
{
    std::string out = path.contract + "." + path.root;
    for (const auto& a : path.accessors) {
        if (a.kind == Accessor::Kind::length)
            out += ".length";
        else
            out += "[" + to_hex(a.value) + "]";
    }
    return out;
}

[[noreturn]] void type_mismatch(const VariablePath& path, const std::string& why)
{
    throw Error{ErrorCode::type_mismatch, "TypeMismatch(" + describe(path) + "): " + why};
}

[[noreturn]] void depth_mismatch(const VariablePath& path)
{
    throw Error{ErrorCode::depth_mismatch,
                "DepthMismatch(" + describe(path) + "): accessors do not end at a value-type location"};
}

const Word max_slots{BigInt{1} << 64};

struct Walk {
    SlotAddress address;
    const TypeExpr* type = nullptr;
    bool derived = false;
};

// Shared by resolve_address and location_type; journals when a registry is given.
Walk walk(const StorageLayout& layout, const VariablePath& path, AddressRegistry* registry)
{
    const auto* var = layout.find(path.root);
    if (var == nullptr)
        type_mismatch(path, "no state variable named '" + path.root + "'");

    Walk w{var->base, &var->type, false};
    VariablePath prefix{path.contract, path.root, {}};

    for (std::size_t i = 0; i < path.accessors.size(); ++i) {
        const auto& acc = path.accessors[i];
        const TypeExpr& t = *w.type;
        if (acc.kind == Accessor::Kind::length) {
            if (i + 1 != path.accessors.size())
                depth_mismatch(path);
            if (t.kind != TypeExpr::Kind::dyn_array)
                type_mismatch(path, "length of a non-dynamic-array");
            w.address = SlotAddress{w.address.slot, 0, 32};
            w.type = nullptr;
            return w;
        }
        switch (t.kind) {
        case TypeExpr::Kind::elementary:
            depth_mismatch(path);
        case TypeExpr::Kind::mapping:
            if (acc.kind != Accessor::Kind::key)
                type_mismatch(path, "mapping accessed by index");
            if (!fits(t.elem, acc.value))
                type_mismatch(path, "key does not fit " + minisol::to_string(t.elem));
            w.address = SlotAddress{hash_key(acc.value, w.address.slot), 0, 32};
            w.derived = true;
            break;
        case TypeExpr::Kind::dyn_array:
        case TypeExpr::Kind::fixed_array: {
            if (acc.kind != Accessor::Kind::index)
                type_mismatch(path, "array accessed by key");
            if (t.kind == TypeExpr::Kind::fixed_array && acc.value >= t.length)
                type_mismatch(path, "index out of range for " + minisol::to_string(t));
            Word data = w.address.slot;
            if (t.kind == TypeExpr::Kind::dyn_array) {
                data = hash_slot(data);
                w.derived = true;
            }
            const TypeExpr& elem = t.value_type();
            if (elem.is_value_type()) {
                const unsigned width = elem.elem.width();
                const unsigned per = 32 / width;
                const unsigned pos = static_cast<unsigned>(acc.value % per);
                w.address = SlotAddress{data + acc.value / per, pos * width, width};
            }
            else {
                w.address = SlotAddress{data + acc.value * slot_count(elem), 0, 32};
            }
            break;
        }
        }
        w.type = &t.value_type();
        prefix.accessors.push_back(acc);
        if (registry != nullptr && w.derived && w.type->kind == TypeExpr::Kind::dyn_array) {
            auto len_path = prefix;
            len_path.accessors.push_back(Accessor::length());
            registry->record(w.address.slot, {std::move(len_path), 0, 32});
        }
    }
    if (!w.type->is_value_type())
        depth_mismatch(path);
    if (path.accessors.empty())
        return w;
    if (path.accessors.back().kind == Accessor::Kind::key)
        w.address.width = w.type->elem.width();
    return w;
}

void static_occupants(const TypeExpr& type, const Word& base, const Word& slot, const VariablePath& path,
                      std::vector<SlotOccupant>& out)
{
    switch (type.kind) {
    case TypeExpr::Kind::elementary:
    case TypeExpr::Kind::mapping:
        return;
    case TypeExpr::Kind::dyn_array:
        if (slot == base) {
            auto p = path;
            p.accessors.push_back(Accessor::length());
            out.push_back({std::move(p), 0, 32});
        }
        return;
    case TypeExpr::Kind::fixed_array: {
        const TypeExpr& elem = type.value_type();
        if (elem.is_value_type()) {
            const unsigned width = elem.elem.width();
            const unsigned per = 32 / width;
            const Word first = (slot - base) * per;
            for (unsigned j = 0; j < per; ++j) {
                const Word idx = first + j;
                if (idx >= type.length)
                    break;
                auto p = path;
                p.accessors.push_back(Accessor::index(idx));
                out.push_back({std::move(p), j * width, width});
            }
            return;
        }
        const Word k = slot_count(elem);
        const Word i = (slot - base) / k;
        auto p = path;
        p.accessors.push_back(Accessor::index(i));
        static_occupants(elem, base + i * k, slot, p, out);
        return;
    }
    }
}

std::vector<SlotOccupant> static_slot(const StorageLayout& layout, const Word& slot)
{
    std::vector<SlotOccupant> out;
    for (const auto& v : layout.vars) {
        VariablePath root{layout.contract, v.name, {}};
        if (v.type.is_value_type()) {
            if (v.base.slot == slot)
                out.push_back({std::move(root), v.base.offset, v.base.width});
            continue;
        }
        if (slot >= v.base.slot && slot < v.base.slot + slot_count(v.type))
            static_occupants(v.type, v.base.slot, slot, root, out);
    }
    return out;
}

std::string render_key(const ElementaryType& key, const Word& value, const AliasNames* aliases)
{
    switch (key.kind) {
    case ElementaryKind::address:
        if (aliases != nullptr) {
            if (auto it = aliases->find(value); it != aliases->end())
                return it->second;
        }
        return to_hex_padded(value, 20);
    case ElementaryKind::boolean:
        return value == 0 ? "false" : "true";
    case ElementaryKind::int256:
        return to_decimal(to_signed(value));
    case ElementaryKind::uint_:
        return to_decimal(value);
    }
    return to_hex(value);
}

}  // namespace

const VariableLayout* StorageLayout::find(std::string_view name) const noexcept
{
    auto it = std::find_if(vars.begin(), vars.end(), [&](const auto& v) { return v.name == name; });
    return it == vars.end() ? nullptr : &*it;
}

unsigned elements_per_slot(const TypeExpr& elem) noexcept
{
    return elem.is_value_type() ? 32 / elem.elem.width() : 1;
}

Word slot_count(const TypeExpr& type)
{
    switch (type.kind) {
    case TypeExpr::Kind::elementary:
    case TypeExpr::Kind::mapping:
    case TypeExpr::Kind::dyn_array:
        return 1;
    case TypeExpr::Kind::fixed_array: {
        const TypeExpr& elem = type.value_type();
        Word n;
        if (elem.is_value_type()) {
            const unsigned per = elements_per_slot(elem);
            n = (Word{type.length} + per - 1) / per;
        }
        else {
            n = Word{type.length} * slot_count(elem);
        }
        if (n > max_slots)
            throw Error{ErrorCode::unsupported_type, minisol::to_string(type) + " occupies more than 2^64 slots"};
        return n;
    }
    }
    return 1;
}

StorageLayout compute_layout(const minisol::ContractDecl& contract)
{
    StorageLayout out;
    out.contract = contract.name;
    Word slot = 0;
    unsigned used = 0;
    for (const auto& v : contract.state_vars) {
        VariableLayout vl{v.name, v.type, {}};
        if (v.type.is_value_type()) {
            const unsigned width = v.type.elem.width();
            if (used + width > 32) {
                ++slot;
                used = 0;
            }
            vl.base = SlotAddress{slot, used, width};
            used += width;
        }
        else {
            if (used != 0) {
                ++slot;
                used = 0;
            }
            vl.base = SlotAddress{slot, 0, 32};
            slot += slot_count(v.type);
            if (slot > max_slots)
                throw Error{ErrorCode::unsupported_type, "contract storage exceeds 2^64 slots"};
        }
        out.vars.push_back(std::move(vl));
    }
    out.next_free_slot = used != 0 ? slot + 1 : slot;
    return out;
}

void AddressRegistry::record(const Word& slot, Entry entry)
{
    auto& bucket = entries_[slot];
    if (std::find(bucket.begin(), bucket.end(), entry) != bucket.end())
        return;
    bucket.push_back(std::move(entry));
    ++count_;
}

std::span<const AddressRegistry::Entry> AddressRegistry::lookup(const Word& slot) const noexcept
{
    auto it = entries_.find(slot);
    if (it == entries_.end())
        return {};
    return it->second;
}

SlotAddress resolve_address(const StorageLayout& layout, const VariablePath& path, AddressRegistry& registry)
{
    const auto w = walk(layout, path, &registry);
    if (w.derived)
        registry.record(w.address.slot, {path, w.address.offset, w.address.width});
    return w.address;
}

ElementaryType location_type(const StorageLayout& layout, const VariablePath& path)
{
    const auto w = walk(layout, path, nullptr);
    if (w.type == nullptr)
        return ElementaryType::uint(256);
    return w.type->elem;
}

std::vector<SlotOccupant> variables_in_slot(const StorageLayout& layout, const AddressRegistry& registry,
                                            const Word& slot)
{
    std::vector<SlotOccupant> out;
    if (slot < layout.next_free_slot) {
        out = static_slot(layout, slot);
    }
    else {
        for (const auto& e : registry.lookup(slot))
            out.push_back({e.path, e.offset, e.width});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.offset < b.offset; });
    return out;
}

VariablePath decode_address(const StorageLayout& layout, const AddressRegistry& registry, const Word& slot,
                            unsigned offset, unsigned width)
{
    for (auto& occ : variables_in_slot(layout, registry, slot)) {
        if (occ.offset <= offset && offset + width <= occ.offset + occ.width)
            return std::move(occ.path);
    }
    throw Error{ErrorCode::unknown_address, "UnknownAddress(" + to_hex(slot) + ")"};
}

StorageWrite encode_assignment(const StorageLayout& layout, const VariablePath& path, const Word& value,
                               AddressRegistry& registry)
{
    const auto type = location_type(layout, path);
    const auto address = resolve_address(layout, path, registry);
    if (!fits(type, value))
        throw Error{ErrorCode::value_overflow,
                    "ValueOverflow(" + describe(path) + "): " + to_decimal(value) + " does not fit " +
                        minisol::to_string(type)};
    return StorageWrite{address, value};
}

std::string format_path(const StorageLayout& layout, const VariablePath& path, const AliasNames* aliases)
{
    std::string out = path.contract + "." + path.root;
    const auto* var = layout.find(path.root);
    const TypeExpr* t = var != nullptr ? &var->type : nullptr;
    for (const auto& a : path.accessors) {
        switch (a.kind) {
        case Accessor::Kind::length:
            out += ".length";
            continue;
        case Accessor::Kind::key:
            if (t != nullptr && t->kind == TypeExpr::Kind::mapping)
                out += "[" + render_key(t->elem, a.value, aliases) + "]";
            else
                out += "[" + to_hex(a.value) + "]";
            break;
        case Accessor::Kind::index:
            out += "[" + to_decimal(a.value) + "]";
            break;
        }
        t = (t != nullptr && !t->is_value_type()) ? &t->value_type() : nullptr;
    }
    return out;
}

nlohmann::ordered_json layout_to_json(const StorageLayout& layout)
{
    auto vars = nlohmann::ordered_json::array();
    for (const auto& v : layout.vars) {
        vars.push_back({
            {"name", v.name},
            {"type", minisol::to_string(v.type)},
            {"slot", to_hex(v.base.slot)},
            {"offset", v.base.offset},
            {"width", v.base.width},
        });
    }
    return {{"vars", std::move(vars)}};
}

}  // namespace kaya::layout
