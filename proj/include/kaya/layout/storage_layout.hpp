// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/common/word.hpp>
#include <kaya/minisol/ast.hpp>

#include <json.hpp>

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace kaya::layout {

/// A byte range inside one storage slot. Offset 0 is the least significant byte.
struct SlotAddress {
    Word slot = 0;
    unsigned offset = 0;
    unsigned width = 32;

    friend bool operator==(const SlotAddress&, const SlotAddress&) = default;
};

struct Accessor {
    enum class Kind : std::uint8_t { key, index, length };

    Kind kind = Kind::index;
    /// Mapping key as its 32-byte encoding, or array index. Unused for length.
    Word value = 0;

    static Accessor key(Word k) { return {Kind::key, std::move(k)}; }
    static Accessor index(Word i) { return {Kind::index, std::move(i)}; }
    static Accessor length() { return {Kind::length, 0}; }

    friend bool operator==(const Accessor&, const Accessor&) = default;
    friend bool operator<(const Accessor& a, const Accessor& b)
    {
        if (a.kind != b.kind)
            return a.kind < b.kind;
        return a.value < b.value;
    }
};

/// `contract.root[k1][k2]...`; a trailing length accessor names the length
/// word of a dynamic array.
struct VariablePath {
    std::string contract;
    std::string root;
    std::vector<Accessor> accessors;

    friend bool operator==(const VariablePath&, const VariablePath&) = default;
    friend bool operator<(const VariablePath& a, const VariablePath& b)
    {
        if (a.contract != b.contract)
            return a.contract < b.contract;
        if (a.root != b.root)
            return a.root < b.root;
        return a.accessors < b.accessors;
    }
};

struct VariableLayout {
    std::string name;
    minisol::TypeExpr type;
    SlotAddress base;
};

struct StorageLayout {
    std::string contract;
    std::vector<VariableLayout> vars;
    Word next_free_slot = 0;

    const VariableLayout* find(std::string_view name) const noexcept;
};

/// Slots occupied by a value of this type when laid out in place.
Word slot_count(const minisol::TypeExpr& type);

/// Elements per slot for an array of this element type (1 for non-value elements).
unsigned elements_per_slot(const minisol::TypeExpr& elem) noexcept;

/// Solidity storage-layout rules: value types pack left to right (offset
/// counted from the least significant byte), mappings and arrays start a
/// fresh slot, and whatever follows them starts a fresh slot too.
StorageLayout compute_layout(const minisol::ContractDecl& contract);

/// Append-only journal of keccak-derived locations, the inverse map that
/// decoding needs. One registry per contract per run.
class AddressRegistry {
public:
    struct Entry {
        VariablePath path;
        unsigned offset = 0;
        unsigned width = 32;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    void record(const Word& slot, Entry entry);
    std::span<const Entry> lookup(const Word& slot) const noexcept;
    std::size_t size() const noexcept { return count_; }

private:
    std::map<Word, std::vector<Entry>> entries_;
    std::size_t count_ = 0;
};

/// Location of the value named by `path`. Journals derived slots (mapping
/// values, dynamic array elements and lengths below a derived base).
/// Throws TypeMismatch / DepthMismatch.
SlotAddress resolve_address(const StorageLayout& layout, const VariablePath& path,
                            AddressRegistry& registry);

/// The elementary type stored at a path (uint256 for a length accessor).
minisol::ElementaryType location_type(const StorageLayout& layout, const VariablePath& path);

/// Inverse of resolve_address. Throws UnknownAddress when no single
/// variable's byte range covers (offset, width).
VariablePath decode_address(const StorageLayout& layout, const AddressRegistry& registry,
                            const Word& slot, unsigned offset, unsigned width);

struct SlotOccupant {
    VariablePath path;
    unsigned offset = 0;
    unsigned width = 32;
};

/// Every known variable living in a slot, ordered by offset.
std::vector<SlotOccupant> variables_in_slot(const StorageLayout& layout,
                                            const AddressRegistry& registry, const Word& slot);

struct StorageWrite {
    SlotAddress address;
    Word value;

    friend bool operator==(const StorageWrite&, const StorageWrite&) = default;
};

/// Resolves a value-type path and checks that the value fits its location
/// (ValueOverflow otherwise; bools must be 0 or 1).
StorageWrite encode_assignment(const StorageLayout& layout, const VariablePath& path,
                               const Word& value, AddressRegistry& registry);

using AliasNames = std::map<Word, std::string>;

/// Canonical text `contract.root[k]...`. Keys are rendered per key type;
/// address keys use an alias name when one is known.
std::string format_path(const StorageLayout& layout, const VariablePath& path,
                        const AliasNames* aliases = nullptr);

/// `{"vars":[{"name","type","slot","offset","width"}]}`.
nlohmann::ordered_json layout_to_json(const StorageLayout& layout);

}  // namespace kaya::layout
