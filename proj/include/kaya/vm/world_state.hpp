// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/common/word.hpp>

#include <cstdint>
#include <map>
#include <string>

namespace kaya::vm {

/// Slot to word. Zero words are never stored, so equal states compare equal.
using Storage = std::map<Word, Word>;

/// Balances plus per-contract storage. A state belongs to one running test
/// case at a time; it may move between threads but is never shared.
class WorldState {
public:
    using Token = std::uint64_t;

    bool has_account(const Address& address) const noexcept;
    /// Zero for unknown accounts.
    Word balance(const Address& address) const noexcept;
    void set_balance(const Address& address, const Word& wei);
    const std::map<Address, Word>& accounts() const noexcept { return accounts_; }
    /// Sum of all balances; constant across any call.
    BigInt total_balance() const;

    Word load(const std::string& contract, const Word& slot) const noexcept;
    void store(const std::string& contract, const Word& slot, const Word& value);
    const std::map<std::string, Storage>& storage() const noexcept { return storage_; }

    /// Captures balances and storage. Tokens stay valid until discarded, so
    /// rolling back twice to the same token gives the same state.
    Token snapshot();
    /// Throws UnknownToken for tokens never issued or already discarded.
    void rollback(Token token);
    void discard(Token token) noexcept;

    /// Compares balances and storage; outstanding snapshots do not count.
    friend bool operator==(const WorldState& a, const WorldState& b) noexcept
    {
        return a.accounts_ == b.accounts_ && a.storage_ == b.storage_;
    }

private:
    struct Image {
        std::map<Address, Word> accounts;
        std::map<std::string, Storage> storage;
    };

    std::map<Address, Word> accounts_;
    std::map<std::string, Storage> storage_;
    std::map<Token, Image> snapshots_;
    Token next_token_ = 1;
};

}  // namespace kaya::vm
