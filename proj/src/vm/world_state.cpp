// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/error.hpp>
#include <kaya/vm/world_state.hpp>

namespace kaya::vm {

bool WorldState::has_account(const Address& address) const noexcept
{
    return accounts_.contains(address);
}

Word WorldState::balance(const Address& address) const noexcept
{
    const auto it = accounts_.find(address);
    return it == accounts_.end() ? Word{0} : it->second;
}

void WorldState::set_balance(const Address& address, const Word& wei)
{
    accounts_[address] = wei;
}

BigInt WorldState::total_balance() const
{
    BigInt sum = 0;
    for (const auto& [_, wei] : accounts_)
        sum += BigInt{wei};
    return sum;
}

Word WorldState::load(const std::string& contract, const Word& slot) const noexcept
{
    const auto c = storage_.find(contract);
    if (c == storage_.end())
        return 0;
    const auto s = c->second.find(slot);
    return s == c->second.end() ? Word{0} : s->second;
}

void WorldState::store(const std::string& contract, const Word& slot, const Word& value)
{
    if (value == 0) {
        const auto c = storage_.find(contract);
        if (c == storage_.end())
            return;
        c->second.erase(slot);
        if (c->second.empty())
            storage_.erase(c);
        return;
    }
    storage_[contract][slot] = value;
}

WorldState::Token WorldState::snapshot()
{
    const Token t = next_token_++;
    snapshots_.emplace(t, Image{accounts_, storage_});
    return t;
}

void WorldState::rollback(Token token)
{
    const auto it = snapshots_.find(token);
    if (it == snapshots_.end())
        throw Error{ErrorCode::unknown_token, "unknown snapshot token " + std::to_string(token)};
    accounts_ = it->second.accounts;
    storage_ = it->second.storage;
}

void WorldState::discard(Token token) noexcept
{
    snapshots_.erase(token);
}

}  // namespace kaya::vm
