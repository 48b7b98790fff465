// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/error.hpp>
#include <kaya/vm/scvm.hpp>

namespace kaya::vm {

std::string_view to_string(Status status) noexcept
{
    switch (status) {
    case Status::success: return "Success";
    case Status::revert: return "Revert";
    case Status::step_limit_exceeded: return "StepLimitExceeded";
    }
    return "?";
}

WorldState deploy_prestate(std::span<const DeployedContract> contracts, std::span<const Balance> balances,
                           std::span<const PreStateWrite> params)
{
    WorldState state;
    for (const auto& c : contracts)
        state.set_balance(c.address, 0);
    for (const auto& [address, wei] : balances)
        state.set_balance(address, wei);

    for (const auto& p : params) {
        const DeployedContract* target = nullptr;
        for (const auto& c : contracts)
            if (c.alias == p.path.contract)
                target = &c;
        if (!target)
            throw Error{ErrorCode::unknown_contract, "no deployed contract '" + p.path.contract + "'"};
        const auto write = layout::encode_assignment(*target->layout, p.path, p.value, *target->registry);
        const auto& a = write.address;
        state.store(target->alias, a.slot,
                    insert_bytes(state.load(target->alias, a.slot), a.offset, a.width, write.value));
    }
    return state;
}

nlohmann::ordered_json trace_to_json(const TraceRecord& t)
{
    return {
        {"event", t.event_index},
        {"step", t.step_index},
        {"contract", t.contract},
        {"slot", to_hex(t.slot)},
        {"offset", t.offset},
        {"width", t.width},
        {"old", to_hex(t.old_word)},
        {"new", to_hex(t.new_word)},
    };
}

}  // namespace kaya::vm
