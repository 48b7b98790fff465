// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/vm/scvm.hpp>

namespace kaya::vm {

/// Reference MiniSol interpreter.
///
/// Arithmetic is exact and checked against the 256-bit range of its result
/// kind: signed when either operand is int256, unsigned otherwise. Narrower
/// locations are checked when a value is stored. Division truncates toward
/// zero and the remainder takes the dividend's sign. Conditions must be
/// booleans, and a bool location holding anything but 0 or 1 reverts with
/// TypeConfusion. Each executed statement and each loop iteration costs one
/// step.
class MiniVm final : public ScvmBackend {
public:
    std::string_view name() const noexcept override { return "minivm"; }

    WorldState deploy_prestate(std::span<const DeployedContract> contracts, std::span<const Balance> balances,
                               std::span<const PreStateWrite> params) const override;

    ExecutionOutcome execute_call(WorldState& state, const DeployedContract& contract, std::string_view function,
                                  const CallContext& ctx, std::uint64_t step_limit,
                                  std::size_t event_index) const override;
};

}  // namespace kaya::vm
