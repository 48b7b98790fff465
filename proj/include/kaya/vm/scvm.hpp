// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/common/word.hpp>
#include <kaya/layout/storage_layout.hpp>
#include <kaya/minisol/ast.hpp>
#include <kaya/vm/world_state.hpp>

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kaya::vm {

inline constexpr std::uint64_t default_step_limit = 1'000'000;

/// A contract as the VM sees it. The pointed-to declaration, layout and
/// registry belong to the caller and must outlive every call.
struct DeployedContract {
    std::string alias;
    Address address;
    const minisol::ContractDecl* decl = nullptr;
    const layout::StorageLayout* layout = nullptr;
    layout::AddressRegistry* registry = nullptr;
};

struct CallContext {
    Address sender;
    Word value = 0;
    std::vector<Word> args;
};

struct TraceRecord {
    std::size_t event_index = 0;
    /// Write sequence number within the event.
    std::size_t step_index = 0;
    std::string contract;
    Word slot = 0;
    unsigned offset = 0;
    unsigned width = 32;
    /// Whole slot words around the write.
    Word old_word = 0;
    Word new_word = 0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

enum class Status : std::uint8_t { success, revert, step_limit_exceeded };

std::string_view to_string(Status status) noexcept;

struct ExecutionOutcome {
    Status status = Status::success;
    std::optional<Word> return_value;
    std::string reason;
    std::vector<TraceRecord> traces;
    /// Nonzero balance changes only.
    std::map<Address, BigInt> balance_deltas;
    std::uint64_t steps = 0;

    friend bool operator==(const ExecutionOutcome&, const ExecutionOutcome&) = default;
};

using Balance = std::pair<Address, Word>;

/// A pre-state assignment. path.contract names the deployed contract alias.
struct PreStateWrite {
    layout::VariablePath path;
    Word value;
};

/// The pluggable execution backend. Implementations must be safe to call
/// from several threads on distinct states.
class ScvmBackend {
public:
    virtual ~ScvmBackend() = default;

    virtual std::string_view name() const noexcept = 0;

    /// Sets balances (contract accounts start at zero unless listed) and
    /// writes each parameter into its byte range. Throws ValueOverflow.
    virtual WorldState deploy_prestate(std::span<const DeployedContract> contracts,
                                       std::span<const Balance> balances,
                                       std::span<const PreStateWrite> params) const = 0;

    /// Runs one call. Reverts and step-limit aborts leave `state` exactly as
    /// it was on entry and return no traces. Throws UnknownFunction,
    /// ArityMismatch or ArgumentKind before touching the state.
    virtual ExecutionOutcome execute_call(WorldState& state, const DeployedContract& contract,
                                          std::string_view function, const CallContext& ctx,
                                          std::uint64_t step_limit, std::size_t event_index) const = 0;
};

/// The deploy step shared by backends that use the layout codec.
WorldState deploy_prestate(std::span<const DeployedContract> contracts, std::span<const Balance> balances,
                           std::span<const PreStateWrite> params);

nlohmann::ordered_json trace_to_json(const TraceRecord& trace);

}  // namespace kaya::vm
