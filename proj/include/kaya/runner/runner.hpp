// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/dbdl/validate.hpp>
#include <kaya/layout/storage_layout.hpp>
#include <kaya/vm/scvm.hpp>

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kaya::runner {

struct Options {
    std::uint64_t step_limit = vm::default_step_limit;
    /// Cases run on up to this many threads; results keep suite order.
    unsigned jobs = 1;
    /// MiniVm when empty.
    std::shared_ptr<const vm::ScvmBackend> backend;
};

struct EventResult {
    /// Canonical DBDL text of the call.
    std::string call;
    vm::Status status = vm::Status::success;
    std::string reason;
    std::optional<Word> return_value;
};

struct DecodedTrace {
    layout::VariablePath path;
    Word old_value = 0;
    Word new_value = 0;
    std::size_t event_index = 0;
    std::size_t step_index = 0;

    friend bool operator==(const DecodedTrace&, const DecodedTrace&) = default;
};

struct ExpectationResult {
    std::string expr;
    bool pass = false;
    Word actual = 0;
};

struct VariableInfo {
    /// Canonical text with alias names for known addresses.
    std::string text;
    minisol::ElementaryType type;
};

/// Everything one test case produced.
struct RunResult {
    std::string name;
    std::vector<EventResult> events;
    std::vector<DecodedTrace> traces;
    std::map<layout::VariablePath, Word> initial_values;
    std::map<layout::VariablePath, Word> final_values;
    std::map<layout::VariablePath, VariableInfo> variables;
    std::vector<ExpectationResult> expectations;
    std::vector<vm::TraceRecord> unknown_writes;

    bool all_expectations_pass() const noexcept;
};

/// One (slot, byte range, word) per parameter. Journals derived slots.
/// Throws ValueOverflow.
std::vector<layout::StorageWrite> transform_variables(const layout::StorageLayout& layout,
                                                      std::span<const vm::PreStateWrite> params,
                                                      layout::AddressRegistry& registry);

struct DecodeResult {
    std::vector<DecodedTrace> rows;
    std::vector<vm::TraceRecord> unknown_writes;
};

/// Names every write. A write spanning several variables (as a whole-slot
/// EVM store does) yields one row per variable whose bytes changed. Writes
/// no variable covers land in unknown_writes.
DecodeResult decode_traces(const layout::StorageLayout& layout, const layout::AddressRegistry& registry,
                           std::span<const vm::TraceRecord> traces);

RunResult run_case(const dbdl::BoundCase& testcase, const Options& options = {});

/// Validates the whole suite first and throws DiagnosticError if anything
/// is wrong. Event failures never abort a case.
std::vector<RunResult> run_suite(const dbdl::TestSuite& suite, const dbdl::SourceSet& sources,
                                 const Options& options = {});

nlohmann::ordered_json to_json(const RunResult& result);

}  // namespace kaya::runner
