// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/runner/runner.hpp>

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kaya::analyzer {

struct VariableChange {
    std::string path;
    minisol::ElementaryType type;
    Word initial = 0;
    Word final_value = 0;
    /// final - initial, both read as signed for int256 and unsigned otherwise.
    BigInt delta = 0;
    std::size_t write_count = 0;
};

/// One row per path in initial_values or final_values, sorted by path text.
std::vector<VariableChange> summarize_changes(const runner::RunResult& result);

struct CorrelationOptions {
    double threshold = 0.8;
    std::size_t min_points = 3;
};

struct Correlation {
    std::string a;
    std::string b;
    double r = 0;
    std::size_t n = 0;
};

/// Sample Pearson r between the final values of every pair of paths present
/// in all results. Pairs are keyed by path text, a < b, sorted by (a, b).
/// Zero-variance series are skipped; result order does not matter.
std::vector<Correlation> correlate(std::span<const runner::RunResult> results,
                                   const CorrelationOptions& options = {});

/// Plain Pearson r over paired samples; nullopt when either series is constant.
std::optional<double> pearson(std::span<const double> xs, std::span<const double> ys);

struct CaseReport {
    std::string name;
    std::vector<VariableChange> changes;
    std::vector<runner::EventResult> events;
    std::vector<runner::ExpectationResult> expectations;
    std::vector<vm::TraceRecord> unknown_writes;
};

struct AnalysisReport {
    std::vector<CaseReport> cases;
    std::vector<Correlation> correlations;
    /// Rendered only when set.
    std::optional<std::string> generated_at;

    bool all_expectations_pass() const noexcept;
};

AnalysisReport analyze(std::span<const runner::RunResult> results, const CorrelationOptions& options = {});

enum class Format { text, json };

/// Throws UnsupportedFormat.
Format parse_format(std::string_view name);

nlohmann::ordered_json report_to_json(const AnalysisReport& report);

/// Deterministic bytes: compact JSON, or aligned tables.
std::string render_report(const AnalysisReport& report, Format format);

}  // namespace kaya::analyzer
