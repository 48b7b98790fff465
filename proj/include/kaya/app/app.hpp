// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The one code path behind both kaya_cmd and the HTTP API.

#include <kaya/analyzer/analyzer.hpp>
#include <kaya/dbdl/validate.hpp>

#include <json.hpp>

#include <cstdint>
#include <exception>
#include <string>
#include <string_view>

namespace kaya::app {

/// `{"variables":[{"contract","name","type","slot","offset","width"}]}`.
nlohmann::ordered_json variables_json(const minisol::SourceUnit& unit);
std::string render_variables(const minisol::SourceUnit& unit, analyzer::Format format);

struct RunConfig {
    double threshold = 0.8;
    std::uint64_t step_limit = vm::default_step_limit;
    unsigned jobs = 1;
    bool timestamps = false;
};

/// Validates, runs and analyzes a suite. Throws DiagnosticError.
analyzer::AnalysisReport run_report(const dbdl::TestSuite& suite, const dbdl::SourceSet& sources,
                                    const RunConfig& config);

/// Reads threshold / step_limit / jobs from a JSON object, keeping defaults
/// for absent keys. Throws Error(InvalidWord) on ill-typed values.
RunConfig config_from_json(const nlohmann::json& options);

/// A case in JSON form:
/// `{"name", "contracts":[{"alias","source"}], "accounts":[{"alias","balance"}],
///   "prestate":[{"path","value"}], "events":[{"contract","function","args","from","value"}],
///   "expectations":[{"path","op","value"}]}`.
/// Without "contracts", every contract in `sources` is bound under its own name.
/// Throws DiagnosticError.
dbdl::TestCase case_from_json(const nlohmann::json& body, const dbdl::SourceSet& sources);

/// Accepts `{"dbdl": text}`, `{"cases": [case...]}` or a single case object.
dbdl::TestSuite suite_from_json(const nlohmann::json& body, const dbdl::SourceSet& sources);

/// `{"error": code, "message", "diagnostics":[{"code","message","line","column"}]}`.
nlohmann::ordered_json error_json(const std::exception& error);

/// Current UTC time as 2026-01-02T03:04:05Z.
std::string utc_timestamp();

}  // namespace kaya::app
