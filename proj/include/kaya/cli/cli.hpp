// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kaya::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_expectation_failed = 1;
inline constexpr int exit_input_error = 2;

inline constexpr int default_port = 7878;

/// kaya_cmd with argv[0] omitted. `serve` blocks until SIGINT or SIGTERM.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kaya::cli
