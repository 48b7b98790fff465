// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kaya::test {

/// Absolute path of a file inside the source tree.
std::string source_path(std::string_view relative);
std::string read_text(std::string_view relative);
std::string read_file(const std::string& path);
nlohmann::json load_json(std::string_view relative);
std::vector<std::uint8_t> from_hex_string(std::string_view hex);

}  // namespace kaya::test
