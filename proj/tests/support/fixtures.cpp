// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <support/fixtures.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kaya::test {

std::string source_path(std::string_view relative)
{
    return std::string{KAYA_SOURCE_DIR} + "/" + std::string{relative};
}

std::string read_file(const std::string& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw std::runtime_error{"cannot open " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string read_text(std::string_view relative)
{
    return read_file(source_path(relative));
}

nlohmann::json load_json(std::string_view relative)
{
    return nlohmann::json::parse(read_text(relative));
}

std::vector<std::uint8_t> from_hex_string(std::string_view hex)
{
    if (hex.starts_with("0x"))
        hex.remove_prefix(2);
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(std::stoul(std::string{hex.substr(i, 2)}, nullptr, 16)));
    return out;
}

}  // namespace kaya::test
