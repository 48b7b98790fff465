// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <kaya/common/word.hpp>

#include <cstdint>
#include <span>
#include <string_view>

namespace kaya::layout {

/// Keccak-256 with the original 0x01 domain padding used by Ethereum
/// (not NIST SHA3-256).
Bytes32 keccak256(std::span<const std::uint8_t> data) noexcept;
Bytes32 keccak256(std::string_view text) noexcept;

inline Word keccak256_word(std::span<const std::uint8_t> data) noexcept
{
    return from_bytes(keccak256(data));
}

inline Word keccak256_word(std::string_view text) noexcept
{
    return from_bytes(keccak256(text));
}

}  // namespace kaya::layout
