// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace kaya {

/// 256-bit storage word. Arithmetic wraps modulo 2^256; checked operations
/// live in the interpreter.
using Word = boost::multiprecision::uint256_t;

/// Arbitrary precision signed integer, used for deltas and exact conversions.
using BigInt = boost::multiprecision::cpp_int;

using Bytes32 = std::array<std::uint8_t, 32>;

struct Address {
    std::array<std::uint8_t, 20> bytes{};

    friend auto operator<=>(const Address&, const Address&) = default;
};

/// Big-endian 32-byte encoding (pad32).
Bytes32 to_bytes32(const Word& value) noexcept;
Word from_bytes(std::span<const std::uint8_t> big_endian) noexcept;

Word to_word(const Address& address) noexcept;
/// Low 20 bytes of the word.
Address to_address(const Word& value) noexcept;

/// Minimal 0x-prefixed lowercase hex ("0x0", "0x2a").
std::string to_hex(const Word& value);
/// 0x-prefixed hex of exactly 2*width digits.
std::string to_hex_padded(const Word& value, std::size_t width_bytes);
std::string to_hex(const Address& address);
std::string to_decimal(const Word& value);
std::string to_decimal(const BigInt& value);

/// Parses decimal or 0x-prefixed hex; throws kaya::Error on malformed input
/// or values that do not fit in 256 bits.
Word parse_word(std::string_view text);

const Word& max_word() noexcept;
/// 2^(8*width) - 1 for width in 1..32.
Word width_mask(unsigned width_bytes) noexcept;

/// Two's-complement interpretation.
BigInt to_signed(const Word& value);
BigInt to_unsigned(const Word& value);

/// Extracts `width` bytes starting `offset` bytes above the least significant byte.
Word extract_bytes(const Word& slot_word, unsigned offset, unsigned width) noexcept;
/// Returns slot_word with the byte range replaced by the low bytes of value.
Word insert_bytes(const Word& slot_word, unsigned offset, unsigned width, const Word& value) noexcept;

}  // namespace kaya
