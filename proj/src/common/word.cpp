// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/error.hpp>
#include <kaya/common/word.hpp>

#include <algorithm>

namespace kaya {

namespace {

constexpr char hex_digits[] = "0123456789abcdef";

int hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

}  // namespace

Bytes32 to_bytes32(const Word& value) noexcept
{
    Bytes32 out{};
    Word v = value;
    for (std::size_t i = 0; i < 32; ++i) {
        out[31 - i] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

Word from_bytes(std::span<const std::uint8_t> big_endian) noexcept
{
    Word out = 0;
    for (auto b : big_endian) {
        out <<= 8;
        out |= b;
    }
    return out;
}

Word to_word(const Address& address) noexcept
{
    return from_bytes(address.bytes);
}

Address to_address(const Word& value) noexcept
{
    Address out;
    const auto bytes = to_bytes32(value);
    std::copy(bytes.begin() + 12, bytes.end(), out.bytes.begin());
    return out;
}

std::string to_hex(const Word& value)
{
    if (value == 0)
        return "0x0";
    std::string digits;
    Word v = value;
    while (v != 0) {
        digits.push_back(hex_digits[static_cast<unsigned>(v & 0xf)]);
        v >>= 4;
    }
    std::reverse(digits.begin(), digits.end());
    return "0x" + digits;
}

std::string to_hex_padded(const Word& value, std::size_t width_bytes)
{
    const auto bytes = to_bytes32(value);
    std::string out = "0x";
    for (std::size_t i = 32 - width_bytes; i < 32; ++i) {
        out.push_back(hex_digits[bytes[i] >> 4]);
        out.push_back(hex_digits[bytes[i] & 0xf]);
    }
    return out;
}

std::string to_hex(const Address& address)
{
    return to_hex_padded(to_word(address), 20);
}

std::string to_decimal(const Word& value)
{
    return value.str();
}

std::string to_decimal(const BigInt& value)
{
    return value.str();
}

Word parse_word(std::string_view text)
{
    if (text.empty())
        throw Error{ErrorCode::invalid_word, "empty number"};
    BigInt acc = 0;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        for (char c : text.substr(2)) {
            const int v = hex_value(c);
            if (v < 0)
                throw Error{ErrorCode::invalid_word, "malformed hex number '" + std::string{text} + "'"};
            acc = (acc << 4) | v;
            if (acc > to_unsigned(max_word()))
                throw Error{ErrorCode::invalid_word, "number does not fit in 256 bits"};
        }
    }
    else {
        for (char c : text) {
            if (c < '0' || c > '9')
                throw Error{ErrorCode::invalid_word, "malformed number '" + std::string{text} + "'"};
            acc = acc * 10 + (c - '0');
            if (acc > to_unsigned(max_word()))
                throw Error{ErrorCode::invalid_word, "number does not fit in 256 bits"};
        }
    }
    return static_cast<Word>(acc);
}

const Word& max_word() noexcept
{
    static const Word value = ~Word{0};
    return value;
}

Word width_mask(unsigned width_bytes) noexcept
{
    if (width_bytes >= 32)
        return max_word();
    return (Word{1} << (8 * width_bytes)) - 1;
}

BigInt to_signed(const Word& value)
{
    BigInt v{value};
    if (bit_test(value, 255))
        v -= BigInt{1} << 256;
    return v;
}

BigInt to_unsigned(const Word& value)
{
    return BigInt{value};
}

Word extract_bytes(const Word& slot_word, unsigned offset, unsigned width) noexcept
{
    return (slot_word >> (8 * offset)) & width_mask(width);
}

Word insert_bytes(const Word& slot_word, unsigned offset, unsigned width, const Word& value) noexcept
{
    const Word mask = width_mask(width) << (8 * offset);
    return (slot_word & ~mask) | ((value & width_mask(width)) << (8 * offset));
}

}  // namespace kaya
