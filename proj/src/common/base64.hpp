#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace occbench {

std::string base64_encode(std::span<const uint8_t> bytes);
/// Throws FormatError on characters outside the standard alphabet.
std::vector<uint8_t> base64_decode(std::string_view text);

/// LSB-first bit packing: bit i lives in byte i/8 at position i%8.
std::vector<uint8_t> pack_bits(const std::vector<bool>& bits);
std::vector<bool> unpack_bits(std::span<const uint8_t> bytes, size_t count);

}  // namespace occbench
