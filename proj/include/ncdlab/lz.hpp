#pragma once

#include <cstdint>
#include <vector>

#include "ncdlab/codec.hpp"

namespace ncdlab {

// Greedy LZ77 with fixed-width tokens:
//   literal   = flag bit 0, 8-bit byte                      (9 bits)
//   reference = flag bit 1, 16-bit offset, 8-bit length     (25 bits)
// Offsets are 1..65535 into the preceding window, lengths 3..255. At each
// position the longest match wins; among equally long matches the nearest.
// The stream starts with a fixed 4-byte little-endian input length header.
inline constexpr std::size_t kLzWindow = 65535;
inline constexpr std::size_t kLzMinMatch = 3;
inline constexpr std::size_t kLzMaxMatch = 255;
inline constexpr std::size_t kLzHeaderBytes = 4;

struct LzStream {
    std::vector<std::uint8_t> bytes;  // header + packed tokens, MSB-first
    std::uint64_t payload_bits = 0;   // token bits, excluding header and padding
};

LzStream lz_encode(Bytes data);

// Payload size of the LZ stream (header excluded, so empty input measures 0).
CodeLength lz_compress(Bytes data);

}  // namespace ncdlab
