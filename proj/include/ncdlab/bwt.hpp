#pragma once

#include <cstdint>
#include <vector>

#include "ncdlab/codec.hpp"

namespace ncdlab {

inline constexpr std::size_t kBwtBlockSize = 128 * 1024;

struct BwtBlock {
    std::vector<std::uint8_t> last;  // last column of the sorted rotation matrix
    std::uint32_t primary = 0;       // row holding the original block
};

// Burrows-Wheeler transform over the cyclic rotations of `block`. Equal
// rotations (periodic blocks) keep their original relative order.
BwtBlock bwt_forward(Bytes block);
std::vector<std::uint8_t> bwt_inverse(const BwtBlock& block);

std::vector<std::uint8_t> mtf_encode(Bytes data);
std::vector<std::uint8_t> mtf_decode(Bytes ranks);

// Zero-run coding of MTF ranks into a 257-symbol alphabet: runs of zeros are
// written as bijective base-2 digits (RUNA = 0, RUNB = 1) and a nonzero rank r
// becomes r + 1.
inline constexpr int kRle0Alphabet = 257;
std::vector<std::uint16_t> rle0_encode(Bytes ranks);
std::vector<std::uint8_t> rle0_decode(const std::vector<std::uint16_t>& symbols);

// Block pipeline BWT -> MTF -> RLE0 -> adaptive order-0 ideal coder (Laplace
// counts over the 257 symbols). Each block adds 32 bits for its primary index.
CodeLength bwt_compress(Bytes data);

}  // namespace ncdlab
