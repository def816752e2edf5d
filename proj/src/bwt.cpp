#include "ncdlab/bwt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "ncdlab/error.hpp"

namespace ncdlab {

BwtBlock bwt_forward(Bytes block) {
    const std::size_t n = block.size();
    BwtBlock out;
    if (n == 0) return out;

    // Prefix doubling over cyclic shifts: rank[i] orders rotations by their
    // first 2^k characters.
    std::vector<std::uint32_t> sa(n), rank(n), tmp(n);
    std::iota(sa.begin(), sa.end(), 0u);
    for (std::size_t i = 0; i < n; ++i) rank[i] = block[i];
    std::stable_sort(sa.begin(), sa.end(), [&](auto a, auto b) { return rank[a] < rank[b]; });

    for (std::size_t k = 1;; k <<= 1) {
        auto key = [&](std::uint32_t i) {
            return std::pair{rank[i], rank[(i + k) % n]};
        };
        std::stable_sort(sa.begin(), sa.end(), [&](auto a, auto b) { return key(a) < key(b); });
        tmp[sa[0]] = 0;
        for (std::size_t i = 1; i < n; ++i)
            tmp[sa[i]] = tmp[sa[i - 1]] + (key(sa[i - 1]) < key(sa[i]) ? 1 : 0);
        rank.swap(tmp);
        if (rank[sa[n - 1]] == n - 1 || k >= n) break;
    }
    // Rotations that are still tied are identical; order them by start index.
    std::stable_sort(sa.begin(), sa.end(), [&](auto a, auto b) {
        return rank[a] != rank[b] ? rank[a] < rank[b] : a < b;
    });

    out.last.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.last[i] = block[(sa[i] + n - 1) % n];
        if (sa[i] == 0) out.primary = static_cast<std::uint32_t>(i);
    }
    return out;
}

std::vector<std::uint8_t> bwt_inverse(const BwtBlock& block) {
    const std::size_t n = block.last.size();
    std::vector<std::uint8_t> out(n);
    if (n == 0) return out;
    if (block.primary >= n) throw Error(ErrorKind::Input, "BWT primary index out of range");

    std::array<std::size_t, 257> start{};
    for (const auto c : block.last) ++start[c + 1];
    for (std::size_t c = 1; c < start.size(); ++c) start[c] += start[c - 1];
    std::vector<std::uint32_t> lf(n);
    std::array<std::size_t, 256> seen{};
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = block.last[i];
        lf[i] = static_cast<std::uint32_t>(start[c] + seen[c]++);
    }
    std::size_t row = block.primary;
    for (std::size_t i = n; i-- > 0;) {
        out[i] = block.last[row];
        row = lf[row];
    }
    return out;
}

std::vector<std::uint8_t> mtf_encode(Bytes data) {
    std::array<std::uint8_t, 256> order;
    std::iota(order.begin(), order.end(), std::uint8_t{0});
    std::vector<std::uint8_t> out;
    out.reserve(data.size());
    for (const auto c : data) {
        const auto it = std::find(order.begin(), order.end(), c);
        const auto r = static_cast<std::uint8_t>(it - order.begin());
        std::rotate(order.begin(), it, it + 1);
        out.push_back(r);
    }
    return out;
}

std::vector<std::uint8_t> mtf_decode(Bytes ranks) {
    std::array<std::uint8_t, 256> order;
    std::iota(order.begin(), order.end(), std::uint8_t{0});
    std::vector<std::uint8_t> out;
    out.reserve(ranks.size());
    for (const auto r : ranks) {
        const auto it = order.begin() + r;
        const auto c = *it;
        std::rotate(order.begin(), it, it + 1);
        out.push_back(c);
    }
    return out;
}

std::vector<std::uint16_t> rle0_encode(Bytes ranks) {
    std::vector<std::uint16_t> out;
    std::size_t run = 0;
    auto flush = [&] {
        // Bijective base 2: digit 1 -> RUNA, digit 2 -> RUNB, least significant first.
        while (run > 0) {
            if (run & 1u) {
                out.push_back(0);
                run = (run - 1) / 2;
            } else {
                out.push_back(1);
                run = (run - 2) / 2;
            }
        }
    };
    for (const auto r : ranks) {
        if (r == 0) {
            ++run;
        } else {
            flush();
            out.push_back(static_cast<std::uint16_t>(r + 1));
        }
    }
    flush();
    return out;
}

std::vector<std::uint8_t> rle0_decode(const std::vector<std::uint16_t>& symbols) {
    std::vector<std::uint8_t> out;
    std::size_t run = 0;
    std::size_t weight = 1;
    for (const auto s : symbols) {
        if (s <= 1) {
            run += weight * (s + 1u);
            weight <<= 1;
            continue;
        }
        out.insert(out.end(), run, 0);
        run = 0;
        weight = 1;
        if (s >= kRle0Alphabet) throw Error(ErrorKind::Input, "RLE0 symbol out of range");
        out.push_back(static_cast<std::uint8_t>(s - 1));
    }
    out.insert(out.end(), run, 0);
    return out;
}

CodeLength bwt_compress(Bytes data) {
    if (data.empty()) return {};
    double bits = 0.0;
    for (std::size_t begin = 0; begin < data.size(); begin += kBwtBlockSize) {
        const auto block = data.subspan(begin, std::min(kBwtBlockSize, data.size() - begin));
        const auto bwt = bwt_forward(block);
        const auto symbols = rle0_encode(mtf_encode(bwt.last));

        std::array<std::uint64_t, kRle0Alphabet> counts;
        counts.fill(1);
        std::uint64_t total = kRle0Alphabet;
        for (const auto s : symbols) {
            bits -= std::log2(static_cast<double>(counts[s]) / static_cast<double>(total));
            ++counts[s];
            ++total;
        }
        bits += 32.0;
    }
    return CodeLength::from_bits(bits);
}

}  // namespace ncdlab
