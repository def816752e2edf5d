#include "ncdlab/lz.hpp"

namespace ncdlab {
namespace {

class BitWriter {
public:
    explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

    void put(std::uint32_t value, int width) {
        for (int i = width - 1; i >= 0; --i) {
            acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((value >> i) & 1u));
            if (++fill_ == 8) {
                out_.push_back(acc_);
                acc_ = 0;
                fill_ = 0;
            }
        }
        bits_ += static_cast<std::uint64_t>(width);
    }

    void flush() {
        if (fill_ > 0) out_.push_back(static_cast<std::uint8_t>(acc_ << (8 - fill_)));
        acc_ = 0;
        fill_ = 0;
    }

    std::uint64_t bits() const noexcept { return bits_; }

private:
    std::vector<std::uint8_t>& out_;
    std::uint8_t acc_ = 0;
    int fill_ = 0;
    std::uint64_t bits_ = 0;
};

constexpr std::size_t kHashBits = 16;

inline std::uint32_t hash3(const std::uint8_t* p) {
    const std::uint32_t v = (std::uint32_t(p[0]) << 16) | (std::uint32_t(p[1]) << 8) | p[2];
    return (v * 2654435761u) >> (32 - kHashBits);
}

}  // namespace

LzStream lz_encode(Bytes data) {
    LzStream stream;
    const std::size_t n = data.size();
    for (int i = 0; i < 4; ++i) stream.bytes.push_back(static_cast<std::uint8_t>((n >> (8 * i)) & 0xFF));

    BitWriter writer(stream.bytes);
    std::vector<std::int64_t> head(std::size_t{1} << kHashBits, -1);
    std::vector<std::int64_t> prev(n, -1);
    const std::uint8_t* p = data.data();

    auto insert = [&](std::size_t pos) {
        if (pos + kLzMinMatch > n) return;
        const auto h = hash3(p + pos);
        prev[pos] = head[h];
        head[h] = static_cast<std::int64_t>(pos);
    };

    std::size_t pos = 0;
    while (pos < n) {
        std::size_t best_len = 0;
        std::size_t best_off = 0;
        if (pos + kLzMinMatch <= n) {
            const std::size_t limit = std::min(kLzMaxMatch, n - pos);
            for (std::int64_t cand = head[hash3(p + pos)]; cand >= 0; cand = prev[cand]) {
                const std::size_t off = pos - static_cast<std::size_t>(cand);
                if (off > kLzWindow) break;
                std::size_t len = 0;
                while (len < limit && p[cand + len] == p[pos + len]) ++len;
                if (len > best_len) {
                    best_len = len;
                    best_off = off;
                    if (len == limit) break;
                }
            }
        }
        if (best_len >= kLzMinMatch) {
            writer.put(1, 1);
            writer.put(static_cast<std::uint32_t>(best_off), 16);
            writer.put(static_cast<std::uint32_t>(best_len), 8);
            for (std::size_t k = 0; k < best_len; ++k) insert(pos + k);
            pos += best_len;
        } else {
            writer.put(0, 1);
            writer.put(p[pos], 8);
            insert(pos);
            ++pos;
        }
    }
    writer.flush();
    stream.payload_bits = writer.bits();
    return stream;
}

CodeLength lz_compress(Bytes data) {
    if (data.empty()) return {};
    return CodeLength::from_bits(static_cast<double>(lz_encode(data).payload_bits));
}

}  // namespace ncdlab
