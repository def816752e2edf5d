#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ncdlab/codec.hpp"

namespace ncdlab {

// Adaptive order-N context model measuring ideal code length.
//
// Prediction uses escape method D: in a context holding d distinct symbols
// with total count n, a seen symbol with count c gets (c - 1/2) / n and the
// escape gets d / (2n). Symbols already offered by a longer context are
// excluded from the shorter ones, and a context whose symbols are all
// excluded (or that is still empty) is skipped at no cost. Below order 0 the
// model is uniform over the bytes not yet excluded. After each symbol every
// context of length 0..N that precedes it has that symbol's count
// incremented. Counts are never rescaled.
//
// The model is a value type: copying it snapshots the full adaptive state,
// which lets C(xy) be computed by resuming from the state after x.
class PpmModel {
public:
    explicit PpmModel(int order);

    void feed(Bytes data);
    void feed(std::uint8_t symbol);

    int order() const noexcept { return order_; }
    double bits() const noexcept { return bits_; }
    std::uint64_t symbols_seen() const noexcept { return seen_; }
    CodeLength code_length() const { return CodeLength::from_bits(bits_); }

    // Count of `symbol` following the context `context` (0 if never seen);
    // contexts longer than the order are not stored.
    std::uint64_t count(std::string_view context, std::uint8_t symbol) const;
    // Sum of all symbol counts in `context`.
    std::uint64_t total(std::string_view context) const;
    std::size_t node_count() const noexcept { return nodes_.size(); }

private:
    struct Entry {
        std::uint32_t count;
        std::int32_t child;  // node for context + symbol, -1 if not created
        std::int32_t next;   // next entry in the owning node's list
        std::uint8_t symbol;
    };
    struct Node {
        std::int32_t head = -1;
    };

    std::int32_t find_node(std::string_view context) const;
    std::int32_t find_entry(std::int32_t node, std::uint8_t symbol) const;

    int order_;
    std::vector<Node> nodes_;
    std::vector<Entry> entries_;
    std::array<std::int32_t, kMaxPpmOrder + 1> context_{};
    int depth_ = 0;  // longest context currently available
    double bits_ = 0.0;
    std::uint64_t seen_ = 0;
    std::array<std::uint32_t, 256> excluded_{};
    std::uint32_t stamp_ = 0;
};

// Ideal code length of `data` under a fresh PpmModel. 1 <= order <= 16.
CodeLength ppm_code_length(Bytes data, int order);

}  // namespace ncdlab
