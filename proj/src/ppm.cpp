#include "ncdlab/ppm.hpp"

#include <cmath>

#include "ncdlab/error.hpp"

namespace ncdlab {

PpmModel::PpmModel(int order) : order_(order) {
    if (order < kMinPpmOrder || order > kMaxPpmOrder)
        throw Error(ErrorKind::InvalidSpec, "PPM order must be in 1..16, got " + std::to_string(order));
    nodes_.emplace_back();  // order-0 context
    context_.fill(-1);
    context_[0] = 0;
}

void PpmModel::feed(Bytes data) {
    for (const std::uint8_t b : data) feed(b);
}

void PpmModel::feed(std::uint8_t symbol) {
    if (++stamp_ == 0) {
        excluded_.fill(0);
        stamp_ = 1;
    }

    // Code: walk from the longest available context down to order 0.
    int excluded_count = 0;
    bool coded = false;
    for (int o = depth_; o >= 0 && !coded; --o) {
        std::uint64_t n = 0;
        std::uint32_t d = 0;
        std::uint32_t hit = 0;
        for (std::int32_t e = nodes_[context_[o]].head; e >= 0; e = entries_[e].next) {
            const Entry& en = entries_[e];
            if (excluded_[en.symbol] == stamp_) continue;
            n += en.count;
            ++d;
            if (en.symbol == symbol) hit = en.count;
        }
        if (d == 0) continue;
        if (hit != 0) {
            bits_ -= std::log2((static_cast<double>(hit) - 0.5) / static_cast<double>(n));
            coded = true;
        } else {
            bits_ -= std::log2(static_cast<double>(d) / (2.0 * static_cast<double>(n)));
            for (std::int32_t e = nodes_[context_[o]].head; e >= 0; e = entries_[e].next)
                excluded_[entries_[e].symbol] = stamp_;
            excluded_count += static_cast<int>(d);
        }
    }
    if (!coded) bits_ += std::log2(static_cast<double>(256 - excluded_count));

    // Update every available context and advance the context chain.
    std::array<std::int32_t, kMaxPpmOrder + 1> next{};
    next.fill(-1);
    next[0] = 0;
    for (int o = 0; o <= depth_; ++o) {
        const std::int32_t node = context_[o];
        std::int32_t e = find_entry(node, symbol);
        if (e < 0) {
            e = static_cast<std::int32_t>(entries_.size());
            entries_.push_back(Entry{0, -1, nodes_[node].head, symbol});
            nodes_[node].head = e;
        }
        ++entries_[e].count;
        if (o < order_) {
            if (entries_[e].child < 0) {
                const auto child = static_cast<std::int32_t>(nodes_.size());
                nodes_.emplace_back();
                entries_[e].child = child;
            }
            next[o + 1] = entries_[e].child;
        }
    }
    depth_ = depth_ < order_ ? depth_ + 1 : order_;
    context_ = next;
    ++seen_;
}

std::int32_t PpmModel::find_entry(std::int32_t node, std::uint8_t symbol) const {
    for (std::int32_t e = nodes_[node].head; e >= 0; e = entries_[e].next)
        if (entries_[e].symbol == symbol) return e;
    return -1;
}

std::int32_t PpmModel::find_node(std::string_view context) const {
    if (static_cast<int>(context.size()) > order_) return -1;
    std::int32_t node = 0;
    for (const char c : context) {
        const auto e = find_entry(node, static_cast<std::uint8_t>(c));
        if (e < 0 || entries_[e].child < 0) return -1;
        node = entries_[e].child;
    }
    return node;
}

std::uint64_t PpmModel::count(std::string_view context, std::uint8_t symbol) const {
    const auto node = find_node(context);
    if (node < 0) return 0;
    const auto e = find_entry(node, symbol);
    return e < 0 ? 0 : entries_[e].count;
}

std::uint64_t PpmModel::total(std::string_view context) const {
    const auto node = find_node(context);
    if (node < 0) return 0;
    std::uint64_t n = 0;
    for (std::int32_t e = nodes_[node].head; e >= 0; e = entries_[e].next) n += entries_[e].count;
    return n;
}

CodeLength ppm_code_length(Bytes data, int order) {
    PpmModel model(order);
    model.feed(data);
    return model.code_length();
}

}  // namespace ncdlab
