#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace ncdlab {

using Bytes = std::span<const std::uint8_t>;

inline Bytes as_bytes(std::string_view s) noexcept {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

enum class CodecFamily { Ppm, Lz, Bwt, External };

inline constexpr int kMinPpmOrder = 1;
inline constexpr int kMaxPpmOrder = 16;
inline constexpr int kDefaultPpmOrder = 6;

struct CodecSpec {
    CodecFamily family = CodecFamily::Ppm;
    int order = kDefaultPpmOrder;  // PPM only
    std::string command;           // External only

    static CodecSpec ppm(int order) { return {CodecFamily::Ppm, order, {}}; }
    static CodecSpec lz() { return {CodecFamily::Lz, 0, {}}; }
    static CodecSpec bwt() { return {CodecFamily::Bwt, 0, {}}; }
    static CodecSpec external(std::string cmd) { return {CodecFamily::External, 0, std::move(cmd)}; }

    // Textual forms: "ppm:N", "lz", "bwt", "ext:<command line>".
    static CodecSpec parse(std::string_view text);
    std::string str() const;

    // Throws ErrorKind::InvalidSpec when the order is out of range or the
    // external command is empty.
    void validate() const;

    friend bool operator==(const CodecSpec&, const CodecSpec&) = default;
};

// Size of a coded sequence. `bits` may be fractional for the ideal-length
// coders; bytes = ceil(bits / 8). Empty input always measures 0.
struct CodeLength {
    double bits = 0.0;
    std::uint64_t bytes = 0;

    static CodeLength from_bits(double bits);
    static CodeLength from_bytes(std::uint64_t bytes) { return {8.0 * static_cast<double>(bytes), bytes}; }
};

// C(x): compressed size of `data` under `codec`. Pure and deterministic for the
// native families; the external family runs the configured program.
CodeLength compressed_size(Bytes data, const CodecSpec& codec);

}  // namespace ncdlab
