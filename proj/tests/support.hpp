#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ncdlab/rng.hpp"

namespace testing {

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string fixture(const std::string& name) { return read_text(std::string(NCDLAB_FIXTURES) + "/" + name); }
inline std::string data_path(const std::string& name) { return std::string(NCDLAB_DATA) + "/" + name; }

inline std::string random_bytes(std::size_t n, std::uint64_t seed) {
    ncdlab::Rng rng(seed);
    std::string s(n, '\0');
    for (auto& c : s) c = static_cast<char>(rng.below(256));
    return s;
}

inline std::string random_text(std::size_t n, std::uint64_t seed, const std::string& alphabet) {
    ncdlab::Rng rng(seed);
    std::string s(n, ' ');
    for (auto& c : s) c = alphabet[rng.below(alphabet.size())];
    return s;
}

}  // namespace testing
