#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ncdlab/ncd.hpp"

namespace ncdlab {

struct FrequencyEntry {
    std::string word;  // lowercase
    double frequency;  // relative, entries sum to 1
};

// Sorted by descending frequency, ties by ascending word.
struct FrequencyList {
    std::vector<FrequencyEntry> entries;
};

// Lines "word<TAB>number"; '#' comment lines and blank lines are skipped.
// Words are lowercased and duplicates summed before normalizing.
FrequencyList load_frequency_list(std::istream& in);

struct WordSet {
    double degree = 0.0;
    std::set<std::string> words;

    bool contains(std::string_view lowercase_word) const;
};

// WordSet(d) is the shortest prefix of the list whose cumulative frequency
// reaches d. Degrees must be ascending within (0, 1].
std::vector<WordSet> build_word_sets(const FrequencyList& freq, const std::vector<double>& degrees);

// The ten degrees 0.1, 0.2, ..., 1.0.
std::vector<double> standard_degrees();

enum class TokenKind { Word, AsteriskRun, Separator };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t original_index;
};

struct TokenSequence {
    std::vector<Token> tokens;
    std::string text() const;
};

// Words are maximal runs of ASCII letters with internal apostrophes
// ("don't"); everything else, including '*', forms separator runs.
TokenSequence tokenize(std::string_view text);

// Like tokenize, but each maximal run of '*' becomes one AsteriskRun token.
// Used on masked text.
TokenSequence tokenize_masked(std::string_view text);

std::string to_lower_ascii(std::string_view s);

// Replaces every character of each word found in `words` (case-insensitive)
// with '*'. Output length equals input length.
std::string apply_oo(std::string_view text, const WordSet& words);

enum class Technique { OO, RPA, RPRW, RPE };

std::string to_string(Technique t);
Technique parse_technique(std::string_view s);

// Where RPA may put asterisk runs: back into the slots that held runs
// (default), or anywhere among run and word slots while the words keep
// their relative order.
enum class RpaMode { AsteriskSlots, Interleave };

struct DistortionPlan {
    Technique technique = Technique::OO;
    double degree = 0.0;
    std::uint64_t seed = 0;
    std::uint32_t repetition_index = 0;
    RpaMode rpa_mode = RpaMode::AsteriskSlots;
};

// Permutes tokens of masked text per plan.technique using a Fisher-Yates
// shuffle driven by Rng(derive_seed(seed, repetition_index)). Separators never
// move. Throws ErrorKind::Contract for OO.
std::string permute(std::string_view masked, const DistortionPlan& plan);

Document distort_document(const Document& doc, const WordSet& words, const DistortionPlan& plan);

}  // namespace ncdlab
