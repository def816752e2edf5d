#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ncdlab/ncd.hpp"
#include "ncdlab/rational.hpp"
#include "ncdlab/rng.hpp"

namespace ncdlab {

struct Production {
    Rational probability;
    std::string lhs;
    std::vector<std::string> rhs;
};

struct Grammar {
    std::string root;  // LHS of the first production
    std::vector<std::string> nonterminals;  // in order of first appearance
    std::vector<std::string> terminals;     // sorted
    std::vector<Production> productions;
    std::map<std::string, Rational> parameters;  // bindings used at parse time
    std::string delimiter;  // last RHS symbol of the root production, if terminal

    bool is_nonterminal(const std::string& symbol) const;
    std::vector<std::size_t> productions_of(const std::string& lhs) const;
    bool is_recursive() const;
};

// One production per line: "<prob> <LHS> : <RHS symbols...>". The
// probability is a rational literal, a bound parameter `p`, or `1-p`.
// '#' starts a comment line. An optional "%terminals <sym>..." line declares
// the terminal alphabet; when present, any RHS symbol that is neither a
// nonterminal nor declared is rejected.
Grammar parse_grammar(std::istream& in, const std::map<std::string, Rational>& bindings);

struct Sentence {
    std::string text;
    Rational probability;
    double entropy_bits = 0.0;  // -log2(probability)
};

inline constexpr std::size_t kMaxExpansionDepth = 10000;

// Leftmost expansion; each choice draws rng.unit() against the cumulative
// production probabilities of the nonterminal.
Sentence generate_sentence(const Grammar& g, Rng& rng);

using Distribution = std::map<std::string, Rational>;

inline constexpr std::size_t kMaxLanguageSize = 1000000;

// Exact sentence distribution of a non-recursive, unambiguous grammar.
Distribution enumerate_distribution(const Grammar& g);

// Sum over sentences of -p log2 p.
double entropy_bits(const Distribution& d);

// Kullback-Leibler divergence sum_X q_X log2(q_X / p_X) in bits.
double kl_divergence(const Distribution& q, const Distribution& p);

struct CorpusSpec {
    Grammar grammar;
    std::size_t target_size_bytes = 16000;
    std::uint64_t seed = 0;
    std::uint64_t file_index = 0;
    std::string class_label;
    std::string id;
};

// Concatenates sampled sentences (delimiters included) until the next one
// would overflow target_size_bytes. The generator is keyed by
// (seed, file_index).
Document generate_corpus(const CorpusSpec& spec);

// "v=1/4,w=1/2" -> label used for generated classes.
std::string binding_label(const std::map<std::string, Rational>& bindings);

void write_distribution(std::ostream& out, const Distribution& d);

}  // namespace ncdlab
