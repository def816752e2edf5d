#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ncdlab/distortion.hpp"
#include "ncdlab/error.hpp"
#include "ncdlab/rng.hpp"
#include "support.hpp"

using namespace ncdlab;

namespace {

FrequencyList list_from(const std::string& text) {
    std::istringstream in(text);
    return load_frequency_list(in);
}

FrequencyList bnc_like() {
    std::ifstream in(testing::data_path("bnc_like.tsv"));
    return load_frequency_list(in);
}

WordSet set_of(std::initializer_list<const char*> words) {
    WordSet s;
    for (const char* w : words) s.words.insert(w);
    return s;
}

std::vector<std::string> texts(const TokenSequence& seq) {
    std::vector<std::string> out;
    for (const auto& t : seq.tokens) out.push_back(t.text);
    return out;
}

std::vector<std::string> sorted_texts(const std::string& masked) {
    auto v = texts(tokenize_masked(masked));
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<TokenKind> kinds(const std::string& masked) {
    std::vector<TokenKind> out;
    for (const auto& t : tokenize_masked(masked).tokens) out.push_back(t.kind);
    return out;
}

const std::string kSample =
    "The quick brown fox jumps over the lazy dog, and the dog does not care. "
    "Of all the animals in the yard, the fox is the one that is most likely to be seen "
    "at night; it's quiet and it moves between the fences as if it owned them.";

}  // namespace

TEST_CASE("frequency list normalizes and sorts") {
    const auto f = list_from("the\t6000000\nof\t3000000\nand\t2600000\ncat\t10\n");
    REQUIRE(f.entries.size() == 4);
    CHECK(f.entries[0].word == "the");
    double total = 0.0;
    for (const auto& e : f.entries) total += e.frequency;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.entries[0].frequency == doctest::Approx(6000000.0 / 11600010.0));
}

TEST_CASE("frequency list merges duplicates and breaks ties lexicographically") {
    const auto f = list_from("a\t1\nA\t2\nb\t3\nc\t3\n");
    REQUIRE(f.entries.size() == 3);
    CHECK(f.entries[0].word == "a");
    CHECK(f.entries[1].word == "b");
    CHECK(f.entries[2].word == "c");
    CHECK(f.entries[0].frequency == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("frequency list errors") {
    try {
        list_from("the\t10\ncat\tmany\n");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    try {
        list_from("# nothing\n\n");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Input);
    }
}

TEST_CASE("first word set of the BNC-like list") {
    const auto sets = build_word_sets(bnc_like(), {0.1, 0.2});
    CHECK(sets[0].words == std::set<std::string>{"the", "of", "and"});
    CHECK(std::includes(sets[1].words.begin(), sets[1].words.end(), sets[0].words.begin(), sets[0].words.end()));
}

TEST_CASE("word sets follow cumulative prefix arithmetic") {
    std::string text;
    for (char c = 'a'; c < 'a' + 10; ++c) text += std::string(1, c) + "\t1\n";
    const auto f = list_from(text);
    CHECK(build_word_sets(f, {0.35})[0].words == std::set<std::string>{"a", "b", "c", "d"});
    CHECK(build_word_sets(f, {1.0})[0].words.size() == 10);
    CHECK_THROWS_AS(build_word_sets(f, {0.0}), Error);
    CHECK_THROWS_AS(build_word_sets(f, {1.5}), Error);

    // independent oracle: smallest k whose cumulative mass reaches d
    const auto big = bnc_like();
    const auto sets = build_word_sets(big, standard_degrees());
    for (std::size_t s = 0; s < sets.size(); ++s) {
        double cum = 0.0;
        std::size_t k = 0;
        while (k < big.entries.size() && cum < sets[s].degree - 1e-12) cum += big.entries[k++].frequency;
        if (s + 1 == sets.size()) k = big.entries.size();
        CHECK(sets[s].words.size() == k);
        if (s > 0) CHECK(sets[s - 1].words.size() <= sets[s].words.size());
    }
}

TEST_CASE("tokenizer examples") {
    CHECK(texts(tokenize("the cat.")) == std::vector<std::string>{"the", " ", "cat", "."});
    CHECK(texts(tokenize("don't stop")) == std::vector<std::string>{"don't", " ", "stop"});
    const auto seq = tokenize("a**b");
    CHECK(texts(seq) == std::vector<std::string>{"a", "**", "b"});
    CHECK(seq.tokens[1].kind == TokenKind::Separator);
    CHECK(texts(tokenize("well-known")) == std::vector<std::string>{"well", "-", "known"});
    CHECK(texts(tokenize("'tis")) == std::vector<std::string>{"'", "tis"});
    CHECK(tokenize_masked("a**b").tokens[1].kind == TokenKind::AsteriskRun);
    CHECK(tokenize(kSample).text() == kSample);
}

TEST_CASE("OO replaces listed words with asterisks") {
    CHECK(apply_oo("the cat", set_of({"the"})) == "*** cat");
    CHECK(apply_oo("The THE the", set_of({"the"})) == "*** *** ***");
    CHECK(apply_oo("zygote", set_of({"the", "of", "and"})) == "zygote");
    CHECK(apply_oo(kSample, set_of({"the", "fox"})).size() == kSample.size());
}

TEST_CASE("RPE with a single movable token is the identity") {
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        CHECK(permute("  hello!  ", {Technique::RPE, 0.1, seed, 0}) == "  hello!  ");
}

TEST_CASE("RPRW keeps runs in place") {
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto out = permute("*** cat ** dog", {Technique::RPRW, 0.1, seed, 0});
        CHECK(out.substr(0, 3) == "***");
        CHECK(out.substr(8, 2) == "**");
        seen.insert(out);
    }
    CHECK(seen == std::set<std::string>{"*** cat ** dog", "*** dog ** cat"});
}

TEST_CASE("RPA golden arrangement for seed 42") {
    const DistortionPlan plan{Technique::RPA, 0.1, 42, 0};
    CHECK(permute("**** a ** b ***", plan) == "**** a *** b **");

    // same draws through an independent Fisher-Yates over the run list
    std::vector<std::string> runs{"****", "**", "***"};
    Rng rng(derive_seed(42, 0));
    for (std::size_t i = runs.size(); i > 1; --i) std::swap(runs[i - 1], runs[rng.below(i)]);
    CHECK(permute("**** a ** b ***", plan) == runs[0] + " a " + runs[1] + " b " + runs[2]);
}

TEST_CASE("RPA interleave mode keeps word order") {
    DistortionPlan plan{Technique::RPA, 0.1, 42, 0, RpaMode::Interleave};
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        plan.seed = seed;
        const auto out = permute("**** a ** b ***", plan);
        CHECK(sorted_texts(out) == sorted_texts("**** a ** b ***"));
        CHECK(out.find('a') < out.find('b'));
    }
}

TEST_CASE("OO is not a permutation") {
    try {
        permute("abc", {Technique::OO, 0.1, 1, 0});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Contract);
    }
}

TEST_CASE("technique names round trip") {
    for (auto t : {Technique::OO, Technique::RPA, Technique::RPRW, Technique::RPE}) CHECK(parse_technique(to_string(t)) == t);
    CHECK_THROWS_AS(parse_technique("XYZ"), Error);
}

TEST_CASE("distort_document examples") {
    const Document doc{"c/a.txt", "c", kSample};
    const auto same = distort_document(doc, WordSet{}, {Technique::OO, 0.0, 0, 0});
    CHECK(same.body == doc.body);
    CHECK(same.id == doc.id);
    CHECK(same.class_label == doc.class_label);

    const auto all = build_word_sets(bnc_like(), {1.0})[0];
    const auto masked = distort_document(doc, all, {Technique::OO, 1.0, 0, 0}).body;
    for (const auto& t : tokenize_masked(masked).tokens)
        if (t.kind == TokenKind::Word) CHECK_FALSE(all.contains(to_lower_ascii(t.text)));

    const auto words = build_word_sets(bnc_like(), {0.3})[0];
    std::set<std::string> outs;
    for (std::uint32_t r = 0; r < 12; ++r) {
        const DistortionPlan plan{Technique::RPE, 0.3, 9, r};
        const auto a = distort_document(doc, words, plan).body;
        CHECK(a == distort_document(doc, words, plan).body);
        outs.insert(a);
    }
    CHECK(outs.size() == 12);
}

TEST_CASE("permutation properties on random documents") {
    const auto freq = bnc_like();
    const auto sets = build_word_sets(freq, standard_degrees());
    const std::string alphabet = "abcdefghijklmnopqrstuvwxyz      .,'-\n";
    for (std::uint64_t trial = 0; trial < 40; ++trial) {
        auto body = testing::random_text(400, trial, alphabet);
        body += " the of and to a in that is was it ";
        const Document doc{"d", "c", body};
        std::size_t prev_stars = 0;
        for (const auto& ws : sets) {
            const auto oo = distort_document(doc, ws, {Technique::OO, ws.degree, trial, 0}).body;
            CHECK(oo.size() == body.size());
            const auto stars = static_cast<std::size_t>(std::count(oo.begin(), oo.end(), '*'));
            CHECK(stars >= prev_stars);
            prev_stars = stars;

            const auto k = kinds(oo);
            const auto base = tokenize_masked(oo).tokens;
            for (auto t : {Technique::RPA, Technique::RPRW, Technique::RPE}) {
                const auto out = permute(oo, {t, ws.degree, trial, 1});
                CHECK(sorted_texts(out) == sorted_texts(oo));
                const auto moved = tokenize_masked(out).tokens;
                REQUIRE(moved.size() == base.size());
                for (std::size_t i = 0; i < base.size(); ++i) {
                    if (base[i].kind == TokenKind::Separator) CHECK(moved[i].text == base[i].text);
                    if (t == Technique::RPA && base[i].kind == TokenKind::Word) CHECK(moved[i].text == base[i].text);
                    if (t == Technique::RPRW && base[i].kind == TokenKind::AsteriskRun) CHECK(moved[i].text == base[i].text);
                }
                CHECK(kinds(out).size() == k.size());
            }
        }
    }
}
