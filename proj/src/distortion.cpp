#include "ncdlab/distortion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>

#include "ncdlab/error.hpp"
#include "ncdlab/rng.hpp"

namespace ncdlab {
namespace {

bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

// Cumulative sums are compared with this slack so d = 1.0 reaches the whole list.
constexpr double kCumulativeSlack = 1e-9;

template <class Emit>
void scan(std::string_view text, bool masked, Emit&& emit) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const std::size_t start = i;
        if (is_letter(text[i])) {
            ++i;
            while (i < n) {
                if (is_letter(text[i])) {
                    ++i;
                } else if (text[i] == '\'' && i + 1 < n && is_letter(text[i + 1])) {
                    i += 2;
                } else {
                    break;
                }
            }
            emit(TokenKind::Word, text.substr(start, i - start));
        } else if (masked && text[i] == '*') {
            while (i < n && text[i] == '*') ++i;
            emit(TokenKind::AsteriskRun, text.substr(start, i - start));
        } else {
            while (i < n && !is_letter(text[i]) && !(masked && text[i] == '*')) ++i;
            emit(TokenKind::Separator, text.substr(start, i - start));
        }
    }
}

TokenSequence tokenize_impl(std::string_view text, bool masked) {
    TokenSequence seq;
    scan(text, masked, [&](TokenKind kind, std::string_view s) {
        seq.tokens.push_back(Token{kind, std::string(s), seq.tokens.size()});
    });
    return seq;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

FrequencyList load_frequency_list(std::istream& in) {
    std::map<std::string, double> mass;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto tab = body.find('\t');
        if (tab == std::string_view::npos)
            throw Error(ErrorKind::Parse, "frequency list line " + std::to_string(line_no) + ": expected word<TAB>number");
        const auto word = trim(body.substr(0, tab));
        const auto number = trim(body.substr(tab + 1));
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
        if (word.empty() || number.empty() || ec != std::errc() || ptr != number.data() + number.size() ||
            !std::isfinite(value) || value <= 0.0)
            throw Error(ErrorKind::Parse, "frequency list line " + std::to_string(line_no) + ": bad entry '" +
                                              std::string(body) + "'");
        mass[to_lower_ascii(word)] += value;
    }
    if (mass.empty()) throw Error(ErrorKind::Input, "frequency list is empty");

    double total = 0.0;
    for (const auto& [w, m] : mass) total += m;
    FrequencyList list;
    for (const auto& [w, m] : mass) list.entries.push_back({w, m / total});
    std::stable_sort(list.entries.begin(), list.entries.end(),
                     [](const auto& a, const auto& b) { return a.frequency > b.frequency; });
    return list;
}

bool WordSet::contains(std::string_view lowercase_word) const {
    return words.find(std::string(lowercase_word)) != words.end();
}

std::vector<WordSet> build_word_sets(const FrequencyList& freq, const std::vector<double>& degrees) {
    std::vector<WordSet> sets;
    double previous = 0.0;
    for (const double d : degrees) {
        if (!(d > 0.0) || d > 1.0) throw Error(ErrorKind::Input, "distortion degree must lie in (0, 1]");
        if (d < previous) throw Error(ErrorKind::Input, "distortion degrees must be ascending");
        previous = d;
    }
    for (const double d : degrees) {
        WordSet set;
        set.degree = d;
        double cumulative = 0.0;
        for (const auto& e : freq.entries) {
            if (cumulative >= d - kCumulativeSlack) break;
            set.words.insert(e.word);
            cumulative += e.frequency;
        }
        sets.push_back(std::move(set));
    }
    return sets;
}

std::vector<double> standard_degrees() {
    std::vector<double> d;
    for (int i = 1; i <= 10; ++i) d.push_back(i / 10.0);
    return d;
}

std::string TokenSequence::text() const {
    std::string s;
    for (const auto& t : tokens) s += t.text;
    return s;
}

TokenSequence tokenize(std::string_view text) { return tokenize_impl(text, false); }

TokenSequence tokenize_masked(std::string_view text) { return tokenize_impl(text, true); }

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::string apply_oo(std::string_view text, const WordSet& words) {
    std::string out;
    out.reserve(text.size());
    scan(text, false, [&](TokenKind kind, std::string_view s) {
        if (kind == TokenKind::Word && words.contains(to_lower_ascii(s)))
            out.append(s.size(), '*');
        else
            out.append(s);
    });
    return out;
}

std::string to_string(Technique t) {
    switch (t) {
        case Technique::OO: return "OO";
        case Technique::RPA: return "RPA";
        case Technique::RPRW: return "RPRW";
        case Technique::RPE: return "RPE";
    }
    return "?";
}

Technique parse_technique(std::string_view s) {
    const auto l = to_lower_ascii(s);
    if (l == "oo") return Technique::OO;
    if (l == "rpa") return Technique::RPA;
    if (l == "rprw") return Technique::RPRW;
    if (l == "rpe") return Technique::RPE;
    throw Error(ErrorKind::Input, "unknown distortion technique '" + std::string(s) + "' (oo, rpa, rprw, rpe)");
}

std::string permute(std::string_view masked, const DistortionPlan& plan) {
    if (plan.technique == Technique::OO) throw Error(ErrorKind::Contract, "permute() does not apply to OO");
    auto seq = tokenize_masked(masked);
    Rng rng(derive_seed(plan.seed, plan.repetition_index));

    auto shuffle = [&](std::vector<std::string>& items) {
        for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
    };

    const bool interleave = plan.technique == Technique::RPA && plan.rpa_mode == RpaMode::Interleave;
    auto movable = [&](TokenKind k) {
        switch (plan.technique) {
            case Technique::RPA: return k == TokenKind::AsteriskRun || (interleave && k == TokenKind::Word);
            case Technique::RPRW: return k == TokenKind::Word;
            case Technique::RPE: return k != TokenKind::Separator;
            case Technique::OO: break;
        }
        return false;
    };

    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < seq.tokens.size(); ++i)
        if (movable(seq.tokens[i].kind)) slots.push_back(i);

    if (interleave) {
        // Runs go to a uniformly chosen subset of the slots in shuffled order;
        // words fill the remaining slots in their original order.
        std::vector<std::string> runs, words;
        for (const auto s : slots)
            (seq.tokens[s].kind == TokenKind::AsteriskRun ? runs : words).push_back(seq.tokens[s].text);
        shuffle(runs);
        std::vector<char> is_run(slots.size(), 0);
        std::fill(is_run.begin(), is_run.begin() + static_cast<std::ptrdiff_t>(runs.size()), 1);
        for (std::size_t i = is_run.size(); i > 1; --i) std::swap(is_run[i - 1], is_run[rng.below(i)]);
        std::size_t r = 0, w = 0;
        for (std::size_t k = 0; k < slots.size(); ++k) seq.tokens[slots[k]].text = is_run[k] ? runs[r++] : words[w++];
        return seq.text();
    }

    std::vector<std::string> items;
    items.reserve(slots.size());
    for (const auto s : slots) items.push_back(seq.tokens[s].text);
    shuffle(items);
    for (std::size_t k = 0; k < slots.size(); ++k) seq.tokens[slots[k]].text = std::move(items[k]);
    return seq.text();
}

Document distort_document(const Document& doc, const WordSet& words, const DistortionPlan& plan) {
    Document out{doc.id, doc.class_label, apply_oo(doc.body, words)};
    if (plan.technique != Technique::OO) out.body = permute(out.body, plan);
    return out;
}

}  // namespace ncdlab
