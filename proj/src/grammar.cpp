#include "ncdlab/grammar.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "ncdlab/error.hpp"

namespace ncdlab {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

Rational probability_of(const std::string& token, const std::map<std::string, Rational>& bindings,
                        std::size_t line_no) {
    auto lookup = [&](const std::string& name) {
        const auto it = bindings.find(name);
        if (it == bindings.end())
            throw Error(ErrorKind::Input, "grammar line " + std::to_string(line_no) + ": unbound parameter '" + name + "'");
        return it->second;
    };
    const bool numeric = !token.empty() && (std::isdigit(static_cast<unsigned char>(token[0])) || token[0] == '.');
    if (token.starts_with("1-") && token.size() > 2 && !std::isdigit(static_cast<unsigned char>(token[2])))
        return Rational(1) - lookup(token.substr(2));
    if (numeric) {
        try {
            return Rational::parse(token);
        } catch (const Error&) {
            throw Error(ErrorKind::Parse, "grammar line " + std::to_string(line_no) + ": bad probability '" + token + "'");
        }
    }
    return lookup(token);
}

}  // namespace

bool Grammar::is_nonterminal(const std::string& symbol) const {
    return std::find(nonterminals.begin(), nonterminals.end(), symbol) != nonterminals.end();
}

std::vector<std::size_t> Grammar::productions_of(const std::string& lhs) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < productions.size(); ++i)
        if (productions[i].lhs == lhs) out.push_back(i);
    return out;
}

bool Grammar::is_recursive() const {
    // DFS for a cycle in the nonterminal reference graph.
    std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    std::function<bool(const std::string&)> visit = [&](const std::string& nt) {
        auto& s = state[nt];
        if (s == 1) return true;
        if (s == 2) return false;
        s = 1;
        for (const auto idx : productions_of(nt))
            for (const auto& sym : productions[idx].rhs)
                if (is_nonterminal(sym) && visit(sym)) return true;
        state[nt] = 2;
        return false;
    };
    for (const auto& nt : nonterminals)
        if (visit(nt)) return true;
    return false;
}

Grammar parse_grammar(std::istream& in, const std::map<std::string, Rational>& bindings) {
    Grammar g;
    g.parameters = bindings;
    std::set<std::string> declared;
    bool has_declaration = false;
    std::vector<std::size_t> production_lines;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto toks = split_ws(line);
        if (toks.empty() || toks[0].starts_with("#")) continue;
        if (toks[0] == "%terminals") {
            has_declaration = true;
            declared.insert(toks.begin() + 1, toks.end());
            continue;
        }
        if (toks.size() < 4 || toks[2] != ":")
            throw Error(ErrorKind::Parse, "grammar line " + std::to_string(line_no) + ": expected '<prob> <LHS> : <RHS>'");
        Production p;
        p.probability = probability_of(toks[0], bindings, line_no);
        if (p.probability <= Rational(0) || p.probability > Rational(1))
            throw Error(ErrorKind::Input, "grammar line " + std::to_string(line_no) + ": probability " +
                                              p.probability.str() + " outside (0, 1]");
        p.lhs = toks[1];
        p.rhs.assign(toks.begin() + 3, toks.end());
        if (!g.is_nonterminal(p.lhs)) g.nonterminals.push_back(p.lhs);
        g.productions.push_back(std::move(p));
        production_lines.push_back(line_no);
    }
    if (g.productions.empty()) throw Error(ErrorKind::Input, "grammar has no productions");
    g.root = g.productions.front().lhs;

    std::set<std::string> terminals;
    for (std::size_t i = 0; i < g.productions.size(); ++i)
        for (const auto& sym : g.productions[i].rhs) {
            if (g.is_nonterminal(sym)) continue;
            if (has_declaration && !declared.count(sym))
                throw Error(ErrorKind::Input, "grammar line " + std::to_string(production_lines[i]) +
                                                  ": unknown symbol '" + sym + "'");
            terminals.insert(sym);
        }
    g.terminals.assign(terminals.begin(), terminals.end());

    for (const auto& nt : g.nonterminals) {
        Rational sum(0);
        for (const auto idx : g.productions_of(nt)) sum += g.productions[idx].probability;
        if (sum != Rational(1))
            throw Error(ErrorKind::Input, "productions of '" + nt + "' sum to " + sum.str() + ", not 1");
    }

    const auto& root_rhs = g.productions.front().rhs;
    if (!root_rhs.empty() && !g.is_nonterminal(root_rhs.back())) g.delimiter = root_rhs.back();
    return g;
}

Sentence generate_sentence(const Grammar& g, Rng& rng) {
    Sentence s;
    s.probability = Rational(1);
    double log_p = 0.0;
    // Stack of pending symbols, top = next leftmost symbol.
    std::vector<std::pair<std::string, std::size_t>> stack{{g.root, 0}};
    while (!stack.empty()) {
        auto [sym, depth] = std::move(stack.back());
        stack.pop_back();
        if (!g.is_nonterminal(sym)) {
            s.text += sym;
            continue;
        }
        if (depth >= kMaxExpansionDepth)
            throw Error(ErrorKind::Runaway, "grammar expansion exceeded depth " + std::to_string(kMaxExpansionDepth));
        const auto choices = g.productions_of(sym);
        const double u = rng.unit();
        double cumulative = 0.0;
        std::size_t pick = choices.back();
        for (const auto idx : choices) {
            cumulative += g.productions[idx].probability.to_double();
            if (u < cumulative) {
                pick = idx;
                break;
            }
        }
        const auto& prod = g.productions[pick];
        s.probability *= prod.probability;
        log_p += std::log2(prod.probability.to_double());
        for (auto it = prod.rhs.rbegin(); it != prod.rhs.rend(); ++it) stack.emplace_back(*it, depth + 1);
    }
    s.entropy_bits = log_p == 0.0 ? 0.0 : -log_p;
    return s;
}

Distribution enumerate_distribution(const Grammar& g) {
    if (g.is_recursive()) throw Error(ErrorKind::Unsupported, "cannot enumerate a recursive grammar");
    std::map<std::string, Distribution> memo;
    std::function<const Distribution&(const std::string&)> language = [&](const std::string& nt) -> const Distribution& {
        if (const auto it = memo.find(nt); it != memo.end()) return it->second;
        Distribution out;
        for (const auto idx : g.productions_of(nt)) {
            const auto& prod = g.productions[idx];
            Distribution partial{{"", prod.probability}};
            for (const auto& sym : prod.rhs) {
                Distribution next;
                if (g.is_nonterminal(sym)) {
                    const auto& sub = language(sym);
                    if (partial.size() * sub.size() > kMaxLanguageSize)
                        throw Error(ErrorKind::Resource, "language exceeds " + std::to_string(kMaxLanguageSize) + " sentences");
                    for (const auto& [prefix, p] : partial)
                        for (const auto& [suffix, q] : sub)
                            if (!next.emplace(prefix + suffix, p * q).second)
                                throw Error(ErrorKind::Unsupported, "ambiguous grammar: '" + prefix + suffix +
                                                                        "' has several derivations");
                } else {
                    for (const auto& [prefix, p] : partial) next.emplace(prefix + sym, p);
                }
                partial = std::move(next);
            }
            for (auto& [text, p] : partial)
                if (!out.emplace(text, p).second)
                    throw Error(ErrorKind::Unsupported, "ambiguous grammar: '" + text + "' has several derivations");
        }
        return memo.emplace(nt, std::move(out)).first->second;
    };
    return language(g.root);
}

double entropy_bits(const Distribution& d) {
    double h = 0.0;
    for (const auto& [text, p] : d) {
        const double x = p.to_double();
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h;
}

double kl_divergence(const Distribution& q, const Distribution& p) {
    double sum = 0.0;
    for (const auto& [text, qx] : q) {
        if (qx == Rational(0)) continue;
        const auto it = p.find(text);
        if (it == p.end() || it->second == Rational(0))
            throw Error(ErrorKind::Domain, "KL divergence undefined: '" + text + "' is outside the support of p");
        if (qx == it->second) continue;
        sum += qx.to_double() * std::log2((qx / it->second).to_double());
    }
    return sum;
}

Document generate_corpus(const CorpusSpec& spec) {
    Rng rng(derive_seed(spec.seed, spec.file_index));
    Document doc{spec.id, spec.class_label, {}};
    for (;;) {
        const auto s = generate_sentence(spec.grammar, rng);
        if (doc.body.size() + s.text.size() > spec.target_size_bytes) {
            if (doc.body.empty())
                throw Error(ErrorKind::Input, "corpus target of " + std::to_string(spec.target_size_bytes) +
                                                  " bytes is smaller than one sentence");
            break;
        }
        doc.body += s.text;
    }
    return doc;
}

std::string binding_label(const std::map<std::string, Rational>& bindings) {
    std::string out;
    for (const auto& [k, v] : bindings) {
        if (!out.empty()) out += ',';
        out += k + "=" + v.str();
    }
    return out;
}

void write_distribution(std::ostream& out, const Distribution& d) {
    for (const auto& [text, p] : d) out << text << '\t' << p.num() << '/' << p.den() << '\n';
}

}  // namespace ncdlab
