// Acceptance run: one PASS/FAIL line per criterion. Criteria that the
// implementation cannot meet are reported as FAIL with the measured values;
// the process exit status reflects crashes only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ncdlab/codec.hpp"
#include "ncdlab/distortion.hpp"
#include "ncdlab/grammar.hpp"
#include "ncdlab/metrics.hpp"
#include "ncdlab/ncd.hpp"
#include "ncdlab/pipeline.hpp"
#include "ncdlab/ppm.hpp"
#include "ncdlab/projection.hpp"
#include "ncdlab/tree.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ncdlab;

namespace {

constexpr double kDscTolerance = 0.001;
constexpr double kRelativeTolerance = 0.002;
constexpr double kNcdUpper = 1.0 + kNcdEpsilon;
constexpr double kProcrustesLimit = 1e-6;
constexpr double kRandomBitsFloor = 7.9;
constexpr double kEnglishBitsCeiling = 3.0;
constexpr double kDscTie = 1e-9;
const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};
const std::vector<int> kOrders{2, 4, 6};

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s C%d %s: %s [%.2fs, budget %.0fs%s]\n", pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs,
                budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

UnrootedBinaryTree fixture_tree(const std::string& name) {
    return parse_newick(testing::read_text(testing::data_path(name)), id_prefix_label);
}

Grammar sentence_grammar(Rational v, Rational w) {
    std::istringstream in(testing::read_text(testing::data_path("sentence.grammar")));
    return parse_grammar(in, {{"v", v}, {"w", w}});
}

std::vector<GrammarClass> sentence_classes() {
    GrammarExperimentConfig cfg;
    return grammar_classes(cfg);
}

std::vector<Document> sentence_corpus(std::size_t per_class, std::uint64_t seed) {
    return generate_grammar_corpus(testing::read_text(testing::data_path("sentence.grammar")), sentence_classes(), per_class, 16000,
                                   seed);
}

Outcome c1() {
    const auto a = fixture_tree("mixed_tree.nwk");
    const auto b = fixture_tree("clean_tree.nwk");
    const auto ea = clustering_error(a, ClusterAssignment::from_tree(a));
    const auto eb = clustering_error(b, ClusterAssignment::from_tree(b));
    const double da = dsc(a, ClusterAssignment::from_tree(a));
    const double db = dsc(b, ClusterAssignment::from_tree(b));
    const bool ok = ea == 9 && eb == 0 && std::abs(da - 0.589) <= kDscTolerance && std::abs(db - 0.767) <= kDscTolerance;
    return {ok, "error(1a)=" + std::to_string(ea) + " (want 9), error(1b)=" + std::to_string(eb) + " (want 0), DSC(1a)=" +
                    fmt("%.4f", da) + " (want 0.589), DSC(1b)=" + fmt("%.4f", db) + " (want 0.767), tol " +
                    fmt("%.3f", kDscTolerance)};
}

Outcome c2() {
    const std::vector<std::pair<double, double>> rows{{0.406, 0.287}, {0.364, 0.334}, {0.321, 0.376}};
    Outcome o{true, ""};
    for (auto [di, want] : rows) {
        const double r = dsc_relative(0.576, di);
        o.pass = o.pass && std::abs(r - want) <= kRelativeTolerance;
        o.detail += fmt("%.3f", di) + "->" + fmt("%.4f", r) + " (want " + fmt("%.3f", want) + ") ";
    }
    o.detail += "tol " + fmt("%.3f", kRelativeTolerance);
    return o;
}

Outcome c3() {
    const auto d = enumerate_distribution(sentence_grammar(Rational(1, 2), Rational(1, 2)));
    Rational total;
    for (const auto& [s, p] : d) total += p;
    const bool has = d.count("acft.123456") == 1;
    const double bits = has ? -std::log2(d.at("acft.123456").to_double()) : -1.0;
    const bool ok = has && d.at("acft.123456") == Rational(1, 16) && bits == 4.0 && d.size() == 16 && total == Rational(1);
    return {ok, "H(acft.123456)=" + fmt("%.6f", bits) + " bits, " + std::to_string(d.size()) + " sentences, total " + total.str()};
}

struct SweepRow {
    std::map<int, long long> error;
    std::map<int, double> silhouette;
};

Outcome c4() {
    const TreeOptions tree;
    std::map<int, int> zero, positive;
    std::string detail;
    for (auto seed : kSeeds) {
        const auto docs = sentence_corpus(4, seed);
        detail += "seed " + std::to_string(seed) + ":";
        for (int order : kOrders) {
            const auto m = ncd_matrix(docs, CodecSpec::ppm(order));
            const auto t = cluster_matrix(m, tree, seed);
            const auto e = clustering_error(t, ClusterAssignment::from_matrix(m));
            (e == 0 ? zero : positive)[order]++;
            detail += " o" + std::to_string(order) + "=" + std::to_string(e);
        }
        detail += "; ";
    }
    const bool ok = zero[4] >= 4 && positive[2] >= 3 && positive[6] >= 3;
    detail += "errorless@4 in " + std::to_string(zero[4]) + "/5 (want >=4), error>0 @2 in " + std::to_string(positive[2]) +
              "/5, @6 in " + std::to_string(positive[6]) + "/5 (want >=3 each)";
    return {ok, detail};
}

Outcome c5() {
    int wins = 0;
    std::string detail;
    for (auto seed : kSeeds) {
        const auto docs = sentence_corpus(30, seed);
        std::map<int, double> sc;
        for (int order : kOrders) sc[order] = silhouette_euclidean(mds_project(ncd_matrix(docs, CodecSpec::ppm(order))));
        if (sc[4] > sc[2] && sc[4] > sc[6]) ++wins;
        detail += "seed " + std::to_string(seed) + ": " + fmt("%.3f", sc[2]) + "/" + fmt("%.3f", sc[4]) + "/" +
                  fmt("%.3f", sc[6]) + "; ";
    }
    detail += "SC(o2/o4/o6); order 4 strictly best in " + std::to_string(wins) + "/5 (want >=4)";
    return {wins >= 4, detail};
}

Outcome c6() {
    Outcome o{true, ""};
    for (int k = 1; k <= 6; ++k) {
        const auto closed = class_baseline(static_cast<std::size_t>(k));
        const auto brute = oracles::baseline(k);
        o.pass = o.pass && closed == brute;
        o.detail += "B(" + std::to_string(k) + ")=" + std::to_string(closed) + "/" + std::to_string(brute) + " ";
    }
    o.pass = o.pass && class_baseline(2) == 1 && class_baseline(3) == 5 && class_baseline(4) == 13;
    o.detail += "(implementation/enumeration)";
    return o;
}

Outcome c7() {
    std::vector<std::string> broken;
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) broken.push_back(what);
    };
    const auto english = testing::fixture("english.txt");
    const auto english2 = testing::fixture("english2.txt");

    // NCD symmetry and range within each fixture family
    const std::vector<Document> text{{"lic/a", "lic", english.substr(0, 4000)},
                                     {"lic/b", "lic", english.substr(4000, 4000)},
                                     {"gpl/a", "gpl", english2.substr(0, 4000)},
                                     {"gpl/b", "gpl", english2.substr(4000, 4000)}};
    const auto grammar = sentence_corpus(2, 9);
    double worst = 0.0;
    for (const auto* family : {&text, &grammar})
        for (const auto& codec : {CodecSpec::ppm(2), CodecSpec::ppm(4), CodecSpec::ppm(6), CodecSpec::lz(), CodecSpec::bwt()}) {
            const auto& docs = *family;
            const auto m = ncd_matrix(docs, codec);
            const auto r = range_check(m);
            worst = std::max(worst, r.max);
            require(r.symmetric && r.min >= 0.0 && r.max <= kNcdUpper, "ncd range/symmetry " + codec.str());
            for (std::size_t i = 0; i < docs.size(); ++i)
                for (std::size_t j = 0; j < docs.size(); ++j)
                    require(ncd(as_bytes(docs[i].body), as_bytes(docs[j].body), codec) ==
                                ncd(as_bytes(docs[j].body), as_bytes(docs[i].body), codec),
                            "ncd symmetry " + codec.str());
        }
    const double cross = ncd(as_bytes(text[0].body), as_bytes(grammar[0].body), CodecSpec::ppm(4));

    // PPM determinism and bit-rate bounds
    const auto noise = testing::random_bytes(1 << 16, 77);
    const double a = ppm_code_length(as_bytes(english), 4).bits;
    require(a == ppm_code_length(as_bytes(english), 4).bits, "ppm determinism");
    const double random_rate = ppm_code_length(as_bytes(noise), 3).bits / noise.size();
    const double english_rate = ppm_code_length(as_bytes(english), 4).bits / english.size();
    require(random_rate >= kRandomBitsFloor, "ppm random rate");
    require(english_rate <= kEnglishBitsCeiling, "ppm English rate");

    // word-set nesting, OO length, permutation multiset and slot types
    std::ifstream fin(testing::data_path("bnc_like.tsv"));
    const auto freq = load_frequency_list(fin);
    const auto sets = build_word_sets(freq, standard_degrees());
    require(sets[0].words == std::set<std::string>{"the", "of", "and"}, "first word set");
    for (std::size_t s = 1; s < sets.size(); ++s)
        require(std::includes(sets[s].words.begin(), sets[s].words.end(), sets[s - 1].words.begin(), sets[s - 1].words.end()),
                "word-set nesting");
    auto sorted_tokens = [](const std::string& text) {
        std::vector<std::string> v;
        for (const auto& t : tokenize_masked(text).tokens) v.push_back(t.text);
        std::sort(v.begin(), v.end());
        return v;
    };
    for (const auto& ws : sets) {
        const auto oo = apply_oo(english, ws);
        require(oo.size() == english.size(), "OO length");
        const auto base = tokenize_masked(oo).tokens;
        for (auto t : {Technique::RPA, Technique::RPRW, Technique::RPE}) {
            const auto out = permute(oo, {t, ws.degree, 5, 0});
            require(sorted_tokens(out) == sorted_tokens(oo), "permutation multiset");
            const auto moved = tokenize_masked(out).tokens;
            if (moved.size() != base.size()) {
                require(false, "token count");
                continue;
            }
            for (std::size_t i = 0; i < base.size(); ++i) {
                const bool fixed = base[i].kind == TokenKind::Separator ||
                                   (t == Technique::RPA && base[i].kind == TokenKind::Word) ||
                                   (t == Technique::RPRW && base[i].kind == TokenKind::AsteriskRun);
                if (fixed) require(moved[i].text == base[i].text, "slot types");
            }
        }
    }

    // KL
    const std::vector<Rational> vs{Rational(1, 4), Rational(1, 5), Rational(1, 6)};
    for (auto v1 : vs)
        for (auto v2 : vs) {
            const double k = kl_divergence(enumerate_distribution(sentence_grammar(v1, Rational(1, 2))),
                                           enumerate_distribution(sentence_grammar(v2, Rational(1, 2))));
            require(k >= 0.0 && ((v1 == v2) == (k == 0.0)), "KL");
        }

    // MDS Procrustes recovery
    Rng rng(3);
    double residual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<oracles::Pt> pts;
        DistanceMatrix m;
        for (int i = 0; i < 6; ++i) {
            pts.push_back({rng.unit() * 4, rng.unit() * 4});
            m.ids.push_back("p" + std::to_string(i));
            m.labels.push_back("c");
        }
        m.values.assign(36, 0.0);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) m.at(i, j) = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
        std::vector<oracles::Pt> got;
        for (const auto& p : mds_project(m).points) got.push_back({p.x, p.y});
        residual = std::max(residual, oracles::procrustes_residual(got, pts));
    }
    require(residual < kProcrustesLimit, "Procrustes");

    std::string detail = "max NCD " + fmt("%.4f", worst) + " (<= " + fmt("%.1f", kNcdUpper) + "; English vs grammar text, not in the suite: " +
                         fmt("%.4f", cross) + "), random " +
                         fmt("%.3f", random_rate) + " bits/byte, English " + fmt("%.3f", english_rate) +
                         " bits/char, Procrustes " + fmt("%.2e", residual);
    if (!broken.empty()) {
        detail += "; broken:";
        for (const auto& b : broken) detail += " " + b;
    }
    return {broken.empty(), detail};
}

// Keyword-style synthetic data: class-unique words inside shuffled filler.
std::vector<Document> keyword_corpus(std::uint64_t seed) {
    const std::vector<std::string> filler{"time", "people", "year", "way", "work", "said", "made", "like",
                                          "would", "could", "which", "there", "their", "about", "other", "first"};
    const std::vector<std::vector<std::string>> keys{{"zebra", "quartz", "jackal"}, {"violin", "oboe", "cello"}, {"granite", "basalt", "shale"}};
    Rng rng(seed);
    std::vector<Document> docs;
    for (std::size_t c = 0; c < keys.size(); ++c)
        for (int f = 0; f < 4; ++f) {
            std::string body;
            while (body.size() < 4000) {
                body += rng.below(6) == 0 ? keys[c][rng.below(3)] : filler[rng.below(filler.size())];
                body += ' ';
            }
            docs.push_back({"k" + std::to_string(c) + "/f" + std::to_string(f), "k" + std::to_string(c), body});
        }
    return docs;
}

Outcome c8() {
    int holds = 0;
    std::string detail;
    for (auto seed : kSeeds) {
        const auto pts = order_sweep_documents(keyword_corpus(seed), {2, 6}, TreeOptions{}, seed);
        if (pts[0].dsc >= pts[1].dsc - kDscTie) ++holds;
        detail += fmt("%.3f", pts[0].dsc) + "/" + fmt("%.3f", pts[1].dsc) + " ";
    }
    return {holds == static_cast<int>(kSeeds.size()),
            "the absolute dataset curves and tables need the original corpora and the BNC, which are not "
            "distributable, so they are not reproduced here; substitute checks are C4 and this keyword sweep, DSC(o2/o6) " +
                detail + "with order 2 >= order 6 in " + std::to_string(holds) + "/5"};
}

}  // namespace

int main() {
    criterion(1, "error and DSC on the reference trees", 1, c1);
    criterion(2, "relative DSC closure", 1, c2);
    criterion(3, "grammar sentence entropy and distribution", 1, c3);
    criterion(4, "grammar order sweep, 12 files", 300, c4);
    criterion(5, "projection silhouette ordering, 90 files", 900, c5);
    criterion(6, "errorless baseline against enumeration", 60, c6);
    criterion(7, "property suite", 300, c7);
    criterion(8, "desk-scale reproducibility statement", 300, c8);
    std::printf("acceptance: %d of 8 criteria failed\n", failures);
    return 0;
}
