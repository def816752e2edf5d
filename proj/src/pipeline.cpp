#include "ncdlab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "ncdlab/error.hpp"
#include "ncdlab/projection.hpp"
#include "ncdlab/rng.hpp"

namespace ncdlab {
namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorKind::Input, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + p.string());
    return out;
}

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string exact(double v) { return fmt(v, "%.17g"); }

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

int technique_rank(Technique t) { return static_cast<int>(t); }

}  // namespace

std::string sanitize_name(const std::string& s) {
    std::string out;
    for (const char c : s) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '=' || c == '-';
        out += keep ? c : '_';
    }
    return out.empty() ? "_" : out;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string dataset_digest(const std::vector<Document>& docs, const CodecSpec& codec) {
    std::uint64_t h = fnv1a(codec.str());
    for (const auto& d : docs) {
        h = fnv1a(std::string_view("\0", 1), fnv1a(d.id, h));
        h = fnv1a(std::string_view("\0", 1), fnv1a(d.class_label, h));
        h = fnv1a(std::to_string(d.body.size()), h);
        h = fnv1a(d.body, h);
    }
    return hex64(h);
}

std::vector<Document> load_dataset(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorKind::Input, "dataset directory not found: " + dir.string());
    std::vector<fs::path> classes;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_directory() && e.path().filename().string().front() != '.') classes.push_back(e.path());
    std::sort(classes.begin(), classes.end());
    std::vector<Document> docs;
    for (const auto& c : classes) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(c))
            if (e.is_regular_file() && e.path().filename().string().front() != '.') files.push_back(e.path());
        std::sort(files.begin(), files.end());
        const auto label = c.filename().string();
        for (const auto& f : files) docs.push_back({label + "/" + f.filename().string(), label, read_file(f)});
    }
    if (docs.empty()) throw Error(ErrorKind::Input, "dataset " + dir.string() + " has no class directories with files");
    return docs;
}

void write_dataset(const fs::path& dir, const std::vector<Document>& docs) {
    for (const auto& d : docs) {
        auto out = open_out(dir / d.id);
        out << d.body;
        if (!out) throw Error(ErrorKind::Io, "write failed for " + (dir / d.id).string());
    }
}

DistanceMatrix MatrixCache::get(const std::vector<Document>& docs, const CodecSpec& codec) {
    if (dir_.empty()) {
        ++misses_;
        return ncd_matrix(docs, codec);
    }
    const auto path = dir_ / (dataset_digest(docs, codec) + ".csv");
    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        auto m = read_matrix_csv(in);
        bool match = m.size() == docs.size();
        for (std::size_t i = 0; match && i < docs.size(); ++i) match = m.ids[i] == docs[i].id;
        if (match) {
            ++hits_;
            m.codec = codec;
            m.labels.clear();
            for (const auto& d : docs) m.labels.push_back(d.class_label);
            return m;
        }
    }
    ++misses_;
    auto m = ncd_matrix(docs, codec);
    auto out = open_out(path);
    write_matrix_csv(out, m, true);
    return m;
}

UnrootedBinaryTree cluster_matrix(const DistanceMatrix& m, const TreeOptions& opts, std::uint64_t seed) {
    const auto start = build_tree_agglomerative(m);
    if (opts.iterations == 0 || m.size() < 4) return start;
    return refine_tree_chains(m, start, opts.iterations, seed, opts.chains);
}

void ExperimentConfig::validate() const {
    if (repetitions < 1) throw Error(ErrorKind::Input, "repetitions must be at least 1");
    if (codecs.empty()) throw Error(ErrorKind::Input, "at least one codec is required");
    for (const auto& c : codecs) c.validate();
    for (const double d : degrees) {
        const double tenths = d * 10.0;
        if (d < 0.0 || d > 1.0 || std::abs(tenths - std::round(tenths)) > 1e-9)
            throw Error(ErrorKind::Input, "degrees must be multiples of 0.1 in [0, 1], got " + fmt(d, "%g"));
    }
    if (!dataset.empty() && !fs::is_directory(dataset))
        throw Error(ErrorKind::Input, "dataset directory not found: " + dataset.string());
    if (!freq.empty() && !fs::is_regular_file(freq))
        throw Error(ErrorKind::Input, "frequency list not found: " + freq.string());
    for (const int o : orders)
        if (o < kMinPpmOrder || o > kMaxPpmOrder) throw Error(ErrorKind::Input, "PPM order out of range: " + std::to_string(o));
}

std::string format_degree(double d) { return fmt(d, "%.1f"); }

FrequencyList load_frequency_file(const fs::path& path) {
    if (path.empty()) throw Error(ErrorKind::Input, "a frequency list (--freq) is required");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Input, "frequency list not found: " + path.string());
    return load_frequency_list(in);
}

WordSet word_set_for(const FrequencyList& freq, double degree) {
    if (degree <= 0.0) return WordSet{0.0, {}};
    return build_word_sets(freq, {degree}).front();
}

std::vector<Document> distort_corpus(const std::vector<Document>& docs, const WordSet& words,
                                     const DistortionPlan& plan) {
    std::vector<Document> out;
    out.reserve(docs.size());
    for (const auto& d : docs) {
        auto p = plan;
        p.seed = derive_seed(plan.seed, fnv1a(d.id));
        out.push_back(distort_document(d, words, p));
    }
    return out;
}

std::vector<DistortOutput> run_distort(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.out.empty()) throw Error(ErrorKind::Input, "an output directory (--out) is required");
    const auto docs = load_dataset(cfg.dataset);
    const auto freq = load_frequency_file(cfg.freq);
    std::vector<DistortOutput> outputs;
    auto manifest = open_out(cfg.out / "manifest.tsv");
    manifest << "path\ttechnique\tdegree\trepetition\tseed\trpa_mode\n";
    for (const auto t : cfg.techniques)
        for (const double d : cfg.degrees) {
            const auto words = word_set_for(freq, d);
            const std::uint32_t reps = t == Technique::OO ? 1 : cfg.repetitions;
            for (std::uint32_t r = 0; r < reps; ++r) {
                DistortionPlan plan{t, d, cfg.seed, r, cfg.rpa_mode};
                const auto dir = cfg.out / to_string(t) / ("d" + format_degree(d)) / ("r" + std::to_string(r));
                write_dataset(dir, distort_corpus(docs, words, plan));
                manifest << fs::relative(dir, cfg.out).generic_string() << '\t' << to_string(t) << '\t'
                         << format_degree(d) << '\t' << r << '\t' << cfg.seed << '\t'
                         << (cfg.rpa_mode == RpaMode::AsteriskSlots ? "slots" : "interleave") << '\n';
                outputs.push_back({dir, plan});
            }
        }
    return outputs;
}

QualitySummary summarize(std::vector<RunRecord> runs) {
    std::sort(runs.begin(), runs.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tuple(a.codec, technique_rank(a.technique), a.degree, a.repetition) <
               std::tuple(b.codec, technique_rank(b.technique), b.degree, b.repetition);
    });
    QualitySummary q;
    q.runs = runs;
    for (std::size_t i = 0; i < runs.size();) {
        std::size_t j = i;
        std::vector<double> dscs, errs;
        while (j < runs.size() && runs[j].codec == runs[i].codec && runs[j].technique == runs[i].technique &&
               runs[j].degree == runs[i].degree) {
            dscs.push_back(runs[j].dsc);
            errs.push_back(static_cast<double>(runs[j].clustering_error));
            ++j;
        }
        q.cells.push_back({runs[i].codec, runs[i].technique, runs[i].degree, dscs.size(), mean(dscs), stddev(dscs),
                           mean(errs), stddev(errs)});
        i = j;
    }
    for (std::size_t i = 0; i < q.cells.size();) {
        std::size_t j = i;
        std::map<int, double> by_tenths;
        std::vector<double> all;
        while (j < q.cells.size() && q.cells[j].codec == q.cells[i].codec &&
               q.cells[j].technique == q.cells[i].technique) {
            const int tenths = static_cast<int>(std::lround(q.cells[j].degree * 10.0));
            if (tenths >= 1) {
                by_tenths[tenths] = q.cells[j].dsc_mean;
                all.push_back(q.cells[j].dsc_mean);
            }
            ++j;
        }
        if (!all.empty()) {
            TechniqueSummary s{q.cells[i].codec, q.cells[i].technique, all.size(), 0.0, false, 0.0};
            s.dsc_i = by_tenths.size() == 10 ? dsc_average(by_tenths) : mean(all);
            q.techniques.push_back(s);
        }
        i = j;
    }
    for (auto& s : q.techniques) {
        const auto oo = std::find_if(q.techniques.begin(), q.techniques.end(), [&](const TechniqueSummary& o) {
            return o.codec == s.codec && o.technique == Technique::OO;
        });
        if (oo != q.techniques.end() && s.dsc_i < 1.0) {
            s.has_relative = true;
            s.dsc_r = s.technique == Technique::OO ? 0.0 : dsc_relative(oo->dsc_i, s.dsc_i);
        }
    }
    return q;
}

namespace {

std::string cell_key(const std::string& codec, Technique t, double degree, std::uint32_t rep, std::uint64_t seed) {
    return codec + "|" + to_string(t) + "|" + format_degree(degree) + "|" + std::to_string(rep) + "|" +
           std::to_string(seed);
}

std::map<std::string, RunRecord> read_manifest(const fs::path& path, const std::string& config_digest) {
    std::map<std::string, RunRecord> cells;
    std::ifstream in(path, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, '\t')) f.push_back(field);
        if (f.size() != 9 || f[0] != config_digest) continue;
        try {
            RunRecord r;
            r.codec = f[1];
            r.technique = parse_technique(f[2]);
            r.degree = std::stod(f[3]);
            r.repetition = static_cast<std::uint32_t>(std::stoul(f[4]));
            r.seed = std::stoull(f[5]);
            r.clustering_error = std::stoll(f[6]);
            r.dsc = std::stod(f[7]);
            r.newick = f[8];
            cells[cell_key(r.codec, r.technique, r.degree, r.repetition, r.seed)] = r;
        } catch (const std::exception&) {
            // partially written line from an interrupted run
        }
    }
    return cells;
}

void write_reports(const fs::path& out, const QualitySummary& q, std::uint64_t seed) {
    auto runs = open_out(out / "runs.csv");
    runs << "codec,technique,degree,repetition,seed,clustering_error,dsc\n";
    for (const auto& r : q.runs)
        runs << r.codec << ',' << to_string(r.technique) << ',' << format_degree(r.degree) << ',' << r.repetition
             << ',' << r.seed << ',' << r.clustering_error << ',' << fmt(r.dsc) << '\n';
    auto curves = open_out(out / "curves.csv");
    curves << "codec,technique,degree,repetitions,seed,dsc_mean,dsc_std,clustering_error_mean,clustering_error_std\n";
    for (const auto& c : q.cells)
        curves << c.codec << ',' << to_string(c.technique) << ',' << format_degree(c.degree) << ',' << c.runs << ','
               << seed << ',' << fmt(c.dsc_mean) << ',' << fmt(c.dsc_std) << ',' << fmt(c.error_mean) << ','
               << fmt(c.error_std) << '\n';
    auto summary = open_out(out / "summary.csv");
    summary << "codec,technique,degrees,seed,dsc_i,dsc_r_i\n";
    for (const auto& s : q.techniques)
        summary << s.codec << ',' << to_string(s.technique) << ',' << s.degrees << ',' << seed << ',' << fmt(s.dsc_i)
                << ',' << (s.has_relative ? fmt(s.dsc_r) : "NA") << '\n';
    for (const auto& r : q.runs) {
        auto tree = open_out(out / "trees" /
                             (sanitize_name(r.codec) + "_" + to_string(r.technique) + "_d" + format_degree(r.degree) +
                              "_r" + std::to_string(r.repetition) + ".nwk"));
        tree << r.newick << '\n';
    }
}

}  // namespace

QualitySummary run_distortion_experiment(const ExperimentConfig& cfg, std::ostream* log) {
    cfg.validate();
    const auto docs = load_dataset(cfg.dataset);
    const auto freq = load_frequency_file(cfg.freq);

    std::uint64_t h = fnv1a(dataset_digest(docs, CodecSpec::lz()));
    h = fnv1a(read_file(cfg.freq), h);
    h = fnv1a(std::to_string(cfg.tree.iterations) + "/" + std::to_string(cfg.tree.chains) + "/" +
                  std::to_string(static_cast<int>(cfg.rpa_mode)),
              h);
    const auto config_digest = hex64(h);

    std::map<std::string, RunRecord> done;
    std::ofstream manifest;
    MatrixCache cache(cfg.out.empty() ? fs::path{} : cfg.out / "matrices");
    if (!cfg.out.empty()) {
        done = read_manifest(cfg.out / "cells.tsv", config_digest);
        fs::create_directories(cfg.out);
        manifest.open(cfg.out / "cells.tsv", std::ios::binary | std::ios::app);
        if (!manifest) throw Error(ErrorKind::Io, "cannot write " + (cfg.out / "cells.tsv").string());
    }

    std::vector<RunRecord> runs;
    std::size_t reused = 0;
    for (const auto& codec : cfg.codecs)
        for (const auto t : cfg.techniques)
            for (const double d : cfg.degrees) {
                const auto words = word_set_for(freq, d);
                const std::uint32_t reps = t == Technique::OO ? 1 : cfg.repetitions;
                for (std::uint32_t r = 0; r < reps; ++r) {
                    const auto key = cell_key(codec.str(), t, d, r, cfg.seed);
                    if (const auto it = done.find(key); it != done.end()) {
                        runs.push_back(it->second);
                        ++reused;
                        continue;
                    }
                    try {
                        const DistortionPlan plan{t, d, cfg.seed, r, cfg.rpa_mode};
                        const auto m = cache.get(distort_corpus(docs, words, plan), codec);
                        const auto tree = cluster_matrix(m, cfg.tree, derive_seed(cfg.seed, fnv1a(key)));
                        const auto c = ClusterAssignment::from_matrix(m);
                        RunRecord rec{codec.str(), t, d, r, cfg.seed, clustering_error(tree, c), dsc(tree, c),
                                      tree.newick()};
                        if (manifest.is_open()) {
                            manifest << config_digest << '\t' << rec.codec << '\t' << to_string(t) << '\t'
                                     << format_degree(d) << '\t' << r << '\t' << rec.seed << '\t'
                                     << rec.clustering_error << '\t' << exact(rec.dsc) << '\t' << rec.newick << '\n';
                            manifest.flush();
                        }
                        if (log)
                            *log << codec.str() << ' ' << to_string(t) << " d=" << format_degree(d) << " r=" << r
                                 << " error=" << rec.clustering_error << " dsc=" << fmt(rec.dsc, "%.4f") << '\n';
                        runs.push_back(std::move(rec));
                    } catch (const Error& e) {
                        throw Error(e.kind(), std::string(e.what()) + " [codec " + codec.str() + ", technique " +
                                                  to_string(t) + ", degree " + format_degree(d) + ", repetition " +
                                                  std::to_string(r) + ", seed " + std::to_string(cfg.seed) + "]");
                    }
                }
            }
    auto q = summarize(std::move(runs));
    q.reused_cells = reused;
    if (!cfg.out.empty()) write_reports(cfg.out, q, cfg.seed);
    return q;
}

std::vector<OrderPoint> order_sweep_documents(const std::vector<Document>& docs, const std::vector<int>& orders,
                                              const TreeOptions& tree, std::uint64_t seed) {
    std::vector<OrderPoint> points;
    for (const int o : orders) {
        const auto m = ncd_matrix(docs, CodecSpec::ppm(o));
        const auto t = cluster_matrix(m, tree, derive_seed(seed, static_cast<std::uint64_t>(o)));
        const auto c = ClusterAssignment::from_matrix(m);
        points.push_back({o, clustering_error(t, c), dsc(t, c), false, 0.0});
    }
    return points;
}

std::vector<OrderPoint> run_order_sweep(const ExperimentConfig& cfg, std::ostream* log) {
    cfg.validate();
    const auto docs = load_dataset(cfg.dataset);
    std::vector<OrderPoint> points;
    for (const int o : cfg.orders) {
        const auto codec = CodecSpec::ppm(o);
        MatrixCache cache(cfg.out.empty() ? fs::path{} : cfg.out / "matrices");
        const auto m = cache.get(docs, codec);
        const auto t = cluster_matrix(m, cfg.tree, derive_seed(cfg.seed, static_cast<std::uint64_t>(o)));
        const auto c = ClusterAssignment::from_matrix(m);
        OrderPoint p{o, clustering_error(t, c), dsc(t, c), false, 0.0};
        if (!cfg.freq.empty()) {
            auto sub = cfg;
            sub.codecs = {codec};
            if (!cfg.out.empty()) sub.out = cfg.out / ("order_" + std::to_string(o));
            const auto q = run_distortion_experiment(sub, log);
            for (const auto& s : q.techniques)
                if (s.technique == Technique::OO) {
                    p.has_oo = true;
                    p.dsc_oo = s.dsc_i;
                }
        }
        if (log) *log << codec.str() << " error=" << p.clustering_error << " dsc=" << fmt(p.dsc, "%.4f") << '\n';
        points.push_back(p);
    }
    if (!cfg.out.empty()) {
        auto out = open_out(cfg.out / "order_sweep.csv");
        out << "codec,order,technique,degree,repetition,seed,clustering_error,dsc,dsc_oo,one_minus_dsc_oo\n";
        for (const auto& p : points)
            out << "ppm:" << p.order << ',' << p.order << ",none,0.0,0," << cfg.seed << ',' << p.clustering_error
                << ',' << fmt(p.dsc) << ',' << (p.has_oo ? fmt(p.dsc_oo) : "NA") << ','
                << (p.has_oo ? fmt(1.0 - p.dsc_oo) : "NA") << '\n';
    }
    return points;
}

std::vector<GrammarClass> grammar_classes(const GrammarExperimentConfig& cfg) {
    std::vector<GrammarClass> classes;
    for (const auto& v : cfg.values) {
        GrammarClass c;
        for (const auto& [k, val] : cfg.fixed) c.bindings[k] = Rational::parse(val);
        c.bindings[cfg.parameter] = Rational::parse(v);
        c.label = cfg.parameter + "=" + c.bindings[cfg.parameter].str();
        classes.push_back(std::move(c));
    }
    if (classes.size() < 2) throw Error(ErrorKind::Input, "the grammar experiment needs at least two parameter values");
    return classes;
}

std::vector<Document> generate_grammar_corpus(const std::string& grammar_text, const std::vector<GrammarClass>& classes,
                                              std::size_t per_class, std::size_t file_bytes, std::uint64_t seed) {
    std::vector<Document> docs;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::istringstream in(grammar_text);
        const auto g = parse_grammar(in, classes[c].bindings);
        const auto dir = sanitize_name(classes[c].label);
        for (std::size_t i = 0; i < per_class; ++i) {
            CorpusSpec spec{g, file_bytes, derive_seed(seed, c), i, classes[c].label, {}};
            spec.id = dir + "/" + dir + "_" + fmt(static_cast<double>(i), "%03.0f") + ".txt";
            docs.push_back(generate_corpus(spec));
        }
    }
    return docs;
}

GrammarExperimentResult run_grammar_experiment(const GrammarExperimentConfig& cfg, std::ostream* log) {
    const auto text = read_file(cfg.grammar);
    const auto classes = grammar_classes(cfg);
    for (const int o : cfg.orders)
        if (o < kMinPpmOrder || o > kMaxPpmOrder) throw Error(ErrorKind::Input, "PPM order out of range: " + std::to_string(o));

    GrammarExperimentResult result;
    std::vector<Distribution> dist;
    for (const auto& c : classes) {
        std::istringstream in(text);
        dist.push_back(enumerate_distribution(parse_grammar(in, c.bindings)));
        result.entropy[c.label] = entropy_bits(dist.back());
    }
    for (std::size_t q = 0; q < classes.size(); ++q)
        for (std::size_t p = 0; p < classes.size(); ++p)
            if (p != q) result.kl.push_back({classes[q].label, classes[p].label, kl_divergence(dist[q], dist[p])});

    const auto small = generate_grammar_corpus(text, classes, cfg.small_per_class, cfg.file_bytes, cfg.seed);
    std::vector<Document> large;
    if (cfg.run_large) large = generate_grammar_corpus(text, classes, cfg.large_per_class, cfg.file_bytes, cfg.seed);
    if (!cfg.out.empty()) {
        write_dataset(cfg.out / "corpus_small", small);
        if (cfg.run_large) write_dataset(cfg.out / "corpus_large", large);
    }

    for (const int o : cfg.orders) {
        const auto codec = CodecSpec::ppm(o);
        GrammarOrderResult r;
        r.order = o;
        const auto m = ncd_matrix(small, codec);
        const auto t = cluster_matrix(m, cfg.tree, derive_seed(cfg.seed, static_cast<std::uint64_t>(o)));
        const auto c = ClusterAssignment::from_matrix(m);
        r.clustering_error = clustering_error(t, c);
        r.dsc = dsc(t, c);
        r.newick = t.newick();
        if (!cfg.out.empty()) {
            auto nw = open_out(cfg.out / "trees" / ("ppm" + std::to_string(o) + ".nwk"));
            nw << r.newick << '\n';
            auto edges = open_out(cfg.out / "trees" / ("ppm" + std::to_string(o) + "_edges.csv"));
            write_edge_list(edges, t);
        }
        if (cfg.run_large) {
            const auto big = ncd_matrix(large, codec);
            const auto p = mds_project(big);
            r.has_projection = true;
            r.silhouette = silhouette_euclidean(p);
            r.spearman = spearman_fit(big, p);
            r.stress = p.stress;
            if (!cfg.out.empty())
                emit_plot(p, cfg.out / "projections" / ("ppm" + std::to_string(o)),
                          codec.str() + "  SC = " + fmt(r.silhouette, "%.2f"));
        }
        if (log)
            *log << codec.str() << " error=" << r.clustering_error << " dsc=" << fmt(r.dsc, "%.4f")
                 << (r.has_projection ? " silhouette=" + fmt(r.silhouette, "%.4f") : "") << '\n';
        result.orders.push_back(r);
    }

    if (!cfg.out.empty()) {
        auto rep = open_out(cfg.out / "grammar_report.csv");
        rep << "codec,technique,degree,repetition,seed,files,clustering_error,dsc,silhouette,spearman,stress\n";
        for (const auto& r : result.orders)
            rep << "ppm:" << r.order << ",none,0.0,0," << cfg.seed << ',' << small.size() << '/' << large.size() << ','
                << r.clustering_error << ',' << fmt(r.dsc) << ',' << (r.has_projection ? fmt(r.silhouette) : "NA")
                << ',' << (r.has_projection ? fmt(r.spearman) : "NA") << ','
                << (r.has_projection ? fmt(r.stress) : "NA") << '\n';
        auto kl = open_out(cfg.out / "kl.csv");
        kl << "q,p,kl_bits,seed\n";
        for (const auto& e : result.kl) kl << e.q << ',' << e.p << ',' << fmt(e.bits, "%.6g") << ',' << cfg.seed << '\n';
        auto ent = open_out(cfg.out / "entropy.csv");
        ent << "class,entropy_bits_per_sentence\n";
        for (const auto& [label, bits] : result.entropy) ent << label << ',' << fmt(bits) << '\n';
    }
    return result;
}

}  // namespace ncdlab
