#include <CLI11.hpp>
#include <omp.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ncdlab/error.hpp"
#include "ncdlab/metrics.hpp"
#include "ncdlab/pipeline.hpp"
#include "ncdlab/projection.hpp"

using namespace ncdlab;

namespace {

struct Common {
    std::vector<std::string> codecs{"ppm:6"};
    std::string freq;
    std::vector<std::string> techniques{"oo", "rpa", "rprw", "rpe"};
    std::vector<double> degrees = standard_degrees();
    std::uint32_t repetitions = 12;
    std::uint64_t seed = 1;
    std::string out;
    int workers = 0;
    std::size_t iterations = 2000;
    std::size_t chains = 4;
    std::string rpa_mode = "slots";
};

ExperimentConfig make_config(const Common& c, const std::string& dataset) {
    ExperimentConfig cfg;
    cfg.dataset = dataset;
    cfg.freq = c.freq;
    cfg.codecs.clear();
    for (const auto& s : c.codecs) cfg.codecs.push_back(CodecSpec::parse(s));
    cfg.techniques.clear();
    for (const auto& t : c.techniques) cfg.techniques.push_back(parse_technique(t));
    cfg.degrees = c.degrees;
    cfg.repetitions = c.repetitions;
    cfg.seed = c.seed;
    cfg.out = c.out;
    cfg.tree = {c.iterations, c.chains};
    if (c.rpa_mode == "slots")
        cfg.rpa_mode = RpaMode::AsteriskSlots;
    else if (c.rpa_mode == "interleave")
        cfg.rpa_mode = RpaMode::Interleave;
    else
        throw Error(ErrorKind::Input, "unknown RPA mode '" + c.rpa_mode + "' (slots|interleave)");
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Input, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DistanceMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Input, "cannot read " + path);
    auto m = read_matrix_csv(in);
    for (const auto& id : m.ids) m.labels.push_back(id_prefix_label(id));
    return m;
}

std::map<std::string, Rational> parse_bindings(const std::vector<std::string>& items) {
    std::map<std::string, Rational> out;
    for (const auto& b : items) {
        const auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Input, "binding must look like name=value: " + b);
        out[b.substr(0, eq)] = Rational::parse(b.substr(eq + 1));
    }
    return out;
}

std::ostream& output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    file.open(p, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot write " + path);
    return file;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ncdlab: compression-distance study of text structure versus keywords"};
    app.set_config("--config", "", "INI/TOML file with option defaults (command-line flags win)");
    app.require_subcommand(1);
    Common c;
    app.add_option("--workers", c.workers, "worker threads (0 = all cores)");

    auto add_codec = [&](CLI::App* sub) {
        sub->add_option("--codec", c.codecs, "ppm:N | lz | bwt | ext:<command>, comma-separated")
            ->delimiter(',')
            ->allow_extra_args(false);
    };
    auto add_distortion = [&](CLI::App* sub) {
        sub->add_option("--freq", c.freq, "word frequency list (word<TAB>count)");
        sub->add_option("--technique", c.techniques, "oo|rpa|rprw|rpe")->delimiter(',');
        sub->add_option("--degrees", c.degrees, "distortion degrees, e.g. 0.1,0.5")->delimiter(',');
        sub->add_option("--repetitions", c.repetitions, "seeded repetitions per degree");
        sub->add_option("--rpa-mode", c.rpa_mode, "slots|interleave");
    };
    auto add_tree = [&](CLI::App* sub) {
        sub->add_option("--iterations", c.iterations, "refinement iterations per chain");
        sub->add_option("--chains", c.chains, "independent refinement chains");
    };
    auto add_seed_out = [&](CLI::App* sub, bool out_required) {
        sub->add_option("--seed", c.seed, "base seed");
        auto* o = sub->add_option("--out", c.out, "output path");
        if (out_required) o->required();
    };

    std::string dataset;
    auto* distort = app.add_subcommand("distort", "write distorted copies of a dataset");
    distort->add_option("--dataset", dataset, "directory with one subdirectory per class")->required();
    add_distortion(distort);
    add_seed_out(distort, true);

    std::vector<std::string> files;
    auto* ncd_cmd = app.add_subcommand("ncd", "NCD matrix of a dataset or list of files");
    ncd_cmd->add_option("--dataset", dataset, "directory with one subdirectory per class");
    ncd_cmd->add_option("files", files, "documents (id = file name)");
    std::string ncd_codec = "ppm:6";
    ncd_cmd->add_option("--codec", ncd_codec, "ppm:N | lz | bwt | ext:<command>");
    ncd_cmd->add_option("--out", c.out, "matrix CSV (default stdout)");

    std::string matrix_path;
    std::string edges_path;
    auto* cluster = app.add_subcommand("cluster", "build a dendrogram from a matrix CSV");
    cluster->add_option("--matrix", matrix_path, "matrix CSV")->required();
    cluster->add_option("--edges", edges_path, "also write an edge list CSV");
    add_tree(cluster);
    add_seed_out(cluster, false);

    std::string tree_path;
    std::string labels_path;
    std::vector<double> relative;
    auto* metrics = app.add_subcommand("metrics", "clustering error and DSC of a tree, or relative DSC");
    metrics->add_option("--tree", tree_path, "Newick file");
    metrics->add_option("--labels", labels_path, "CSV id,label (default: id prefix)");
    metrics->add_option("--relative", relative, "DSC_OO,DSC_i")->delimiter(',')->expected(2);

    std::string grammar_path;
    std::vector<std::string> bindings;
    std::size_t file_count = 1;
    std::size_t file_bytes = 16000;
    bool distribution = false;
    auto* ggen = app.add_subcommand("grammar-gen", "sample corpus files from a probabilistic grammar");
    ggen->add_option("--grammar", grammar_path, "grammar file")->required();
    ggen->add_option("--bind", bindings, "parameter binding, e.g. v=1/4")->delimiter(',');
    ggen->add_option("--files", file_count, "number of files");
    ggen->add_option("--bytes", file_bytes, "target bytes per file");
    ggen->add_flag("--distribution", distribution, "print the exact sentence distribution instead");
    add_seed_out(ggen, false);

    auto* project = app.add_subcommand("project", "2D projection of a matrix CSV with silhouette");
    project->add_option("--matrix", matrix_path, "matrix CSV")->required();
    project->add_option("--out", c.out, "output stem for .csv and .svg")->required();

    auto* experiment = app.add_subcommand("experiment", "run a full study");
    experiment->require_subcommand(1);
    auto* exp_dist = experiment->add_subcommand("distortion", "distortion sweep with DSC summaries");
    exp_dist->add_option("--dataset", dataset, "directory with one subdirectory per class")->required();
    add_codec(exp_dist);
    add_distortion(exp_dist);
    add_tree(exp_dist);
    add_seed_out(exp_dist, true);

    std::vector<int> orders{2, 3, 4, 5, 6};
    auto* exp_order = experiment->add_subcommand("order-sweep", "clustering quality per PPM order");
    exp_order->add_option("--dataset", dataset, "directory with one subdirectory per class")->required();
    exp_order->add_option("--orders", orders, "PPM orders")->delimiter(',');
    add_distortion(exp_order);
    add_tree(exp_order);
    add_seed_out(exp_order, true);

    GrammarExperimentConfig gcfg;
    std::string gparam = "v";
    std::vector<std::string> gvalues{"1/4", "1/5", "1/6"};
    std::vector<std::string> gfixed{"w=1/2"};
    std::vector<int> gorders{2, 4, 6};
    bool no_large = false;
    auto* exp_gram = experiment->add_subcommand("grammar", "grammar-context sweep with trees and projections");
    exp_gram->add_option("--grammar", grammar_path, "grammar file")->required();
    exp_gram->add_option("--parameter", gparam, "parameter that defines the classes");
    exp_gram->add_option("--values", gvalues, "class values of the parameter")->delimiter(',');
    exp_gram->add_option("--fix", gfixed, "fixed bindings, e.g. w=1/2")->delimiter(',');
    exp_gram->add_option("--orders", gorders, "PPM orders")->delimiter(',');
    exp_gram->add_option("--small", gcfg.small_per_class, "files per class for dendrograms");
    exp_gram->add_option("--large", gcfg.large_per_class, "files per class for projections");
    exp_gram->add_option("--bytes", gcfg.file_bytes, "bytes per file");
    exp_gram->add_flag("--no-projection", no_large, "skip the large corpus");
    add_tree(exp_gram);
    add_seed_out(exp_gram, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c.workers < 0) throw Error(ErrorKind::Input, "--workers must be non-negative");
        if (c.workers > 0) omp_set_num_threads(c.workers);

        if (*distort) {
            const auto outs = run_distort(make_config(c, dataset));
            std::cerr << outs.size() << " distorted corpora written under " << c.out << '\n';
        } else if (*ncd_cmd) {
            std::vector<Document> docs;
            if (!dataset.empty()) docs = load_dataset(dataset);
            for (const auto& f : files) {
                const auto name = std::filesystem::path(f).filename().string();
                docs.push_back({name, id_prefix_label(name), slurp(f)});
            }
            if (docs.empty()) throw Error(ErrorKind::Input, "give --dataset or document files");
            const auto m = ncd_matrix(docs, CodecSpec::parse(ncd_codec));
            std::ofstream file;
            write_matrix_csv(output(file, c.out), m);
        } else if (*cluster) {
            const auto m = read_matrix_file(matrix_path);
            const auto t = cluster_matrix(m, {c.iterations, c.chains}, c.seed);
            std::ofstream file;
            output(file, c.out) << t.newick() << '\n';
            if (!edges_path.empty()) {
                std::ofstream edges;
                write_edge_list(output(edges, edges_path), t);
            }
        } else if (*metrics) {
            if (!relative.empty()) {
                std::cout << "dsc_relative," << dsc_relative(relative[0], relative[1]) << '\n';
            } else {
                if (tree_path.empty()) throw Error(ErrorKind::Input, "metrics needs --tree or --relative");
                std::map<std::string, std::string> labels;
                if (!labels_path.empty()) {
                    std::istringstream in(slurp(labels_path));
                    std::string line;
                    while (std::getline(in, line)) {
                        const auto comma = line.find(',');
                        if (comma == std::string::npos) continue;
                        labels[line.substr(0, comma)] = line.substr(comma + 1);
                    }
                }
                const auto t = parse_newick(slurp(tree_path), [&](const std::string& id) {
                    const auto it = labels.find(id);
                    return it != labels.end() ? it->second : id_prefix_label(id);
                });
                const auto assignment = ClusterAssignment::from_tree(t);
                const auto detail = dsc_detail(t, assignment);
                std::cout << "leaves," << t.leaf_count() << "\nclustering_error," << clustering_error(t, assignment)
                          << "\ndsc," << detail.value << '\n';
                for (const auto& s : detail.singleton_leaves) std::cerr << "warning: singleton class at leaf " << s << '\n';
            }
        } else if (*ggen) {
            const auto text = slurp(grammar_path);
            std::istringstream in(text);
            const auto g = parse_grammar(in, parse_bindings(bindings));
            if (distribution) {
                std::ofstream file;
                write_distribution(output(file, c.out), enumerate_distribution(g));
            } else {
                const auto label = binding_label(g.parameters);
                const auto dir = sanitize_name(label.empty() ? "corpus" : label);
                std::vector<Document> docs;
                for (std::size_t i = 0; i < file_count; ++i) {
                    CorpusSpec spec{g, file_bytes, c.seed, i, label, {}};
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "_%03zu.txt", i);
                    spec.id = dir + "/" + dir + buf;
                    docs.push_back(generate_corpus(spec));
                }
                if (c.out.empty()) {
                    for (const auto& d : docs) std::cout << d.body << '\n';
                } else {
                    write_dataset(c.out, docs);
                }
            }
        } else if (*project) {
            const auto m = read_matrix_file(matrix_path);
            const auto p = mds_project(m);
            emit_plot(p, c.out);
            std::cout << "stress," << p.stress << "\nspearman," << spearman_fit(m, p) << '\n';
            std::set<std::string> classes;
            for (const auto& pt : p.points) classes.insert(pt.label);
            if (classes.size() >= 2) std::cout << "silhouette," << silhouette_euclidean(p) << '\n';
        } else if (*exp_dist) {
            const auto q = run_distortion_experiment(make_config(c, dataset), &std::cerr);
            std::cerr << q.runs.size() << " runs (" << q.reused_cells << " reused); reports in " << c.out << '\n';
            for (const auto& s : q.techniques)
                std::cout << s.codec << ',' << to_string(s.technique) << ",dsc_i=" << s.dsc_i
                          << (s.has_relative ? ",dsc_r=" + std::to_string(s.dsc_r) : "") << '\n';
        } else if (*exp_order) {
            auto cfg = make_config(c, dataset);
            cfg.orders = orders;
            if (c.freq.empty()) cfg.techniques = {Technique::OO};
            for (const auto& p : run_order_sweep(cfg, &std::cerr))
                std::cout << "ppm:" << p.order << ",clustering_error=" << p.clustering_error << ",dsc=" << p.dsc
                          << (p.has_oo ? ",dsc_oo=" + std::to_string(p.dsc_oo) : "") << '\n';
        } else if (*exp_gram) {
            gcfg.grammar = grammar_path;
            gcfg.parameter = gparam;
            gcfg.values = gvalues;
            gcfg.fixed.clear();
            for (const auto& [k, v] : parse_bindings(gfixed)) gcfg.fixed[k] = v.str();
            gcfg.orders = gorders;
            gcfg.seed = c.seed;
            gcfg.out = c.out;
            gcfg.tree = {c.iterations, c.chains};
            gcfg.run_large = !no_large;
            const auto r = run_grammar_experiment(gcfg, &std::cerr);
            for (const auto& o : r.orders)
                std::cout << "ppm:" << o.order << ",clustering_error=" << o.clustering_error << ",dsc=" << o.dsc
                          << (o.has_projection ? ",silhouette=" + std::to_string(o.silhouette) : "") << '\n';
            for (const auto& k : r.kl) std::cout << "kl(" << k.q << "||" << k.p << ")=" << k.bits << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error (io): " << e.what() << '\n';
        return 1;
    }
    return 0;
}
