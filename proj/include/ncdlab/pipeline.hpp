#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ncdlab/distortion.hpp"
#include "ncdlab/grammar.hpp"
#include "ncdlab/metrics.hpp"
#include "ncdlab/ncd.hpp"
#include "ncdlab/tree.hpp"

namespace ncdlab {

namespace fs = std::filesystem;

// One directory per class, one file per document. Ids are "<class>/<file>".
std::vector<Document> load_dataset(const fs::path& dir);
void write_dataset(const fs::path& dir, const std::vector<Document>& docs);

// Characters outside [A-Za-z0-9._=-] become '_'.
std::string sanitize_name(const std::string& s);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
std::string dataset_digest(const std::vector<Document>& docs, const CodecSpec& codec);

// Distance matrices persisted under `dir` by content digest. An empty dir
// disables persistence.
class MatrixCache {
public:
    explicit MatrixCache(fs::path dir = {}) : dir_(std::move(dir)) {}
    DistanceMatrix get(const std::vector<Document>& docs, const CodecSpec& codec);
    std::size_t hits() const noexcept { return hits_; }
    std::size_t misses() const noexcept { return misses_; }

private:
    fs::path dir_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

struct TreeOptions {
    std::size_t iterations = 2000;
    std::size_t chains = 4;
};

// Average linkage followed by seeded refinement chains.
UnrootedBinaryTree cluster_matrix(const DistanceMatrix& m, const TreeOptions& opts, std::uint64_t seed);

struct ExperimentConfig {
    fs::path dataset;
    fs::path freq;
    std::vector<CodecSpec> codecs{CodecSpec::ppm(kDefaultPpmOrder)};
    std::vector<Technique> techniques{Technique::OO, Technique::RPA, Technique::RPRW, Technique::RPE};
    std::vector<double> degrees = standard_degrees();
    std::uint32_t repetitions = 12;
    std::uint64_t seed = 1;
    fs::path out;
    TreeOptions tree;
    RpaMode rpa_mode = RpaMode::AsteriskSlots;
    std::vector<int> orders{2, 3, 4, 5, 6};

    void validate() const;
};

std::string format_degree(double d);  // "0.1"

// Masks and permutes every document for one plan. Each document gets its own
// stream: the plan seed is mixed with a digest of the document id.
std::vector<Document> distort_corpus(const std::vector<Document>& docs, const WordSet& words,
                                     const DistortionPlan& plan);
WordSet word_set_for(const FrequencyList& freq, double degree);  // degree 0: nothing masked
FrequencyList load_frequency_file(const fs::path& path);

struct DistortOutput {
    fs::path dir;
    DistortionPlan plan;
};
// Writes <out>/<technique>/d<degree>/r<rep>/<class>/<file> plus manifest.tsv.
std::vector<DistortOutput> run_distort(const ExperimentConfig& cfg);

struct RunRecord {
    std::string codec;
    Technique technique = Technique::OO;
    double degree = 0.0;
    std::uint32_t repetition = 0;
    std::uint64_t seed = 0;
    long long clustering_error = 0;
    double dsc = 0.0;
    std::string newick;
};

struct CellSummary {
    std::string codec;
    Technique technique = Technique::OO;
    double degree = 0.0;
    std::size_t runs = 0;
    double dsc_mean = 0.0;
    double dsc_std = 0.0;
    double error_mean = 0.0;
    double error_std = 0.0;
};

struct TechniqueSummary {
    std::string codec;
    Technique technique = Technique::OO;
    std::size_t degrees = 0;
    double dsc_i = 0.0;
    bool has_relative = false;
    double dsc_r = 0.0;
};

struct QualitySummary {
    std::vector<RunRecord> runs;
    std::vector<CellSummary> cells;
    std::vector<TechniqueSummary> techniques;
    std::size_t reused_cells = 0;
};

// Every (codec, technique, degree, repetition) cell: distort, NCD matrix, tree,
// clustering error and DSC. OO is deterministic and runs repetition 0 only.
// With cfg.out set, writes runs.csv, curves.csv, summary.csv, trees/ and a
// cells.tsv manifest; cells already in a matching manifest are reused.
QualitySummary run_distortion_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);
QualitySummary summarize(std::vector<RunRecord> runs);

struct OrderPoint {
    int order = 0;
    long long clustering_error = 0;  // undistorted
    double dsc = 0.0;                // undistorted
    bool has_oo = false;
    double dsc_oo = 0.0;             // mean OO DSC over the degrees
};

// One point per PPM order. Without a frequency list only the undistorted
// corpus is clustered.
std::vector<OrderPoint> run_order_sweep(const ExperimentConfig& cfg, std::ostream* log = nullptr);
std::vector<OrderPoint> order_sweep_documents(const std::vector<Document>& docs, const std::vector<int>& orders,
                                              const TreeOptions& tree, std::uint64_t seed);

struct GrammarClass {
    std::string label;  // e.g. "v=1/4"
    std::map<std::string, Rational> bindings;
};

struct GrammarExperimentConfig {
    fs::path grammar;
    std::string parameter = "v";
    std::vector<std::string> values{"1/4", "1/5", "1/6"};
    std::map<std::string, std::string> fixed{{"w", "1/2"}};
    std::size_t small_per_class = 4;
    std::size_t large_per_class = 30;
    std::size_t file_bytes = 16000;
    std::vector<int> orders{2, 4, 6};
    std::uint64_t seed = 1;
    fs::path out;
    TreeOptions tree;
    bool run_large = true;
};

std::vector<GrammarClass> grammar_classes(const GrammarExperimentConfig& cfg);

// Class c draws from derive_seed(seed, c); file i of a class uses file index i.
std::vector<Document> generate_grammar_corpus(const std::string& grammar_text, const std::vector<GrammarClass>& classes,
                                              std::size_t per_class, std::size_t file_bytes, std::uint64_t seed);

struct GrammarOrderResult {
    int order = 0;
    long long clustering_error = 0;
    double dsc = 0.0;
    std::string newick;
    bool has_projection = false;
    double silhouette = 0.0;
    double spearman = 0.0;
    double stress = 0.0;
};

struct KlEntry {
    std::string q;
    std::string p;
    double bits = 0.0;
};

struct GrammarExperimentResult {
    std::vector<GrammarOrderResult> orders;
    std::vector<KlEntry> kl;
    std::map<std::string, double> entropy;  // per class, bits per sentence
};

GrammarExperimentResult run_grammar_experiment(const GrammarExperimentConfig& cfg, std::ostream* log = nullptr);

}  // namespace ncdlab
