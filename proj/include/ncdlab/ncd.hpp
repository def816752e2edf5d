#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ncdlab/codec.hpp"

namespace ncdlab {

struct Document {
    std::string id;
    std::string class_label;  // ground-truth cluster
    std::string body;
};

// Self-distances above this bound signal a poor compressor for NCD.
inline constexpr double kNcdEpsilon = 0.1;

struct DistanceMatrix {
    std::vector<std::string> ids;
    std::vector<std::string> labels;  // optional; parallel to ids when known
    std::vector<double> values;       // row-major n x n
    CodecSpec codec;

    std::size_t size() const noexcept { return ids.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * ids.size() + j]; }

    // Index of `id`; throws ErrorKind::Input if absent.
    std::size_t index_of(const std::string& id) const;
};

// max{C(xy) - C(x), C(yx) - C(y)} / max{C(x), C(y)} with all four sizes taken
// from `codec` (CodeLength::bits). Throws ErrorKind::UndefinedDistance when
// both inputs are empty.
double ncd(Bytes x, Bytes y, const CodecSpec& codec);

// Pairwise matrix including the diagonal. Rows are distributed over OpenMP
// threads; for PPM the model trained on each row document is snapshotted and
// resumed for every column, so each C(x) is computed once. The result is
// bit-identical to ncd_matrix_reference for every thread count.
DistanceMatrix ncd_matrix(const std::vector<Document>& docs, const CodecSpec& codec);

// Serial reference: every entry recomputed through ncd().
DistanceMatrix ncd_matrix_reference(const std::vector<Document>& docs, const CodecSpec& codec);

struct RangeReport {
    double min = 0.0;
    double max = 0.0;
    std::size_t above_one = 0;      // values in (1, 1 + eps]
    std::size_t above_epsilon = 0;  // values > 1 + eps
    bool symmetric = true;
};
RangeReport range_check(const DistanceMatrix& m);

// CSV: header "id,<ids...>", then one row per id with 6 fractional digits,
// or 17 significant digits when `exact` so values read back bit-identical.
void write_matrix_csv(std::ostream& out, const DistanceMatrix& m, bool exact = false);
DistanceMatrix read_matrix_csv(std::istream& in);

}  // namespace ncdlab
