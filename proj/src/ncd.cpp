#include "ncdlab/ncd.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include "ncdlab/error.hpp"
#include "ncdlab/ppm.hpp"

namespace ncdlab {
namespace {

double quotient(double cx, double cy, double cxy, double cyx) {
    const double den = std::max(cx, cy);
    if (den <= 0.0) throw Error(ErrorKind::UndefinedDistance, "NCD undefined: both inputs are empty");
    return std::max(cxy - cx, cyx - cy) / den;
}

std::string concat(const std::string& a, const std::string& b) {
    std::string s;
    s.reserve(a.size() + b.size());
    s.append(a).append(b);
    return s;
}

void check_documents(const std::vector<Document>& docs) {
    if (docs.size() < 2) throw Error(ErrorKind::Input, "a distance matrix needs at least 2 documents");
    std::set<std::string> seen;
    for (const auto& d : docs)
        if (!seen.insert(d.id).second) throw Error(ErrorKind::Input, "duplicate document id '" + d.id + "'");
}

DistanceMatrix skeleton(const std::vector<Document>& docs, const CodecSpec& codec) {
    DistanceMatrix m;
    m.codec = codec;
    for (const auto& d : docs) {
        m.ids.push_back(d.id);
        m.labels.push_back(d.class_label);
    }
    m.values.assign(docs.size() * docs.size(), 0.0);
    return m;
}

void warn_range(const DistanceMatrix& m) {
    const auto r = range_check(m);
    if (r.above_one > 0 || r.above_epsilon > 0)
        std::clog << "warning: " << r.above_one + r.above_epsilon << " NCD values exceed 1 (max "
                  << r.max << ", codec " << m.codec.str() << ")\n";
}

}  // namespace

std::size_t DistanceMatrix::index_of(const std::string& id) const {
    const auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw Error(ErrorKind::Input, "unknown document id '" + id + "'");
    return static_cast<std::size_t>(it - ids.begin());
}

double ncd(Bytes x, Bytes y, const CodecSpec& codec) {
    if (x.empty() && y.empty()) throw Error(ErrorKind::UndefinedDistance, "NCD undefined: both inputs are empty");
    std::vector<std::uint8_t> xy(x.begin(), x.end());
    xy.insert(xy.end(), y.begin(), y.end());
    std::vector<std::uint8_t> yx(y.begin(), y.end());
    yx.insert(yx.end(), x.begin(), x.end());
    return quotient(compressed_size(x, codec).bits, compressed_size(y, codec).bits,
                    compressed_size(xy, codec).bits, compressed_size(yx, codec).bits);
}

DistanceMatrix ncd_matrix(const std::vector<Document>& docs, const CodecSpec& codec) {
    check_documents(docs);
    codec.validate();
    const auto n = static_cast<std::int64_t>(docs.size());
    std::vector<double> single(docs.size());
    std::vector<double> joint(docs.size() * docs.size());  // joint[i*n+j] = C(x_i x_j)

    // Parallel regions rethrow the first failure after the loop.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            const auto& xi = docs[i].body;
            if (codec.family == CodecFamily::Ppm) {
                PpmModel base(codec.order);
                base.feed(as_bytes(xi));
                single[i] = xi.empty() ? 0.0 : base.bits();
                for (std::int64_t j = 0; j < n; ++j) {
                    PpmModel resumed = base;
                    resumed.feed(as_bytes(docs[j].body));
                    joint[i * n + j] = resumed.bits();
                }
            } else {
                single[i] = compressed_size(as_bytes(xi), codec).bits;
                for (std::int64_t j = 0; j < n; ++j)
                    joint[i * n + j] = compressed_size(as_bytes(concat(xi, docs[j].body)), codec).bits;
            }
        } catch (...) {
#pragma omp critical(ncd_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    auto m = skeleton(docs, codec);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = i; j < n; ++j) {
            const double v = quotient(single[i], single[j], joint[i * n + j], joint[j * n + i]);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    warn_range(m);
    return m;
}

DistanceMatrix ncd_matrix_reference(const std::vector<Document>& docs, const CodecSpec& codec) {
    check_documents(docs);
    auto m = skeleton(docs, codec);
    for (std::size_t i = 0; i < docs.size(); ++i)
        for (std::size_t j = i; j < docs.size(); ++j) {
            const double v = ncd(as_bytes(docs[i].body), as_bytes(docs[j].body), codec);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    return m;
}

RangeReport range_check(const DistanceMatrix& m) {
    RangeReport r;
    if (m.values.empty()) return r;
    r.min = r.max = m.values.front();
    const auto n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double v = m.at(i, j);
            r.min = std::min(r.min, v);
            r.max = std::max(r.max, v);
            if (v > 1.0 + kNcdEpsilon)
                ++r.above_epsilon;
            else if (v > 1.0)
                ++r.above_one;
            if (v != m.at(j, i)) r.symmetric = false;
        }
    return r;
}

void write_matrix_csv(std::ostream& out, const DistanceMatrix& m, bool exact) {
    out << "id";
    for (const auto& id : m.ids) out << ',' << id;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << m.ids[i];
        for (std::size_t j = 0; j < m.size(); ++j) {
            std::snprintf(buf, sizeof buf, exact ? ",%.17g" : ",%.6f", m.at(i, j));
            out << buf;
        }
        out << '\n';
    }
}

DistanceMatrix read_matrix_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        return cells;
    };
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "empty distance matrix file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split(line);
    if (header.empty() || header.front() != "id")
        throw Error(ErrorKind::Parse, "distance matrix header must start with 'id'");
    DistanceMatrix m;
    m.ids.assign(header.begin() + 1, header.end());
    const auto n = m.ids.size();
    m.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "distance matrix has fewer rows than ids");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto cells = split(line);
        if (cells.size() != n + 1 || cells[0] != m.ids[i])
            throw Error(ErrorKind::Parse, "malformed distance matrix row " + std::to_string(i + 2));
        for (std::size_t j = 0; j < n; ++j) {
            const auto& c = cells[j + 1];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc() || ptr != c.data() + c.size())
                throw Error(ErrorKind::Parse, "bad value '" + c + "' in distance matrix row " + std::to_string(i + 2));
            m.at(i, j) = v;
        }
    }
    return m;
}

}  // namespace ncdlab
