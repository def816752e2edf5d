#include "ncdlab/projection.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>

#include "ncdlab/error.hpp"

namespace ncdlab {

Projection2D mds_project(const DistanceMatrix& m) {
    const auto n = m.size();
    if (n < 3) throw Error(ErrorKind::Input, "projection needs at least 3 documents");
    if (m.values.size() != n * n) throw Error(ErrorKind::Input, "distance matrix is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (m.at(i, j) != m.at(j, i)) throw Error(ErrorKind::Input, "distance matrix is not symmetric");
            if (!std::isfinite(m.at(i, j))) throw Error(ErrorKind::Input, "distance matrix has non-finite entries");
        }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return m.ids[a] < m.ids[b]; });

    Projection2D out;
    out.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.points[i].id = m.ids[i];
        out.points[i].label = i < m.labels.size() ? m.labels[i] : "";
    }

    const double first = m.at(order[0], order[1]);
    bool all_equal = true;
    for (std::size_t i = 0; i < n && all_equal; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && m.at(i, j) != first) {
                all_equal = false;
                break;
            }
    if (all_equal) {
        std::clog << "warning: all pairwise distances are equal; projecting every point to the origin\n";
        out.degenerate = true;
        out.stress = first == 0.0 ? 0.0 : 1.0;
        return out;
    }

    Eigen::MatrixXd b(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const double d = r == c ? 0.0 : m.at(order[r], order[c]);
            b(r, c) = d * d;
        }
    const Eigen::VectorXd row_mean = b.rowwise().mean();
    const double grand = row_mean.mean();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) b(r, c) = -0.5 * (b(r, c) - row_mean(r) - row_mean(c) + grand);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::Domain, "eigendecomposition failed");
    const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
    const Eigen::MatrixXd& vectors = eig.eigenvectors();
    const double scale = std::max(std::abs(values(n - 1)), 1.0) * 1e-12;
    for (int axis = 0; axis < 2; ++axis) {
        const auto k = static_cast<Eigen::Index>(n - 1 - axis);
        const double lambda = values(k);
        if (lambda <= scale) continue;
        Eigen::VectorXd v = vectors.col(k) * std::sqrt(lambda);
        for (std::size_t r = 0; r < n; ++r)
            if (std::abs(v(r)) > 1e-12) {
                if (v(r) < 0) v = -v;
                break;
            }
        for (std::size_t r = 0; r < n; ++r) (axis == 0 ? out.points[order[r]].x : out.points[order[r]].y) = v(r);
    }

    double residual = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = m.at(i, j);
            const double e = std::hypot(out.points[i].x - out.points[j].x, out.points[i].y - out.points[j].y);
            residual += (d - e) * (d - e);
            total += d * d;
        }
    out.stress = total > 0.0 ? std::sqrt(residual / total) : 0.0;
    return out;
}

double silhouette_euclidean(const Projection2D& p) {
    const auto n = p.points.size();
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) members[p.points[i].label].push_back(i);
    if (members.size() < 2) throw Error(ErrorKind::UndefinedDistance, "silhouette needs at least two classes");
    auto dist = [&](std::size_t i, std::size_t j) {
        return std::hypot(p.points[i].x - p.points[j].x, p.points[i].y - p.points[j].y);
    };
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& own = members[p.points[i].label];
        if (own.size() == 1) continue;
        double a = 0.0;
        for (const auto j : own) a += dist(i, j);
        a /= static_cast<double>(own.size() - 1);
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [label, group] : members) {
            if (label == p.points[i].label) continue;
            double s = 0.0;
            for (const auto j : group) s += dist(i, j);
            b = std::min(b, s / static_cast<double>(group.size()));
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = mid;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman_fit(const DistanceMatrix& m, const Projection2D& p) {
    std::vector<double> a, b;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            a.push_back(m.at(i, j));
            b.push_back(std::hypot(p.points[i].x - p.points[j].x, p.points[i].y - p.points[j].y));
        }
    const auto ra = ranks(a), rb = ranks(b);
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < ra.size(); ++k) {
        sab += (ra[k] - ma) * (rb[k] - mb);
        saa += (ra[k] - ma) * (ra[k] - ma);
        sbb += (rb[k] - mb) * (rb[k] - mb);
    }
    return saa > 0.0 && sbb > 0.0 ? sab / std::sqrt(saa * sbb) : 0.0;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (const char c : s) switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    return out;
}

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string glyph(std::size_t cls, double x, double y) {
    char buf[256];
    const char* color = kColors[cls % 8];
    switch (cls % 4) {
        case 0:
            std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"%s\"/>", x, y, color);
            break;
        case 1:
            std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"8\" height=\"8\" fill=\"%s\"/>", x - 4,
                          y - 4, color);
            break;
        case 2:
            std::snprintf(buf, sizeof buf, "<polygon points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"%s\"/>", x,
                          y - 5, x - 5, y + 4, x + 5, y + 4, color);
            break;
        default:
            std::snprintf(buf, sizeof buf, "<polygon points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"%s\"/>",
                          x, y - 5, x + 5, y, x, y + 5, x - 5, y, color);
    }
    return buf;
}

}  // namespace

void emit_plot(const Projection2D& p, const std::filesystem::path& stem, const std::string& title) {
    std::vector<std::string> classes;
    for (const auto& pt : p.points) {
        if (pt.label.empty()) throw Error(ErrorKind::Input, "point '" + pt.id + "' has an empty class label");
        if (std::find(classes.begin(), classes.end(), pt.label) == classes.end()) classes.push_back(pt.label);
    }
    std::sort(classes.begin(), classes.end());
    if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());

    auto csv_path = stem;
    csv_path += ".csv";
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw Error(ErrorKind::Io, "cannot write " + csv_path.string());
    csv << "id,label,x,y\n";
    for (const auto& pt : p.points) {
        char buf[64];
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f\n", pt.x, pt.y);
        csv << csv_field(pt.id) << ',' << csv_field(pt.label) << buf;
    }
    if (!csv) throw Error(ErrorKind::Io, "write failed for " + csv_path.string());

    const double size = 480.0, margin = 40.0;
    double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    for (std::size_t i = 0; i < p.points.size(); ++i) {
        const auto& pt = p.points[i];
        if (i == 0 || pt.x < lo_x) lo_x = pt.x;
        if (i == 0 || pt.x > hi_x) hi_x = pt.x;
        if (i == 0 || pt.y < lo_y) lo_y = pt.y;
        if (i == 0 || pt.y > hi_y) hi_y = pt.y;
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    const double k = (size - 2 * margin) / span;
    const double cx = (lo_x + hi_x) / 2, cy = (lo_y + hi_y) / 2;

    auto svg_path = stem;
    svg_path += ".svg";
    std::ofstream svg(svg_path, std::ios::binary);
    if (!svg) throw Error(ErrorKind::Io, "cannot write " + svg_path.string());
    const int legend_h = static_cast<int>(classes.size()) * 16 + 8;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + legend_h
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        svg << "<text x=\"" << margin << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(title)
            << "</text>\n";
    for (const auto& pt : p.points) {
        const auto cls = static_cast<std::size_t>(std::find(classes.begin(), classes.end(), pt.label) - classes.begin());
        svg << glyph(cls, size / 2 + (pt.x - cx) * k, size / 2 - (pt.y - cy) * k) << "<!-- " << xml_escape(pt.id)
            << " -->\n";
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const double y = size + 8 + 16.0 * static_cast<double>(c);
        svg << glyph(c, margin, y) << "<text x=\"" << margin + 12 << "\" y=\"" << y + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(classes[c]) << "</text>\n";
    }
    svg << "</svg>\n";
    if (!svg) throw Error(ErrorKind::Io, "write failed for " + svg_path.string());
}

}  // namespace ncdlab
