#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncdlab/error.hpp"
#include "ncdlab/grammar.hpp"
#include "ncdlab/ncd.hpp"
#include "ncdlab/projection.hpp"
#include "ncdlab/rng.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ncdlab;
namespace fs = std::filesystem;
using oracles::Pt;
using oracles::procrustes_residual;

namespace {

DistanceMatrix euclidean_matrix(const std::vector<Pt>& pts, const std::vector<std::string>& labels) {
    DistanceMatrix m;
    const auto n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        m.ids.push_back("p" + std::to_string(i));
        m.labels.push_back(labels.empty() ? "c" : labels[i]);
    }
    m.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
    return m;
}

std::vector<Pt> coords(const Projection2D& p) {
    std::vector<Pt> out;
    for (const auto& q : p.points) out.push_back({q.x, q.y});
    return out;
}

Projection2D labelled_points(const std::vector<Pt>& pts, const std::vector<std::string>& labels) {
    Projection2D p;
    for (std::size_t i = 0; i < pts.size(); ++i) p.points.push_back({"p" + std::to_string(i), labels[i], pts[i].x, pts[i].y});
    return p;
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("ncdlab_projection_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("planar configurations are recovered") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Pt> pts;
        for (int i = 0; i < 5; ++i) pts.push_back({rng.unit() * 10 - 5, rng.unit() * 10 - 5});
        const auto p = mds_project(euclidean_matrix(pts, {}));
        CHECK(procrustes_residual(coords(p), pts) < 1e-6);
        CHECK(p.stress < 1e-6);
        CHECK_FALSE(p.degenerate);
    }
}

TEST_CASE("collinear points keep their gaps") {
    DistanceMatrix m;
    m.ids = {"a", "b", "c"};
    m.labels = {"x", "x", "y"};
    m.values = {0, 1, 2, 1, 0, 1, 2, 1, 0};
    const auto p = mds_project(m);
    auto d = [&](int i, int j) { return std::hypot(p.points[i].x - p.points[j].x, p.points[i].y - p.points[j].y); };
    CHECK(d(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d(1, 2) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d(0, 2) == doctest::Approx(2.0).epsilon(1e-6));
    for (const auto& q : p.points) CHECK(std::abs(q.y) < 1e-6);
}

TEST_CASE("row permutation gives the same points") {
    Rng rng(2);
    std::vector<Pt> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({rng.normal(), rng.normal() * 3});
    const auto m = euclidean_matrix(pts, {});
    const std::vector<std::size_t> order{3, 7, 0, 5, 1, 6, 2, 4};
    DistanceMatrix r;
    for (auto i : order) {
        r.ids.push_back(m.ids[i]);
        r.labels.push_back(m.labels[i]);
    }
    r.values.assign(64, 0.0);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) r.at(i, j) = m.at(order[i], order[j]);
    const auto a = mds_project(m);
    const auto b = mds_project(r);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(b.points[i].id == m.ids[order[i]]);
        CHECK(b.points[i].x == a.points[order[i]].x);
        CHECK(b.points[i].y == a.points[order[i]].y);
    }
}

TEST_CASE("all-equal matrix is degenerate") {
    DistanceMatrix m;
    m.ids = {"a", "b", "c", "d"};
    m.labels = {"x", "x", "y", "y"};
    m.values.assign(16, 0.0);
    const auto p = mds_project(m);
    CHECK(p.degenerate);
    for (const auto& q : p.points) CHECK((q.x == 0.0 && q.y == 0.0));
    CHECK(silhouette_euclidean(p) == 0.0);
}

TEST_CASE("silhouette limit cases") {
    Rng rng(6);
    std::vector<Pt> pts;
    std::vector<std::string> labels;
    for (int i = 0; i < 20; ++i) {
        const double off = i < 10 ? 0.0 : 100.0;
        pts.push_back({off + 0.01 * rng.normal(), 0.01 * rng.normal()});
        labels.push_back(i < 10 ? "a" : "b");
    }
    CHECK(silhouette_euclidean(labelled_points(pts, labels)) > 0.99);
    CHECK(silhouette_euclidean(labelled_points(std::vector<Pt>(6, {1.0, 2.0}), {"a", "a", "a", "b", "b", "b"})) == 0.0);
    CHECK_THROWS_AS(silhouette_euclidean(labelled_points(std::vector<Pt>(3, {0, 0}), {"a", "a", "a"})), Error);
}

TEST_CASE("random labels on one blob give a silhouette near zero") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        std::vector<Pt> pts;
        std::vector<std::string> labels;
        for (int i = 0; i < 60; ++i) {
            pts.push_back({rng.normal(), rng.normal()});
            labels.push_back(std::string(1, static_cast<char>('a' + rng.below(3))));
        }
        const double s = silhouette_euclidean(labelled_points(pts, labels));
        CHECK(std::abs(s) < 0.15);
        CHECK(s >= -1.0);
    }
}

TEST_CASE("plot files") {
    const auto dir = scratch_dir("emit");
    const auto p = labelled_points({{0, 0}, {1, 2}, {3, 1}}, {"a", "b", "b"});
    emit_plot(p, dir / "one", "three points");
    const auto csv = testing::read_text((dir / "one.csv").string());
    CHECK(csv == "id,label,x,y\np0,a,0.000000,0.000000\np1,b,1.000000,2.000000\np2,b,3.000000,1.000000\n");
    const auto svg = testing::read_text((dir / "one.svg").string());
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("three points") != std::string::npos);
    emit_plot(p, dir / "two", "three points");
    CHECK(testing::read_text((dir / "two.svg").string()) == svg);
    CHECK(testing::read_text((dir / "two.csv").string()) == csv);
    auto bad = p;
    bad.points[1].label = "";
    CHECK_THROWS_AS(emit_plot(bad, dir / "bad"), Error);
    fs::remove_all(dir);
}

TEST_CASE("projection of grammar corpora preserves distance ranks") {
    const auto text = testing::read_text(testing::data_path("sentence.grammar"));
    std::vector<Document> docs;
    std::uint64_t file = 0;
    for (const char* v : {"1/4", "1/5", "1/6"}) {
        std::istringstream src(text);
        const auto g = parse_grammar(src, {{"v", Rational::parse(v)}, {"w", Rational(1, 2)}});
        for (int i = 0; i < 4; ++i) {
            const std::string label = std::string("v=") + v;
            docs.push_back(generate_corpus({g, 16000, 3, file++, label, label + "#" + std::to_string(i)}));
        }
    }
    const auto m = ncd_matrix(docs, CodecSpec::ppm(4));
    const auto p = mds_project(m);
    CHECK(p.points.size() == docs.size());
    const double rho = spearman_fit(m, p);
    MESSAGE("spearman " << rho << ", silhouette " << silhouette_euclidean(p));
    CHECK(rho > 0.5);
    const double sc = silhouette_euclidean(p);
    CHECK(sc >= -1.0);
    CHECK(sc <= 1.0);
}
