#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ncdlab/error.hpp"
#include "ncdlab/metrics.hpp"
#include "ncdlab/rng.hpp"
#include "ncdlab/tree.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ncdlab;
using namespace oracles;

namespace {

// Silhouette straight from the definition: a(i) over the other members of
// the class, b(i) over every leaf outside it.
double dsc_oracle(int n, const std::vector<int>& d, const std::vector<std::string>& labels) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double a = 0, b = 0;
        int na = 0, nb = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (labels[j] == labels[i]) {
                a += d[i * n + j];
                ++na;
            } else {
                b += d[i * n + j];
                ++nb;
            }
        }
        if (na == 0) continue;
        a /= na;
        b /= nb;
        total += (b - a) / std::max(a, b);
    }
    return total / n;
}

UnrootedBinaryTree fixture_tree(const std::string& name) {
    return parse_newick(testing::read_text(testing::data_path(name)), id_prefix_label);
}

UnrootedBinaryTree labelled(int n, const Edges& e, const std::vector<std::string>& labels) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back(labels[i] + "." + std::to_string(i));
    return {ids, labels, e};
}

}  // namespace

TEST_CASE("errorless baseline matches exhaustive enumeration") {
    CHECK(class_baseline(1) == 0);
    CHECK(class_baseline(2) == 1);
    CHECK(class_baseline(3) == 5);
    CHECK(class_baseline(4) == 13);
    for (int k = 1; k <= 7; ++k) CHECK(class_baseline(static_cast<std::size_t>(k)) == oracles::baseline(k));
    CHECK(class_baseline(6) == 44);
    CHECK(errorless_baseline({2, 3, 1, 4}) == 1 + 5 + 0 + 13);
    CHECK_THROWS_AS(errorless_baseline({2, 0}), Error);
}

TEST_CASE("baseline grows with class size") {
    for (std::size_t k = 2; k < 40; ++k) CHECK(class_baseline(k + 1) > class_baseline(k));
}

TEST_CASE("clustering error on the figure fixtures") {
    const auto a = fixture_tree("mixed_tree.nwk");
    const auto b = fixture_tree("clean_tree.nwk");
    const auto ca = ClusterAssignment::from_tree(a);
    CHECK(within_class_distance(a, ca) == 23);
    CHECK(errorless_baseline({2, 3, 2, 2, 3, 2}) == 14);
    CHECK(clustering_error(a, ca) == 9);
    CHECK(clustering_error(b, ClusterAssignment::from_tree(b)) == 0);
}

TEST_CASE("DSC on the figure fixtures agrees with the definition") {
    for (const char* name : {"mixed_tree.nwk", "clean_tree.nwk"}) {
        const auto t = fixture_tree(name);
        const int n = static_cast<int>(t.leaf_count());
        const double v = dsc(t, ClusterAssignment::from_tree(t));
        MESSAGE(std::string(name) << " DSC " << v);
        CHECK(v == doctest::Approx(dsc_oracle(n, path_counts(n, t.edges()), t.labels())).epsilon(1e-12));
    }
}

TEST_CASE("all-cherry classes have zero error and DSC 0.5 for two cherries") {
    const auto t = parse_newick("((a.1,a.2),(b.1,b.2));", id_prefix_label);
    const auto c = ClusterAssignment::from_tree(t);
    CHECK(clustering_error(t, c) == 0);
    CHECK(dsc(t, c) == doctest::Approx(0.5));
    const auto big = parse_newick("(((a.1,a.2),(b.1,b.2)),((c.1,c.2),(d.1,d.2)),(e.1,e.2));", id_prefix_label);
    CHECK(clustering_error(big, ClusterAssignment::from_tree(big)) == 0);
}

TEST_CASE("singletons and single classes") {
    const auto t = parse_newick("((a.1,a.2),(b.1,c.1));", id_prefix_label);
    const auto d = dsc_detail(t, ClusterAssignment::from_tree(t));
    CHECK(d.singleton_leaves == std::vector<std::string>{"b.1", "c.1"});
    CHECK(d.silhouette[t.leaf_of("b.1")] == 0.0);
    CHECK(d.value == doctest::Approx((0.5 + 0.5) / 4));
    const auto one = parse_newick("((a.1,a.2),(a.3,a.4));", id_prefix_label);
    try {
        dsc(one, ClusterAssignment::from_tree(one));
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UndefinedDistance);
    }
    ClusterAssignment missing;
    missing.label_of = {{"a.1", "a"}};
    CHECK_THROWS_AS(clustering_error(t, missing), Error);
}

TEST_CASE("DSC averages and relatives") {
    std::map<int, double> same, ramp;
    for (int d = 1; d <= 10; ++d) {
        same[d] = 0.42;
        ramp[d] = d / 10.0;
    }
    CHECK(dsc_average(same) == doctest::Approx(0.42));
    CHECK(dsc_average(ramp) == doctest::Approx(0.55));
    ramp.erase(7);
    try {
        dsc_average(ramp);
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("0.7") != std::string::npos);
    }
    CHECK(dsc_relative(0.576, 0.406) == doctest::Approx(0.287).epsilon(0.002 / 0.287));
    CHECK(std::abs(dsc_relative(0.576, 0.406) - 0.287) <= 0.002);
    CHECK(std::abs(dsc_relative(0.576, 0.364) - 0.334) <= 0.002);
    CHECK(std::abs(dsc_relative(0.576, 0.321) - 0.376) <= 0.002);
    CHECK(dsc_relative(0.3, 0.3) == 0.0);
    CHECK_THROWS_AS(dsc_relative(0.5, 1.0), Error);
}

TEST_CASE("metric properties on random labelled trees") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4 + static_cast<int>(rng.below(20));
        const int classes = 2 + static_cast<int>(rng.below(4));
        std::vector<std::string> labels;
        for (int i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + rng.below(classes))));
        if (std::set<std::string>(labels.begin(), labels.end()).size() < 2) continue;
        const auto e = random_topology(n, rng);
        const auto t = labelled(n, e, labels);
        const auto c = ClusterAssignment::from_tree(t);
        CHECK(clustering_error(t, c) >= 0);
        const auto d = dsc_detail(t, c);
        CHECK(d.value >= -1.0);
        CHECK(d.value <= 1.0);
        for (double s : d.silhouette) CHECK(std::abs(s) <= 1.0);
        CHECK(d.value == doctest::Approx(dsc_oracle(n, path_counts(n, e), labels)).epsilon(1e-12));
    }
}

TEST_CASE("moving a leaf out of an errorless tree costs error") {
    const auto t = fixture_tree("clean_tree.nwk");
    const auto c = ClusterAssignment::from_tree(t);
    for (int a = 0; a < static_cast<int>(t.leaf_count()); ++a)
        for (int b = a + 1; b < static_cast<int>(t.leaf_count()); ++b) {
            if (t.labels()[a] == t.labels()[b]) continue;
            auto s = t;
            s.swap_leaves(a, b);
            CHECK(clustering_error(s, c) > 0);
            CHECK(dsc(s, c) < dsc(t, c));
        }
}
