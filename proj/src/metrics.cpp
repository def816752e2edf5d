#include "ncdlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

#include "ncdlab/error.hpp"

namespace ncdlab {

ClusterAssignment ClusterAssignment::from_tree(const UnrootedBinaryTree& t) {
    ClusterAssignment c;
    for (std::size_t i = 0; i < t.leaf_count(); ++i) c.label_of[t.ids()[i]] = t.labels()[i];
    return c;
}

ClusterAssignment ClusterAssignment::from_matrix(const DistanceMatrix& m) {
    ClusterAssignment c;
    for (std::size_t i = 0; i < m.size(); ++i)
        c.label_of[m.ids[i]] = i < m.labels.size() ? m.labels[i] : id_prefix_label(m.ids[i]);
    return c;
}

std::map<std::string, std::size_t> ClusterAssignment::class_sizes() const {
    std::map<std::string, std::size_t> sizes;
    for (const auto& [id, label] : label_of) ++sizes[label];
    return sizes;
}

const std::string& ClusterAssignment::at(const std::string& id) const {
    const auto it = label_of.find(id);
    if (it == label_of.end()) throw Error(ErrorKind::Input, "no class label for leaf '" + id + "'");
    if (it->second.empty()) throw Error(ErrorKind::Input, "empty class label for leaf '" + id + "'");
    return it->second;
}

// Rooted subtrees are combined pairwise. For each leaf count we keep the
// Pareto front of (sum of leaf depths, within-subtree path sum): joining L
// and R under a new node adds |R|*depth(L) + |L|*depth(R) + |L||R|.
long long class_baseline(std::size_t k) {
    if (k == 0) throw Error(ErrorKind::Input, "class size must be positive");
    static std::mutex lock;
    static std::vector<std::vector<std::pair<long long, long long>>> fronts{{}, {{0, 0}}};
    std::lock_guard guard(lock);
    while (fronts.size() <= k) {
        const long long n = static_cast<long long>(fronts.size());
        std::map<long long, long long> best;
        for (long long a = 1; a <= n / 2; ++a) {
            const long long b = n - a;
            for (const auto& [ha, sa] : fronts[a])
                for (const auto& [hb, sb] : fronts[b]) {
                    const long long h = ha + hb + n;
                    const long long s = sa + sb + b * ha + a * hb + a * b;
                    auto [it, fresh] = best.emplace(h, s);
                    if (!fresh) it->second = std::min(it->second, s);
                }
        }
        std::vector<std::pair<long long, long long>> front;
        for (const auto& [h, s] : best)
            if (front.empty() || s < front.back().second) front.emplace_back(h, s);
        fronts.push_back(std::move(front));
    }
    long long out = fronts[k].front().second;
    for (const auto& [h, s] : fronts[k]) out = std::min(out, s);
    return out;
}

long long errorless_baseline(const std::vector<long long>& sizes) {
    long long total = 0;
    for (const auto k : sizes) {
        if (k <= 0) throw Error(ErrorKind::Input, "class size must be positive");
        total += class_baseline(static_cast<std::size_t>(k));
    }
    return total;
}

long long within_class_distance(const UnrootedBinaryTree& t, const ClusterAssignment& c) {
    const auto n = t.leaf_count();
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = c.at(t.ids()[i]);
    const auto d = t.leaf_distance_matrix();
    long long sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (labels[i] == labels[j]) sum += d[i * n + j];
    return sum;
}

long long clustering_error(const UnrootedBinaryTree& t, const ClusterAssignment& c) {
    std::map<std::string, long long> sizes;
    for (const auto& id : t.ids()) ++sizes[c.at(id)];
    std::vector<long long> ks;
    for (const auto& [label, k] : sizes) ks.push_back(k);
    return within_class_distance(t, c) - errorless_baseline(ks);
}

DscDetail dsc_detail(const UnrootedBinaryTree& t, const ClusterAssignment& c) {
    const auto n = t.leaf_count();
    std::vector<std::string> labels(n);
    std::map<std::string, std::size_t> sizes;
    for (std::size_t i = 0; i < n; ++i) ++sizes[labels[i] = c.at(t.ids()[i])];
    if (sizes.size() < 2) throw Error(ErrorKind::UndefinedDistance, "silhouette needs at least two classes");
    const auto d = t.leaf_distance_matrix();
    DscDetail out;
    out.silhouette.assign(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto same = sizes[labels[i]];
        if (same == 1) {
            out.singleton_leaves.push_back(t.ids()[i]);
            continue;
        }
        double in = 0.0, across = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            (labels[j] == labels[i] ? in : across) += d[i * n + j];
        }
        const double a = in / static_cast<double>(same - 1);
        const double b = across / static_cast<double>(n - same);
        const double s = std::max(a, b) > 0.0 ? (b - a) / std::max(a, b) : 0.0;
        out.silhouette[i] = s;
        total += s;
    }
    out.value = total / static_cast<double>(n);
    return out;
}

double dsc(const UnrootedBinaryTree& t, const ClusterAssignment& c) { return dsc_detail(t, c).value; }

double dsc_average(const std::map<int, double>& by_degree_tenths) {
    double sum = 0.0;
    for (int d = 1; d <= 10; ++d) {
        const auto it = by_degree_tenths.find(d);
        if (it == by_degree_tenths.end())
        {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%.1f", d / 10.0);
            throw Error(ErrorKind::Input, std::string("missing DSC value for degree ") + buf);
        }
        sum += it->second;
    }
    if (by_degree_tenths.size() != 10) throw Error(ErrorKind::Input, "DSC average takes exactly the degrees 0.1..1.0");
    return sum / 10.0;
}

double dsc_relative(double dsc_oo, double dsc_i) {
    if (!(dsc_i < 1.0)) throw Error(ErrorKind::UndefinedDistance, "relative DSC is singular when DSC_i = 1");
    return (dsc_oo - dsc_i) / (1.0 - dsc_i);
}

}  // namespace ncdlab
