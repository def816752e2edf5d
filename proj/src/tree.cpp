#include "ncdlab/tree.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <unordered_map>

#include "ncdlab/error.hpp"
#include "ncdlab/rng.hpp"

namespace ncdlab {
namespace {

bool valid_id(const std::string& id) {
    return !id.empty() && id.find_first_of("(),:;' \t\r\n") == std::string::npos;
}

}  // namespace

UnrootedBinaryTree::UnrootedBinaryTree(std::vector<std::string> ids, std::vector<std::string> labels,
                                       const std::vector<std::pair<int, int>>& edges)
    : ids_(std::move(ids)), labels_(std::move(labels)) {
    const auto n = ids_.size();
    if (labels_.size() != n) throw Error(ErrorKind::Input, "tree needs one label per leaf");
    if (n < 3) throw Error(ErrorKind::Input, "a tree needs at least 3 leaves");
    adjacency_.assign(2 * n - 2, {});
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= static_cast<int>(adjacency_.size()) || b >= static_cast<int>(adjacency_.size()) || a == b)
            throw Error(ErrorKind::Input, "tree edge references an invalid node");
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    validate();
}

void UnrootedBinaryTree::validate() const {
    const auto n = ids_.size();
    if (n < 3) throw Error(ErrorKind::Input, "a tree needs at least 3 leaves");
    if (adjacency_.size() != 2 * n - 2)
        throw Error(ErrorKind::Input, "tree must have exactly n - 2 internal nodes");
    std::size_t degree_sum = 0;
    for (std::size_t v = 0; v < adjacency_.size(); ++v) {
        const auto want = v < n ? 1u : 3u;
        if (adjacency_[v].size() != want)
            throw Error(ErrorKind::Input, std::string(v < n ? "leaf '" + ids_[v] + "'" : "internal node") +
                                              " has degree " + std::to_string(adjacency_[v].size()));
        degree_sum += adjacency_[v].size();
    }
    if (degree_sum / 2 != adjacency_.size() - 1) throw Error(ErrorKind::Input, "tree has a cycle");
    std::vector<char> seen(adjacency_.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const int w : adjacency_[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    if (reached != adjacency_.size()) throw Error(ErrorKind::Input, "tree is not connected");
    std::vector<std::string> sorted = ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error(ErrorKind::Input, "tree has duplicate leaf ids");
}

int UnrootedBinaryTree::leaf_of(const std::string& id) const {
    const auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) throw Error(ErrorKind::Input, "unknown leaf id '" + id + "'");
    return static_cast<int>(it - ids_.begin());
}

std::vector<std::pair<int, int>> UnrootedBinaryTree::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < static_cast<int>(adjacency_.size()); ++v)
        for (const int w : adjacency_[v])
            if (v < w) out.emplace_back(v, w);
    return out;
}

std::vector<int> UnrootedBinaryTree::leaf_distance_matrix() const {
    const auto n = ids_.size();
    std::vector<int> out(n * n, 0);
    std::vector<int> dist(adjacency_.size());
    std::vector<int> queue(adjacency_.size());
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::size_t head = 0, tail = 0;
        queue[tail++] = static_cast<int>(s);
        dist[s] = 0;
        while (head < tail) {
            const int v = queue[head++];
            for (const int w : adjacency_[v])
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue[tail++] = w;
                }
        }
        for (std::size_t t = 0; t < n; ++t) out[s * n + t] = t == s ? 0 : dist[t] - 1;
    }
    return out;
}

std::string UnrootedBinaryTree::newick() const {
    const int first = static_cast<int>(std::min_element(ids_.begin(), ids_.end()) - ids_.begin());
    const int start = adjacency_[first][0];
    std::function<const std::string&(int, int)> min_id = [&](int v, int parent) -> const std::string& {
        if (is_leaf(v)) return ids_[v];
        const std::string* best = nullptr;
        for (const int w : adjacency_[v])
            if (w != parent) {
                const auto& m = min_id(w, v);
                if (!best || m < *best) best = &m;
            }
        return *best;
    };
    std::function<std::string(int, int)> render = [&](int v, int parent) -> std::string {
        if (is_leaf(v)) return ids_[v];
        std::vector<std::pair<std::string, int>> kids;
        for (const int w : adjacency_[v])
            if (w != parent) kids.emplace_back(min_id(w, v), w);
        std::sort(kids.begin(), kids.end());
        std::string s = "(";
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (i) s += ',';
            s += render(kids[i].second, v);
        }
        return s + ")";
    };
    return render(start, -1) + ";";
}

void UnrootedBinaryTree::swap_leaves(int a, int b) {
    std::swap(ids_[a], ids_[b]);
    std::swap(labels_[a], labels_[b]);
}

void UnrootedBinaryTree::interchange(int u, int v, int a, int b) {
    std::replace(adjacency_[u].begin(), adjacency_[u].end(), a, b);
    std::replace(adjacency_[v].begin(), adjacency_[v].end(), b, a);
    std::replace(adjacency_[a].begin(), adjacency_[a].end(), u, v);
    std::replace(adjacency_[b].begin(), adjacency_[b].end(), v, u);
}

void UnrootedBinaryTree::transfer(int s, int u, int x, int y) {
    int p = -1, q = -1;
    for (const int w : adjacency_[u])
        if (w != s) (p < 0 ? p : q) = w;
    std::replace(adjacency_[p].begin(), adjacency_[p].end(), u, q);
    std::replace(adjacency_[q].begin(), adjacency_[q].end(), u, p);
    std::replace(adjacency_[x].begin(), adjacency_[x].end(), y, u);
    std::replace(adjacency_[y].begin(), adjacency_[y].end(), x, u);
    adjacency_[u] = {s, x, y};
}

std::string id_prefix_label(const std::string& id) {
    const auto cut = id.find_first_of("./_");
    return cut == std::string::npos ? id : id.substr(0, cut);
}

UnrootedBinaryTree parse_newick(std::string_view text,
                                const std::function<std::string(const std::string&)>& label_of) {
    struct Raw {
        std::vector<int> children;
        std::string name;
    };
    std::vector<Raw> raw;
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& why) {
        return Error(ErrorKind::Parse, "Newick: " + why + " at offset " + std::to_string(pos));
    };
    auto read_name = [&] {
        skip_ws();
        const auto begin = pos;
        while (pos < text.size() && std::string_view("(),:;").find(text[pos]) == std::string_view::npos &&
               !std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        std::string name(text.substr(begin, pos - begin));
        skip_ws();
        if (pos < text.size() && text[pos] == ':') {  // branch length, ignored
            ++pos;
            while (pos < text.size() && std::string_view("(),;").find(text[pos]) == std::string_view::npos) ++pos;
        }
        return name;
    };
    std::function<int()> subtree = [&]() -> int {
        skip_ws();
        const int me = static_cast<int>(raw.size());
        raw.emplace_back();
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            for (;;) {
                const int child = subtree();
                raw[me].children.push_back(child);
                skip_ws();
                if (pos >= text.size()) throw fail("unexpected end");
                if (text[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (text[pos] == ')') {
                    ++pos;
                    break;
                }
                throw fail("expected ',' or ')'");
            }
            read_name();  // internal labels are ignored
        } else {
            raw[me].name = read_name();
            if (raw[me].name.empty()) throw fail("empty leaf name");
        }
        return me;
    };
    const int root = subtree();
    skip_ws();
    if (pos >= text.size() || text[pos] != ';') throw fail("missing ';'");

    std::vector<int> node_of(raw.size(), -1);
    std::vector<std::string> ids, labels;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i].children.empty()) {
            if (!valid_id(raw[i].name)) throw Error(ErrorKind::Parse, "Newick: invalid leaf id '" + raw[i].name + "'");
            node_of[i] = static_cast<int>(ids.size());
            ids.push_back(raw[i].name);
            labels.push_back(label_of(raw[i].name));
        }
    int next = static_cast<int>(ids.size());
    std::vector<std::pair<int, int>> edges;
    const bool suppress_root = raw[root].children.size() == 2;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (!raw[i].children.empty() && !(suppress_root && static_cast<int>(i) == root)) node_of[i] = next++;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (suppress_root && static_cast<int>(i) == root) continue;
        for (const int c : raw[i].children) edges.emplace_back(node_of[i], node_of[c]);
    }
    if (suppress_root) edges.emplace_back(node_of[raw[root].children[0]], node_of[raw[root].children[1]]);
    return UnrootedBinaryTree(std::move(ids), std::move(labels), edges);
}

int leaf_distance(const UnrootedBinaryTree& t, const std::string& a, const std::string& b) {
    const int la = t.leaf_of(a);
    const int lb = t.leaf_of(b);
    if (la == lb) throw Error(ErrorKind::Input, "leaf_distance needs two different leaves");
    return t.leaf_distance_matrix()[static_cast<std::size_t>(la) * t.leaf_count() + lb];
}

namespace {

// Matrix indices of the tree leaves plus an id lookup; the score is the sum
// over all leaf quartets of the NCD cost of the pairing the tree induces.
struct ScoreContext {
    const DistanceMatrix& m;
    std::unordered_map<std::string, std::size_t> index;

    explicit ScoreContext(const DistanceMatrix& matrix) : m(matrix) {
        for (std::size_t i = 0; i < m.size(); ++i) index.emplace(m.ids[i], i);
    }

    double score(const UnrootedBinaryTree& t) const {
        const auto n = t.leaf_count();
        if (n != m.size()) throw Error(ErrorKind::Input, "tree and matrix cover different documents");
        std::vector<std::size_t> map(n);
        for (std::size_t l = 0; l < n; ++l) {
            const auto it = index.find(t.ids()[l]);
            if (it == index.end()) throw Error(ErrorKind::Input, "tree leaf '" + t.ids()[l] + "' missing from matrix");
            map[l] = it->second;
        }
        const auto p = t.leaf_distance_matrix();
        std::vector<double> d(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) d[a * n + b] = m.at(map[a], map[b]);
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = b + 1; c < n; ++c)
                    for (std::size_t e = c + 1; e < n; ++e) {
                        const int ab = p[a * n + b] + p[c * n + e];
                        const int ac = p[a * n + c] + p[b * n + e];
                        const int ae = p[a * n + e] + p[b * n + c];
                        if (ab < ac && ab < ae)
                            s += d[a * n + b] + d[c * n + e];
                        else if (ac < ae)
                            s += d[a * n + c] + d[b * n + e];
                        else
                            s += d[a * n + e] + d[b * n + c];
                    }
        return s;
    }
};

}  // namespace

double tree_score(const UnrootedBinaryTree& t, const DistanceMatrix& m) { return ScoreContext(m).score(t); }

UnrootedBinaryTree build_tree_agglomerative(const DistanceMatrix& m) {
    const auto n = m.size();
    if (n < 3) throw Error(ErrorKind::Input, "tree construction needs at least 3 documents");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m.at(i, j) != m.at(j, i)) throw Error(ErrorKind::Input, "distance matrix is not symmetric");

    struct Cluster {
        std::string min_id;
        double size;
        int node;  // node in the rooted merge tree
        bool active;
    };
    std::vector<Cluster> clusters;
    std::vector<std::vector<int>> children;  // rooted merge tree, leaves first
    for (std::size_t i = 0; i < n; ++i) {
        clusters.push_back({m.ids[i], 1.0, static_cast<int>(i), true});
        children.emplace_back();
    }
    const std::size_t cap = 2 * n;
    std::vector<double> dist(cap * cap, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dist[i * cap + j] = m.at(i, j);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t best_a = 0, best_b = 0;
        bool found = false;
        double best_d = 0.0;
        const std::string* best_lo = nullptr;
        const std::string* best_hi = nullptr;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            if (!clusters[a].active) continue;
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                if (!clusters[b].active) continue;
                const double d = dist[a * cap + b];
                const auto* lo = &clusters[a].min_id;
                const auto* hi = &clusters[b].min_id;
                if (*hi < *lo) std::swap(lo, hi);
                if (!found || d < best_d || (d == best_d && std::tie(*lo, *hi) < std::tie(*best_lo, *best_hi))) {
                    found = true;
                    best_d = d;
                    best_lo = lo;
                    best_hi = hi;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (clusters[best_b].min_id < clusters[best_a].min_id) std::swap(best_a, best_b);
        const auto merged = clusters.size();
        const int node = static_cast<int>(children.size());
        children.push_back({clusters[best_a].node, clusters[best_b].node});
        const double sa = clusters[best_a].size, sb = clusters[best_b].size;
        clusters.push_back({std::min(clusters[best_a].min_id, clusters[best_b].min_id), sa + sb, node, true});
        clusters[best_a].active = clusters[best_b].active = false;
        for (std::size_t c = 0; c < merged; ++c) {
            if (!clusters[c].active) continue;
            const double d = (sa * dist[best_a * cap + c] + sb * dist[best_b * cap + c]) / (sa + sb);
            dist[merged * cap + c] = dist[c * cap + merged] = d;
        }
    }

    // Unroot: the final merge node has two children which become adjacent.
    const int root = static_cast<int>(children.size()) - 1;
    std::vector<int> renumber(children.size(), -1);
    for (std::size_t i = 0; i < n; ++i) renumber[i] = static_cast<int>(i);
    int next = static_cast<int>(n);
    for (std::size_t v = n; v < children.size(); ++v)
        if (static_cast<int>(v) != root) renumber[v] = next++;
    std::vector<std::pair<int, int>> edges;
    for (std::size_t v = n; v < children.size(); ++v) {
        if (static_cast<int>(v) == root) continue;
        for (const int c : children[v]) edges.emplace_back(renumber[v], renumber[c]);
    }
    edges.emplace_back(renumber[children[root][0]], renumber[children[root][1]]);

    std::vector<std::string> labels = m.labels;
    if (labels.size() != n) {
        labels.clear();
        for (const auto& id : m.ids) labels.push_back(id_prefix_label(id));
    }
    return UnrootedBinaryTree(m.ids, labels, edges);
}

UnrootedBinaryTree refine_tree(const DistanceMatrix& m, const UnrootedBinaryTree& t, std::size_t iterations,
                               std::uint64_t seed, std::vector<double>* trace) {
    const ScoreContext ctx(m);
    UnrootedBinaryTree current = t;
    double score = ctx.score(current);
    if (trace) trace->assign(1, score);
    const int n = static_cast<int>(current.leaf_count());
    Rng rng(seed);

    // One proposal applies k >= 1 random moves, P(k) = 2^-k.
    auto mutate = [&](UnrootedBinaryTree& tree) {
        do {
            const auto kind = n >= 4 ? rng.below(3) : 0;
            if (kind == 0) {
                const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
                int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
                if (b >= a) ++b;
                tree.swap_leaves(a, b);
            } else if (kind == 1) {
                std::vector<std::pair<int, int>> internal;
                for (const auto& [u, v] : tree.edges())
                    if (!tree.is_leaf(u) && !tree.is_leaf(v)) internal.emplace_back(u, v);
                const auto [u, v] = internal[rng.below(internal.size())];
                std::vector<int> side_u, side_v;
                for (const int w : tree.adjacency()[u])
                    if (w != v) side_u.push_back(w);
                for (const int w : tree.adjacency()[v])
                    if (w != u) side_v.push_back(w);
                tree.interchange(u, v, side_u[rng.below(2)], side_v[rng.below(2)]);
            } else {
                const auto edges = tree.edges();
                auto [s, u] = edges[rng.below(edges.size())];
                if (tree.is_leaf(u) || (!tree.is_leaf(s) && rng.below(2) == 0)) std::swap(s, u);
                std::vector<bool> pruned(tree.node_count(), false);
                std::vector<int> stack{s};
                pruned[s] = true;
                while (!stack.empty()) {
                    const int x = stack.back();
                    stack.pop_back();
                    for (const int w : tree.adjacency()[x])
                        if (w != u && !pruned[w]) {
                            pruned[w] = true;
                            stack.push_back(w);
                        }
                }
                std::vector<std::pair<int, int>> targets;
                for (const auto& [x, y] : edges)
                    if (!pruned[x] && !pruned[y] && x != u && y != u) targets.emplace_back(x, y);
                if (targets.empty()) continue;
                const auto [x, y] = targets[rng.below(targets.size())];
                tree.transfer(s, u, x, y);
            }
        } while (rng.below(2) == 0);
    };

    for (std::size_t it = 0; it < iterations; ++it) {
        UnrootedBinaryTree proposal = current;
        mutate(proposal);
        const double s = ctx.score(proposal);
        if (s < score) {
            score = s;
            current = std::move(proposal);
        }
        if (trace) trace->push_back(score);
    }
    return current;
}

UnrootedBinaryTree refine_tree_chains(const DistanceMatrix& m, const UnrootedBinaryTree& t,
                                      std::size_t iterations, std::uint64_t seed, std::size_t chains) {
    if (chains == 0) chains = 1;
    std::vector<UnrootedBinaryTree> results(chains);
    std::vector<double> scores(chains);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chains); ++c) {
        try {
            results[c] = refine_tree(m, t, iterations, derive_seed(seed, static_cast<std::uint64_t>(c)));
            scores[c] = tree_score(results[c], m);
        } catch (...) {
#pragma omp critical(refine_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    std::size_t best = 0;
    std::string best_newick = results[0].newick();
    for (std::size_t c = 1; c < chains; ++c) {
        if (scores[c] > scores[best]) continue;
        auto nw = results[c].newick();
        if (scores[c] < scores[best] || nw < best_newick) {
            best = c;
            best_newick = std::move(nw);
        }
    }
    return results[best];
}

void write_edge_list(std::ostream& out, const UnrootedBinaryTree& t) {
    out << "from,to,kind\n";
    auto name = [&](int v) { return t.is_leaf(v) ? t.ids()[v] : "n" + std::to_string(v); };
    for (const auto& [a, b] : t.edges())
        out << name(a) << ',' << name(b) << ',' << (t.is_leaf(a) || t.is_leaf(b) ? "leaf" : "internal") << '\n';
}

}  // namespace ncdlab
