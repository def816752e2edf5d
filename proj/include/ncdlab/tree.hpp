#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncdlab/ncd.hpp"

namespace ncdlab {

// Unrooted binary tree with documents on the leaves. Nodes 0..n-1 are the
// leaves, n..2n-3 the internal nodes (each of degree 3).
class UnrootedBinaryTree {
public:
    UnrootedBinaryTree() = default;

    // Throws ErrorKind::Input unless the edges form a valid unrooted binary
    // tree over the given leaves.
    UnrootedBinaryTree(std::vector<std::string> ids, std::vector<std::string> labels,
                       const std::vector<std::pair<int, int>>& edges);

    std::size_t leaf_count() const noexcept { return ids_.size(); }
    std::size_t node_count() const noexcept { return adjacency_.size(); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<std::vector<int>>& adjacency() const noexcept { return adjacency_; }
    bool is_leaf(int node) const noexcept { return node < static_cast<int>(ids_.size()); }

    int leaf_of(const std::string& id) const;  // throws ErrorKind::Input when absent
    std::vector<std::pair<int, int>> edges() const;  // each edge once, smaller node first

    // Internal-node counts between every pair of leaves, row-major n x n.
    std::vector<int> leaf_distance_matrix() const;

    // Canonical Newick: rooted at the internal neighbour of the smallest id,
    // children ordered by their smallest descendant id, no branch lengths.
    std::string newick() const;

    // Structural invariants: connected, acyclic, leaf degree 1, internal
    // degree 3, n - 2 internal nodes. Throws ErrorKind::Input on violation.
    void validate() const;

    // Moves used by refinement; both keep the tree valid.
    void swap_leaves(int a, int b);
    // Nearest-neighbour interchange across internal edge (u, v): subtree `a`
    // hanging off u trades places with subtree `b` hanging off v.
    void interchange(int u, int v, int a, int b);
    // Subtree transfer: the subtree at `s`, hanging off internal node `u`, is
    // pruned and regrafted onto edge (x, y) outside it.
    void transfer(int s, int u, int x, int y);

private:
    std::vector<std::string> ids_;
    std::vector<std::string> labels_;
    std::vector<std::vector<int>> adjacency_;
};

// Reads a Newick string (labels only; branch lengths are ignored). A root of
// degree 2 is suppressed. `label_of` maps a leaf id to its class label.
UnrootedBinaryTree parse_newick(std::string_view text,
                                const std::function<std::string(const std::string&)>& label_of);

// Class prefix of an id: text before the first '.', '/', or '_'.
std::string id_prefix_label(const std::string& id);

// Number of internal nodes on the path between leaves `a` and `b`.
int leaf_distance(const UnrootedBinaryTree& t, const std::string& a, const std::string& b);

// Refinement objective (lower is better): over every set of four leaves, the
// tree induces one pairing {a,b}|{c,d}; the score sums NCD(a,b) + NCD(c,d)
// over those pairings. Adding a constant to every distance leaves the
// ranking of trees unchanged.
double tree_score(const UnrootedBinaryTree& t, const DistanceMatrix& m);

// Average-linkage agglomeration with Lance-Williams updates. Ties go to the
// pair whose (smaller min-id, larger min-id) is lexicographically smallest,
// so the topology does not depend on row order. The degree-2 root is removed.
UnrootedBinaryTree build_tree_agglomerative(const DistanceMatrix& m);

// Hill climbing. Each proposal chains a geometric number of random moves
// (leaf swap, interchange, subtree transfer) and is kept only if it strictly
// lowers tree_score. `trace`, when given, receives the starting score and then
// the score after every iteration.
UnrootedBinaryTree refine_tree(const DistanceMatrix& m, const UnrootedBinaryTree& t, std::size_t iterations,
                               std::uint64_t seed, std::vector<double>* trace = nullptr);

// Independent chains (seeded by derive_seed(seed, chain)) run in parallel; the
// lowest score wins, ties broken by the smaller canonical Newick string.
UnrootedBinaryTree refine_tree_chains(const DistanceMatrix& m, const UnrootedBinaryTree& t,
                                      std::size_t iterations, std::uint64_t seed, std::size_t chains);

// Edge list for plotting: "<node>,<node>,<kind>" rows with leaf ids in place of
// leaf node numbers.
void write_edge_list(std::ostream& out, const UnrootedBinaryTree& t);

}  // namespace ncdlab
