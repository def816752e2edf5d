#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ncdlab/tree.hpp"

namespace ncdlab {

// Document id -> class label.
struct ClusterAssignment {
    std::map<std::string, std::string> label_of;

    static ClusterAssignment from_tree(const UnrootedBinaryTree& t);
    static ClusterAssignment from_matrix(const DistanceMatrix& m);

    std::map<std::string, std::size_t> class_sizes() const;
    const std::string& at(const std::string& id) const;  // ErrorKind::Input when missing
};

// Minimal within-class path sum for one class of `k` leaves forming a
// connected subtree hanging off the rest of the tree.
long long class_baseline(std::size_t k);
long long errorless_baseline(const std::vector<long long>& sizes);

long long within_class_distance(const UnrootedBinaryTree& t, const ClusterAssignment& c);
long long clustering_error(const UnrootedBinaryTree& t, const ClusterAssignment& c);

struct DscDetail {
    double value = 0.0;
    std::vector<double> silhouette;  // per leaf, tree leaf order
    std::vector<std::string> singleton_leaves;
};

DscDetail dsc_detail(const UnrootedBinaryTree& t, const ClusterAssignment& c);
double dsc(const UnrootedBinaryTree& t, const ClusterAssignment& c);

// Mean over the ten degrees 0.1..1.0; keys are degree * 10.
double dsc_average(const std::map<int, double>& by_degree_tenths);
double dsc_relative(double dsc_oo, double dsc_i);

}  // namespace ncdlab
