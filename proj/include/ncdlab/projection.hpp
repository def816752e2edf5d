#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ncdlab/ncd.hpp"

namespace ncdlab {

struct ProjectedPoint {
    std::string id;
    std::string label;
    double x = 0.0;
    double y = 0.0;
};

struct Projection2D {
    std::vector<ProjectedPoint> points;  // matrix row order
    double stress = 0.0;                 // Kruskal stress-1
    bool degenerate = false;
};

// Classical metric scaling into the plane. The diagonal is read as 0. Rows are
// processed in sorted-id order so the result does not depend on row order;
// each axis is flipped so its first nonzero coordinate (in that order) is
// positive.
Projection2D mds_project(const DistanceMatrix& m);

double silhouette_euclidean(const Projection2D& p);

// Spearman rank correlation between matrix distances and projected distances
// over all off-diagonal pairs.
double spearman_fit(const DistanceMatrix& m, const Projection2D& p);

// Writes <stem>.csv ("id,label,x,y") and <stem>.svg.
void emit_plot(const Projection2D& p, const std::filesystem::path& stem, const std::string& title = "");

}  // namespace ncdlab
