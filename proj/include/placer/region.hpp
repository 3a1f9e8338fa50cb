#ifndef PLACER_REGION_HPP
#define PLACER_REGION_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "placer/optimizer.hpp"

namespace placer {

struct Triangulation {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;  // CCW index triples
};

/// Circumcircle of a triangle; radius is +inf for degenerate triangles.
void circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, Vec2& center,
                  double& radius);

/// Incremental Bowyer-Watson triangulation. Throws std::invalid_argument
/// when fewer than 3 non-collinear points remain.
Triangulation delaunay(const std::vector<Vec2>& points);

struct RegionPolygon {
    std::vector<Vec2> outer;               // CCW
    std::vector<std::vector<Vec2>> holes;  // CW
    std::vector<int> member_points;        // indices into the input cloud

    bool contains(const Vec2& p) const;    // even-odd over all rings
    double boundary_distance(const Vec2& p) const;
};

/// Triangles with circumradius <= alpha, traced into per-component
/// boundary polygons with holes.
std::vector<RegionPolygon> alpha_shape(const Triangulation& tri, double alpha);

struct InscribedCircle {
    Vec2 center = Vec2::Zero();
    double radius = 0.0;
    bool degenerate = false;  // no Voronoi node fell inside the polygon
};

/// Largest inscribed circle via the Voronoi diagram (Delaunay dual) of the
/// boundary discretized at edge_step.
InscribedCircle largest_inscribed_circle(const RegionPolygon& poly, double edge_step);

struct PointCloud2 {
    std::vector<Vec2> points;
    std::vector<double> scores;
};

struct RegionParams {
    double alpha = 0.05;
    double min_radius = 0.05;
    double edge_step = 0.01;
    double score_eps = 0.0;  // "relevant" = score <= score_eps
    std::optional<Disk2> forbidden_region;
};

struct Region {
    RegionPolygon polygon;
    InscribedCircle circle;
    int n_points = 0;
};

/// Full pipeline: score filter, alpha-shape clustering, inscribed circle per
/// cluster, small and forbidden clusters dropped; sorted by radius descending.
std::vector<Region> analyze(const PointCloud2& cloud, const RegionParams& params);

std::string regions_to_json(const std::vector<Region>& regions, const RegionParams& params);

}  // namespace placer

#endif
