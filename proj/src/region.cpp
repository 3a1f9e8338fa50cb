#include "placer/region.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace placer {

void circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, Vec2& center,
                  double& radius) {
    const Vec2 ab = b - a, ac = c - a;
    const double d = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
    if (std::abs(d) < 1e-24) {
        center = a;
        radius = std::numeric_limits<double>::infinity();
        return;
    }
    const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
    const Vec2 u((ac.y() * ab2 - ab.y() * ac2) / d, (ab.x() * ac2 - ac.x() * ab2) / d);
    center = a + u;
    radius = u.norm();
}

namespace {

double signed_area2(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

double ring_area(const std::vector<Vec2>& ring) {
    double s = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Vec2& p = ring[i];
        const Vec2& q = ring[(i + 1) % ring.size()];
        s += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * s;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 < 1e-24) return (p - a).norm();
    const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

// p strictly inside the circumcircle of CCW triangle (a, b, c); the
// determinant form is far better conditioned than comparing distances to a
// computed circumcenter
bool in_circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
    const double ax = a.x() - p.x(), ay = a.y() - p.y();
    const double bx = b.x() - p.x(), by = b.y() - p.y();
    const double cx = c.x() - p.x(), cy = c.y() - p.y();
    const double det = (ax * ax + ay * ay) * (bx * cy - by * cx) -
                       (bx * bx + by * by) * (ax * cy - ay * cx) +
                       (cx * cx + cy * cy) * (ax * by - ay * bx);
    return det > 0.0;
}

bool ray_crosses(const Vec2& p, const Vec2& a, const Vec2& b) {
    // horizontal ray to +x, half-open rule
    if ((a.y() > p.y()) == (b.y() > p.y())) return false;
    const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
    return x > p.x();
}

}  // namespace

Triangulation delaunay(const std::vector<Vec2>& points) {
    if (points.size() < 3) throw std::invalid_argument("delaunay: need >= 3 points");

    Vec2 lo = points[0], hi = points[0];
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Vec2 c = 0.5 * (lo + hi);
    const double span = std::max((hi - lo).norm(), 1.0) * 50.0;

    Triangulation t;
    t.vertices = points;
    const int s0 = static_cast<int>(points.size());
    t.vertices.push_back(c + Vec2(0.0, span));
    t.vertices.push_back(c + Vec2(-span, -span));
    t.vertices.push_back(c + Vec2(span, -span));
    t.triangles.push_back({s0, s0 + 1, s0 + 2});

    for (int pi = 0; pi < s0; ++pi) {
        const Vec2& p = t.vertices[pi];
        std::vector<int> bad;
        for (std::size_t ti = 0; ti < t.triangles.size(); ++ti) {
            const auto& tr = t.triangles[ti];
            if (in_circumcircle(t.vertices[tr[0]], t.vertices[tr[1]], t.vertices[tr[2]], p))
                bad.push_back(ti);
        }

        // cavity boundary: edges used by exactly one bad triangle
        std::map<std::pair<int, int>, std::pair<int, int>> edges;  // sorted -> directed
        for (int ti : bad) {
            const auto& tr = t.triangles[ti];
            for (int e = 0; e < 3; ++e) {
                const int a = tr[e], b = tr[(e + 1) % 3];
                const auto key = std::minmax(a, b);
                auto it = edges.find(key);
                if (it == edges.end())
                    edges[key] = {a, b};
                else
                    edges.erase(it);
            }
        }
        for (auto it = bad.rbegin(); it != bad.rend(); ++it)
            t.triangles.erase(t.triangles.begin() + *it);
        for (const auto& [key, dir] : edges) {
            std::array<int, 3> tr = {dir.first, dir.second, pi};
            if (signed_area2(t.vertices[tr[0]], t.vertices[tr[1]], t.vertices[tr[2]]) < 0.0)
                std::swap(tr[1], tr[2]);
            t.triangles.push_back(tr);
        }
    }

    // drop triangles touching the super-triangle
    std::vector<std::array<int, 3>> keep;
    for (const auto& tr : t.triangles)
        if (tr[0] < s0 && tr[1] < s0 && tr[2] < s0) keep.push_back(tr);
    t.triangles = std::move(keep);
    t.vertices.resize(s0);
    if (t.triangles.empty()) throw std::invalid_argument("delaunay: all points collinear");
    return t;
}

bool RegionPolygon::contains(const Vec2& p) const {
    int crossings = 0;
    auto count = [&](const std::vector<Vec2>& ring) {
        for (std::size_t i = 0; i < ring.size(); ++i)
            if (ray_crosses(p, ring[i], ring[(i + 1) % ring.size()])) ++crossings;
    };
    count(outer);
    for (const auto& h : holes) count(h);
    return crossings % 2 == 1;
}

double RegionPolygon::boundary_distance(const Vec2& p) const {
    double d = std::numeric_limits<double>::infinity();
    auto scan = [&](const std::vector<Vec2>& ring) {
        for (std::size_t i = 0; i < ring.size(); ++i)
            d = std::min(d, point_segment_distance(p, ring[i], ring[(i + 1) % ring.size()]));
    };
    scan(outer);
    for (const auto& h : holes) scan(h);
    return d;
}

std::vector<RegionPolygon> alpha_shape(const Triangulation& tri, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha_shape: alpha must be > 0");

    std::vector<int> kept;
    for (std::size_t ti = 0; ti < tri.triangles.size(); ++ti) {
        const auto& tr = tri.triangles[ti];
        if (std::abs(signed_area2(tri.vertices[tr[0]], tri.vertices[tr[1]],
                                  tri.vertices[tr[2]])) < 2e-12)
            continue;
        Vec2 c;
        double r;
        circumcircle(tri.vertices[tr[0]], tri.vertices[tr[1]], tri.vertices[tr[2]], c, r);
        if (r <= alpha) kept.push_back(ti);
    }
    if (kept.empty()) return {};

    // union-find over kept triangles sharing an edge
    std::vector<int> parent(kept.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<std::pair<int, int>, int> edge_owner;  // undirected edge -> kept index
    for (std::size_t ki = 0; ki < kept.size(); ++ki) {
        const auto& tr = tri.triangles[kept[ki]];
        for (int e = 0; e < 3; ++e) {
            const auto key = std::minmax(tr[e], tr[(e + 1) % 3]);
            auto it = edge_owner.find(key);
            if (it == edge_owner.end())
                edge_owner[key] = ki;
            else
                parent[find(ki)] = find(it->second);
        }
    }

    // boundary directed edges (owned by exactly one kept triangle)
    std::map<std::pair<int, int>, int> edge_count;
    for (int ti : kept) {
        const auto& tr = tri.triangles[ti];
        for (int e = 0; e < 3; ++e) ++edge_count[std::minmax(tr[e], tr[(e + 1) % 3])];
    }
    // start vertex -> (end vertex, component)
    std::multimap<int, std::pair<int, int>> boundary;
    for (std::size_t ki = 0; ki < kept.size(); ++ki) {
        const auto& tr = tri.triangles[kept[ki]];
        for (int e = 0; e < 3; ++e) {
            const int a = tr[e], b = tr[(e + 1) % 3];
            if (edge_count[std::minmax(a, b)] == 1)
                boundary.insert({a, {b, find(ki)}});
        }
    }

    // trace closed loops
    std::map<int, std::vector<std::vector<int>>> comp_rings;
    while (!boundary.empty()) {
        auto it = boundary.begin();
        const int comp = it->second.second;
        std::vector<int> ring{it->first};
        int cur = it->second.first;
        boundary.erase(it);
        while (cur != ring.front()) {
            ring.push_back(cur);
            auto next = boundary.find(cur);
            if (next == boundary.end()) break;  // open chain (degenerate)
            cur = next->second.first;
            boundary.erase(next);
        }
        if (ring.size() >= 3 && cur == ring.front()) comp_rings[comp].push_back(ring);
    }

    std::map<int, std::vector<int>> comp_members;
    for (std::size_t ki = 0; ki < kept.size(); ++ki) {
        const int comp = find(ki);
        for (int v : tri.triangles[kept[ki]]) comp_members[comp].push_back(v);
    }

    std::vector<RegionPolygon> out;
    for (auto& [comp, rings] : comp_rings) {
        RegionPolygon poly;
        std::vector<std::vector<Vec2>> pts(rings.size());
        for (std::size_t i = 0; i < rings.size(); ++i)
            for (int v : rings[i]) pts[i].push_back(tri.vertices[v]);
        std::size_t outer_idx = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (std::abs(ring_area(pts[i])) > best) {
                best = std::abs(ring_area(pts[i]));
                outer_idx = i;
            }
        poly.outer = pts[outer_idx];
        if (ring_area(poly.outer) < 0.0)
            std::reverse(poly.outer.begin(), poly.outer.end());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == outer_idx) continue;
            auto h = pts[i];
            if (ring_area(h) > 0.0) std::reverse(h.begin(), h.end());
            poly.holes.push_back(std::move(h));
        }
        auto& mem = comp_members[comp];
        std::sort(mem.begin(), mem.end());
        mem.erase(std::unique(mem.begin(), mem.end()), mem.end());
        poly.member_points = mem;
        out.push_back(std::move(poly));
    }
    return out;
}

InscribedCircle largest_inscribed_circle(const RegionPolygon& poly, double edge_step) {
    if (!(edge_step > 0.0))
        throw std::invalid_argument("largest_inscribed_circle: edge_step must be > 0");

    std::vector<Vec2> samples;
    auto discretize = [&](const std::vector<Vec2>& ring) {
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Vec2& a = ring[i];
            const Vec2& b = ring[(i + 1) % ring.size()];
            const int n = std::max(1, static_cast<int>(std::ceil((b - a).norm() / edge_step)));
            for (int k = 0; k < n; ++k) samples.push_back(a + (b - a) * (double(k) / n));
        }
    };
    discretize(poly.outer);
    for (const auto& h : poly.holes) discretize(h);

    InscribedCircle best;
    best.degenerate = true;
    if (samples.size() < 3) return best;
    Triangulation tri;
    try {
        tri = delaunay(samples);
    } catch (const std::invalid_argument&) {
        return best;
    }
    for (const auto& tr : tri.triangles) {
        Vec2 c;
        double r;
        circumcircle(tri.vertices[tr[0]], tri.vertices[tr[1]], tri.vertices[tr[2]], c, r);
        if (!std::isfinite(r) || !poly.contains(c)) continue;
        const double dist = poly.boundary_distance(c);
        if (dist > best.radius) {
            best.radius = dist;
            best.center = c;
            best.degenerate = false;
        }
    }
    return best;
}

std::vector<Region> analyze(const PointCloud2& cloud, const RegionParams& params) {
    if (cloud.points.size() != cloud.scores.size())
        throw std::invalid_argument("analyze: points/scores size mismatch");

    std::vector<Vec2> feasible;
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        if (cloud.scores[i] <= params.score_eps) feasible.push_back(cloud.points[i]);

    // merge duplicates
    std::vector<Vec2> pts;
    for (const auto& p : feasible) {
        bool dup = false;
        for (const auto& q : pts)
            if ((p - q).norm() < 1e-9) {
                dup = true;
                break;
            }
        if (!dup) pts.push_back(p);
    }
    if (pts.size() < 3) return {};

    Triangulation tri;
    try {
        tri = delaunay(pts);
    } catch (const std::invalid_argument&) {
        return {};
    }

    std::vector<Region> regions;
    for (auto& poly : alpha_shape(tri, params.alpha)) {
        Region reg;
        reg.n_points = static_cast<int>(poly.member_points.size());
        reg.circle = largest_inscribed_circle(poly, params.edge_step);
        reg.polygon = std::move(poly);
        if (reg.circle.degenerate || reg.circle.radius < params.min_radius) continue;
        if (params.forbidden_region &&
            (reg.circle.center - params.forbidden_region->center).norm() <
                reg.circle.radius + params.forbidden_region->radius)
            continue;
        regions.push_back(std::move(reg));
    }
    std::sort(regions.begin(), regions.end(),
              [](const Region& a, const Region& b) { return a.circle.radius > b.circle.radius; });
    return regions;
}

std::string regions_to_json(const std::vector<Region>& regions, const RegionParams& params) {
    nlohmann::json j;
    j["settings"] = {{"alpha", params.alpha},
                     {"min_radius", params.min_radius},
                     {"edge_step", params.edge_step},
                     {"score_eps", params.score_eps}};
    j["clusters"] = nlohmann::json::array();
    auto ring_json = [](const std::vector<Vec2>& ring) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& p : ring) r.push_back({p.x(), p.y()});
        return r;
    };
    for (const auto& reg : regions) {
        nlohmann::json c;
        c["polygon"]["outer"] = ring_json(reg.polygon.outer);
        c["polygon"]["holes"] = nlohmann::json::array();
        for (const auto& h : reg.polygon.holes) c["polygon"]["holes"].push_back(ring_json(h));
        c["circle"] = {{"cx", reg.circle.center.x()},
                       {"cy", reg.circle.center.y()},
                       {"r", reg.circle.radius}};
        c["n_points"] = reg.n_points;
        j["clusters"].push_back(c);
    }
    return j.dump(2);
}

}  // namespace placer
