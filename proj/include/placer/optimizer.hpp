#ifndef PLACER_OPTIMIZER_HPP
#define PLACER_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "placer/pose.hpp"

namespace placer {

struct Bounds2 {
    Vec2 lo = Vec2(-2.0, -2.0);
    Vec2 hi = Vec2(2.0, 2.0);

    Vec2 center() const { return 0.5 * (lo + hi); }
    double diagonal() const { return (hi - lo).norm(); }
    bool contains(const Vec2& x) const {
        return x.x() >= lo.x() && x.x() <= hi.x() && x.y() >= lo.y() && x.y() <= hi.y();
    }
};

struct Disk2 {
    Vec2 center = Vec2::Zero();
    double radius = 0.0;
    bool contains(const Vec2& x) const { return (x - center).norm() <= radius; }
};

struct SwarmConfig {
    int n_cluster = 4;     // particles per cluster; swarm size = N * (N + 1)
    int iterations = 50;
    double w = 0.8;        // inertia
    double c1 = 0.35;      // cognition
    double c2 = 0.15;      // social
    double e = 0.2;        // exploration
    std::uint64_t seed = 1;
    Bounds2 bounds;
    std::optional<Disk2> forbidden_region;  // scored 1 without evaluation
    bool centered_exploration = false;      // r_e in [-0.5, 0.5]^2 instead of [0, 1]^2
    double v0_frac = 0.05;                  // initial speed as fraction of bounds diagonal

    int swarm_size() const { return n_cluster * (n_cluster + 1); }
};

struct Particle {
    Vec2 x = Vec2::Zero();
    Vec2 v = Vec2::Zero();
    Vec2 pbest_x = Vec2::Zero();
    double pbest_f = std::numeric_limits<double>::infinity();
    double f = std::numeric_limits<double>::infinity();
};

struct EvalRecord {
    int iteration;   // 0 = initial placement
    int particle;
    Vec2 x;
    double score;
};
using ExplorationLog = std::vector<EvalRecord>;

using Objective = std::function<double(const Vec2&)>;

/// Particles on the largest circle inscribed in bounds, velocities aimed at
/// the trajectory centre.
std::vector<Particle> init_swarm(const SwarmConfig& cfg, const Vec2& traj_center);

/// DCluster neighbourhoods from the current scores: stable-sort worst first,
/// N+1 contiguous clusters of size N (last = best), full intra-cluster
/// connection, k-th central member bridged to the worst of cluster k+1.
std::vector<std::vector<int>> dcluster_topology(const std::vector<double>& scores,
                                                int n_cluster);

/// One velocity/position/pbest update. RNG draws are serial in particle
/// order: r1.x, r1.y, r2.x, r2.y, re.x, re.y.
void step(std::vector<Particle>& swarm, const std::vector<std::vector<int>>& neighborhoods,
          const SwarmConfig& cfg, std::mt19937_64& rng);

/// Full PSO run; returns every evaluation (S * (iterations + 1) records).
/// `workers` parallelizes objective evaluations within an iteration without
/// affecting results.
ExplorationLog optimize(const Objective& objective, const SwarmConfig& cfg,
                        const Vec2& traj_center, int workers = 1);

}  // namespace placer

#endif
