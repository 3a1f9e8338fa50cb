#include "placer/optimizer.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace placer {

std::vector<Particle> init_swarm(const SwarmConfig& cfg, const Vec2& traj_center) {
    const int S = cfg.swarm_size();
    const Vec2 c = cfg.bounds.center();
    const double radius = 0.5 * std::min(cfg.bounds.hi.x() - cfg.bounds.lo.x(),
                                         cfg.bounds.hi.y() - cfg.bounds.lo.y());
    const double v0 = cfg.v0_frac * cfg.bounds.diagonal();
    std::vector<Particle> swarm(S);
    for (int i = 0; i < S; ++i) {
        const double ang = 2.0 * M_PI * i / S;
        swarm[i].x = c + radius * Vec2(std::cos(ang), std::sin(ang));
        Vec2 dir = traj_center - swarm[i].x;
        if (dir.norm() > 1e-12) dir.normalize();
        swarm[i].v = v0 * dir;
        swarm[i].pbest_x = swarm[i].x;
    }
    return swarm;
}

std::vector<std::vector<int>> dcluster_topology(const std::vector<double>& scores,
                                                int n_cluster) {
    const int N = n_cluster;
    const int S = N * (N + 1);
    if (static_cast<int>(scores.size()) != S)
        throw std::invalid_argument("dcluster_topology: need N*(N+1) scores");

    // worst first; ties broken by particle id
    std::vector<int> order(S);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });

    std::vector<std::vector<int>> clusters(N + 1);
    for (int k = 0; k <= N; ++k)
        clusters[k].assign(order.begin() + k * N, order.begin() + (k + 1) * N);

    std::vector<std::vector<int>> nb(S);
    for (const auto& cl : clusters)
        for (int a : cl)
            for (int b : cl) nb[a].push_back(b);

    // central (worst) cluster: member k bridges to the worst of cluster k+1
    for (int k = 0; k < N; ++k) {
        const int a = clusters[0][k];
        const int b = clusters[k + 1].front();
        nb[a].push_back(b);
        nb[b].push_back(a);
    }
    return nb;
}

void step(std::vector<Particle>& swarm, const std::vector<std::vector<int>>& neighborhoods,
          const SwarmConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double e_shift = cfg.centered_exploration ? 0.5 : 0.0;
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        Particle& p = swarm[i];
        int best = static_cast<int>(i);
        for (int j : neighborhoods[i])
            if (swarm[j].pbest_f < swarm[best].pbest_f ||
                (swarm[j].pbest_f == swarm[best].pbest_f && j < best))
                best = j;
        const Vec2 lbest = swarm[best].pbest_x;

        const Vec2 r1(uni(rng), uni(rng));
        const Vec2 r2(uni(rng), uni(rng));
        const Vec2 re(uni(rng) - e_shift, uni(rng) - e_shift);
        p.v = cfg.w * p.v + cfg.c1 * r1.cwiseProduct(p.pbest_x - p.x) +
              cfg.c2 * r2.cwiseProduct(lbest - p.x) + cfg.e * re;
        p.x += p.v;
        for (int d = 0; d < 2; ++d) {
            if (p.x[d] < cfg.bounds.lo[d]) {
                p.x[d] = cfg.bounds.lo[d];
                p.v[d] = 0.0;
            } else if (p.x[d] > cfg.bounds.hi[d]) {
                p.x[d] = cfg.bounds.hi[d];
                p.v[d] = 0.0;
            }
        }
    }
}

namespace {

void evaluate_all(std::vector<Particle>& swarm, const Objective& objective,
                  const SwarmConfig& cfg, int workers) {
    const auto eval_one = [&](Particle& p) {
        if (cfg.forbidden_region && cfg.forbidden_region->contains(p.x))
            p.f = 1.0;
        else
            p.f = objective(p.x);
    };
    if (workers <= 1) {
        for (auto& p : swarm) eval_one(p);
        return;
    }
    std::vector<std::thread> pool;
    const int S = static_cast<int>(swarm.size());
    const int chunk = (S + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk, hi = std::min(S, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (int i = lo; i < hi; ++i) eval_one(swarm[i]);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

ExplorationLog optimize(const Objective& objective, const SwarmConfig& cfg,
                        const Vec2& traj_center, int workers) {
    std::mt19937_64 rng(cfg.seed);
    auto swarm = init_swarm(cfg, traj_center);
    ExplorationLog log;
    log.reserve(static_cast<std::size_t>(cfg.swarm_size()) * (cfg.iterations + 1));

    evaluate_all(swarm, objective, cfg, workers);
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        swarm[i].pbest_f = swarm[i].f;
        swarm[i].pbest_x = swarm[i].x;
        log.push_back({0, static_cast<int>(i), swarm[i].x, swarm[i].f});
    }

    for (int it = 1; it <= cfg.iterations; ++it) {
        std::vector<double> scores(swarm.size());
        for (std::size_t i = 0; i < swarm.size(); ++i) scores[i] = swarm[i].f;
        const auto nb = dcluster_topology(scores, cfg.n_cluster);
        step(swarm, nb, cfg, rng);
        evaluate_all(swarm, objective, cfg, workers);
        for (std::size_t i = 0; i < swarm.size(); ++i) {
            if (swarm[i].f <= swarm[i].pbest_f) {
                swarm[i].pbest_f = swarm[i].f;
                swarm[i].pbest_x = swarm[i].x;
            }
            log.push_back({it, static_cast<int>(i), swarm[i].x, swarm[i].f});
        }
    }
    return log;
}

}  // namespace placer
