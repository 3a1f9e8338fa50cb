#include "placer/run.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace placer {

namespace {

using nlohmann::json;

Pose pose_from_json6(const json& a, const char* field) {
    if (!a.is_array() || a.size() != 6)
        throw std::invalid_argument(std::string(field) + ": expected [x,y,z,phi,theta,psi]");
    Vec6 v;
    for (int i = 0; i < 6; ++i) v[i] = a[i].get<double>();
    return pose_from_xyzrpy(v);
}

SaddleSpec saddle_from_json(const json& s) {
    SaddleSpec spec;
    spec.R_major = s.at("R_major").get<double>();
    spec.r_minor = s.at("r_minor").get<double>();
    spec.tilt = s.value("tilt", M_PI / 2);
    spec.bevel = s.value("bevel", 0.0);
    spec.camera_in_axis = s.value("camera_in_axis", false);
    spec.lead_in = s.value("lead_in", 0.05);
    spec.samples = s.value("samples", 180);
    return spec;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig cfg;

    const auto& robot = j.value("robot", json("crx10ia_l"));
    cfg.robot = load_robot_model_json(robot.is_string() ? robot.get<std::string>()
                                                        : robot.dump());
    cfg.tcp = j.contains("tcp") ? pose_from_json6(j["tcp"], "tcp") : Pose::identity();

    if (!j.contains("trajectory"))
        throw std::invalid_argument("trajectory: missing (need saddle, poses, or file)");
    const auto& tr = j["trajectory"];
    const int sources = tr.contains("saddle") + tr.contains("poses") + tr.contains("file");
    if (sources != 1)
        throw std::invalid_argument("trajectory: exactly one of saddle/poses/file required");
    if (tr.contains("saddle")) {
        cfg.trajectory = generate_saddle(saddle_from_json(tr["saddle"]));
    } else if (tr.contains("poses")) {
        cfg.trajectory = trajectory_from_json(tr.dump());
    } else {
        std::ifstream f(tr["file"].get<std::string>());
        if (!f) throw std::invalid_argument("trajectory.file: cannot open " +
                                            tr["file"].get<std::string>());
        std::stringstream ss;
        ss << f.rdbuf();
        cfg.trajectory = trajectory_from_json(ss.str());
    }

    if (j.contains("search")) {
        const auto& s = j["search"];
        if (s.contains("bounds")) {
            const auto& b = s["bounds"];
            cfg.bounds.lo = Vec2(b[0][0].get<double>(), b[0][1].get<double>());
            cfg.bounds.hi = Vec2(b[1][0].get<double>(), b[1][1].get<double>());
            if (!(cfg.bounds.lo.x() < cfg.bounds.hi.x() &&
                  cfg.bounds.lo.y() < cfg.bounds.hi.y()))
                throw std::invalid_argument("search.bounds: lo must be < hi per axis");
        }
        cfg.z_offset = s.value("z_offset", 0.0);
        if (s.contains("forbidden_region")) {
            Disk2 d;
            d.center = Vec2(s["forbidden_region"].at("center")[0].get<double>(),
                            s["forbidden_region"].at("center")[1].get<double>());
            d.radius = s["forbidden_region"].at("radius").get<double>();
            cfg.forbidden_region = d;
        }
    }

    const std::string mode = j.value("mode", "pso");
    if (mode == "grid")
        cfg.mode = ExploreMode::grid;
    else if (mode == "pso")
        cfg.mode = ExploreMode::pso;
    else
        throw std::invalid_argument("mode: must be 'grid' or 'pso'");
    cfg.grid_step = j.value("grid_step", 0.1);
    if (!(cfg.grid_step > 0.0)) throw std::invalid_argument("grid_step: must be > 0");

    if (j.contains("swarm")) {
        const auto& s = j["swarm"];
        cfg.swarm.n_cluster = s.value("n_cluster", 4);
        cfg.swarm.iterations = s.value("iterations", 50);
        cfg.swarm.w = s.value("w", 0.8);
        cfg.swarm.c1 = s.value("c1", 0.35);
        cfg.swarm.c2 = s.value("c2", 0.15);
        cfg.swarm.e = s.value("e", 0.2);
        cfg.swarm.seed = s.value("seed", std::uint64_t{1});
        cfg.swarm.centered_exploration = s.value("centered_exploration", false);
        if (cfg.swarm.n_cluster < 1) throw std::invalid_argument("swarm.n_cluster: must be >= 1");
        if (cfg.swarm.w < 0 || cfg.swarm.c1 < 0 || cfg.swarm.c2 < 0 || cfg.swarm.e < 0)
            throw std::invalid_argument("swarm: coefficients must be >= 0");
    }
    if (const char* env = std::getenv("BASE_PLACER_SEED"))
        cfg.swarm.seed = std::strtoull(env, nullptr, 10);
    cfg.swarm.bounds = cfg.bounds;
    cfg.swarm.forbidden_region = cfg.forbidden_region;

    if (j.contains("sim")) {
        cfg.sim.dp = j["sim"].value("dp", 0.002);
        cfg.sim.det_threshold = j["sim"].value("det_threshold", 1e-3);
        if (!(cfg.sim.dp > 0.0)) throw std::invalid_argument("sim.dp: must be > 0");
    }
    if (j.contains("region")) {
        const auto& r = j["region"];
        cfg.region.alpha = r.value("alpha", 0.05);
        cfg.region.min_radius = r.value("min_radius", 0.05);
        cfg.region.edge_step = r.value("edge_step", 0.01);
        cfg.region.score_eps = r.value("score_eps", 0.0);
    }
    cfg.region.forbidden_region = cfg.forbidden_region;
    cfg.output_dir = j.value("output_dir", "out");

    // canonical echo with every effective value, so a rerun reproduces this run
    json echo = j;
    echo["swarm"]["seed"] = cfg.swarm.seed;
    echo["mode"] = mode;
    echo["grid_step"] = cfg.grid_step;
    cfg.echo = echo.dump(2);
    return cfg;
}

double placement_score(const RunConfig& cfg, const Vec2& xy) {
    const Pose base = base_pose_at(xy, cfg.trajectory, cfg.z_offset);
    return evaluate_placement(cfg.robot, cfg.trajectory, base, cfg.tcp, cfg.sim);
}

ExploreResult run_explore(const RunConfig& cfg, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    ExploreResult res;
    const Vec3 c3 = cfg.trajectory.centroid();
    const Vec2 center(c3.x(), c3.y());
    const Objective objective = [&](const Vec2& xy) { return placement_score(cfg, xy); };

    if (cfg.mode == ExploreMode::pso) {
        res.log = optimize(objective, cfg.swarm, center, workers);
    } else {
        std::vector<Vec2> cells;
        const int nx = int(std::floor((cfg.bounds.hi.x() - cfg.bounds.lo.x()) / cfg.grid_step + 1e-9));
        const int ny = int(std::floor((cfg.bounds.hi.y() - cfg.bounds.lo.y()) / cfg.grid_step + 1e-9));
        for (int ix = 0; ix <= nx; ++ix)
            for (int iy = 0; iy <= ny; ++iy)
                cells.emplace_back(
                    (cfg.bounds.lo + cfg.grid_step * Vec2(ix, iy)).cwiseMin(cfg.bounds.hi));
        std::vector<double> scores(cells.size());
        const auto eval_range = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                scores[i] = cfg.forbidden_region && cfg.forbidden_region->contains(cells[i])
                                ? 1.0
                                : objective(cells[i]);
        };
        if (workers <= 1) {
            eval_range(0, cells.size());
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (cells.size() + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const std::size_t lo = w * chunk;
                const std::size_t hi = std::min(cells.size(), lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back([&, lo, hi] { eval_range(lo, hi); });
            }
            for (auto& t : pool) t.join();
        }
        for (std::size_t i = 0; i < cells.size(); ++i)
            res.log.push_back({0, static_cast<int>(i), cells[i], scores[i]});
    }

    PointCloud2 cloud;
    for (const auto& rec : res.log) {
        cloud.points.push_back(rec.x);
        cloud.scores.push_back(rec.score);
    }
    res.regions = analyze(cloud, cfg.region);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::string exploration_to_csv(const ExplorationLog& log) {
    std::string out = "iteration,particle_id,x,y,score\n";
    char buf[160];
    for (const auto& r : log) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", r.iteration,
                      r.particle, r.x.x(), r.x.y(), r.score);
        out += buf;
    }
    return out;
}

std::string report_to_json(const RunConfig& cfg, const ExploreResult& result) {
    json j;
    j["tool_version"] = "0.1.0";
    j["config"] = json::parse(cfg.echo);
    j["n_evaluations"] = result.log.size();
    j["seconds"] = result.seconds;
    j["n_regions"] = result.regions.size();
    if (!result.regions.empty()) {
        const auto& top = result.regions.front();
        j["best_placement"] = {{"x", top.circle.center.x()},
                               {"y", top.circle.center.y()},
                               {"radius", top.circle.radius}};
    } else {
        j["best_placement"] = nullptr;
    }
    return j.dump(2);
}

std::string render_svg(const RunConfig& cfg, const ExploreResult& result) {
    const double w = cfg.bounds.hi.x() - cfg.bounds.lo.x();
    const double h = cfg.bounds.hi.y() - cfg.bounds.lo.y();
    const double scale = 600.0 / std::max(w, h);
    auto X = [&](double x) { return (x - cfg.bounds.lo.x()) * scale; };
    auto Y = [&](double y) { return (cfg.bounds.hi.y() - y) * scale; };

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w * scale << "' height='"
        << h * scale << "' viewBox='0 0 " << w * scale << " " << h * scale << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";

    if (cfg.forbidden_region)
        svg << "<circle cx='" << X(cfg.forbidden_region->center.x()) << "' cy='"
            << Y(cfg.forbidden_region->center.y()) << "' r='"
            << cfg.forbidden_region->radius * scale << "' fill='#cccccc'/>\n";

    for (const auto& r : result.log) {
        std::string color;
        if (r.score <= 0.0) {
            color = "#1f4fd8";  // feasible
        } else {
            const int g = static_cast<int>(200 - 120 * r.score);
            const int rr = static_cast<int>(60 + 180 * r.score);
            char buf[16];
            std::snprintf(buf, sizeof(buf), "#%02x%02x30", rr, g);
            color = buf;
        }
        svg << "<circle cx='" << X(r.x.x()) << "' cy='" << Y(r.x.y())
            << "' r='2.5' fill='" << color << "'/>\n";
    }

    svg << "<polyline fill='none' stroke='red' stroke-width='1.5' points='";
    for (const auto& p : cfg.trajectory.poses) svg << X(p.p.x()) << "," << Y(p.p.y()) << " ";
    svg << "'/>\n";

    auto ring_path = [&](const std::vector<Vec2>& ring) {
        std::ostringstream s;
        s << "<polygon fill='none' stroke='black' stroke-width='1.2' points='";
        for (const auto& p : ring) s << X(p.x()) << "," << Y(p.y()) << " ";
        s << "'/>\n";
        return s.str();
    };
    for (const auto& reg : result.regions) {
        svg << ring_path(reg.polygon.outer);
        for (const auto& hole : reg.polygon.holes) svg << ring_path(hole);
        svg << "<circle cx='" << X(reg.circle.center.x()) << "' cy='"
            << Y(reg.circle.center.y()) << "' r='" << reg.circle.radius * scale
            << "' fill='none' stroke='#e01090' stroke-width='1.5'/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace placer
