#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "placer/run.hpp"

namespace fs = std::filesystem;
using namespace placer;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    f << content;
}

int cmd_ik(const std::vector<double>& pose_vals, bool as_json,
           const std::string& residual_csv, double q4_step_deg) {
    const auto model = crx10ia_l();
    Vec6 pv;
    for (int i = 0; i < 6; ++i) pv[i] = pose_vals[i];
    const Pose pose = pose_from_xyzrpy(pv);
    IkOptions opts;
    opts.q4_step = q4_step_deg * M_PI / 180.0;

    if (!residual_csv.empty()) {
        std::ostringstream csv;
        csv << "q4,g_mm,g_mp,g_pm,g_pp\n";
        std::array<std::vector<ResidualSample>, 4> curves;
        for (Branch b : Branch::all())
            curves[b.index()] = residual_curve(model, pose, b, opts.q4_step);
        for (std::size_t i = 0; i < curves[0].size(); ++i) {
            csv << curves[0][i].q4;
            for (int k = 0; k < 4; ++k) {
                csv << ",";
                if (curves[k][i].g) csv << *curves[k][i].g;
            }
            csv << "\n";
        }
        write_file(residual_csv, csv.str());
    }

    const auto sols = inverse_kinematics(model, pose, opts);
    if (as_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& s : sols) {
            nlohmann::json e;
            for (int i = 0; i < 6; ++i) e["q"].push_back(s.q[i]);
            e["eps1"] = s.branch.eps1;
            e["eps2"] = s.branch.eps2;
            e["residual"] = s.residual;
            j.push_back(e);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("%-3s %8s %8s %8s %8s %8s %8s  %5s %9s\n", "i", "q1", "q2", "q3",
                    "q4", "q5", "q6", "eps", "residual");
        int i = 1;
        for (const auto& s : sols) {
            std::printf("%-3d %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f  %2d,%2d %9.1e\n", i++,
                        s.q[0], s.q[1], s.q[2], s.q[3], s.q[4], s.q[5], s.branch.eps1,
                        s.branch.eps2, s.residual);
        }
    }
    return sols.empty() ? 2 : 0;
}

int cmd_saddle(const SaddleSpec& spec, const std::string& out) {
    const auto traj = generate_saddle(spec);
    const std::string text = trajectory_to_json(traj);
    if (out.empty())
        std::cout << text << "\n";
    else
        write_file(out, text);
    return 0;
}

int cmd_simulate(const std::string& config_path, double bx, double by, bool as_json) {
    const auto cfg = parse_run_config(read_file(config_path));
    const Pose base = base_pose_at(Vec2(bx, by), cfg.trajectory, cfg.z_offset);

    Trajectory traj_base;
    traj_base.closed = cfg.trajectory.closed;
    for (const auto& p : cfg.trajectory.poses)
        traj_base.poses.push_back(to_base_frame(p, base, cfg.tcp));

    const auto postures = start_postures(cfg.robot, traj_base.poses[0], cfg.sim.ik);
    SimOptions sim = cfg.sim;
    sim.tcp = &cfg.tcp;

    nlohmann::json j = nlohmann::json::array();
    double best = 1.0;
    for (const auto& q0 : postures) {
        const auto out = simulate(cfg.robot, traj_base, q0, sim);
        best = std::min(best, 1.0 - out.completed_fraction);
        nlohmann::json e = nlohmann::json::parse(outcome_to_json(out));
        for (int i = 0; i < 6; ++i) e["q0"].push_back(q0[i]);
        j.push_back(e);
    }
    if (as_json) {
        nlohmann::json root;
        root["base"] = {bx, by};
        root["score"] = postures.empty() ? 1.0 : best;
        root["postures"] = j;
        std::cout << root.dump(2) << "\n";
    } else {
        std::printf("postures: %zu, score: %.4f\n", postures.size(), best);
        for (const auto& e : j)
            std::printf("  completed %.3f  failure %s\n",
                        e["completed_fraction"].get<double>(),
                        e["failure"].get<std::string>().c_str());
    }
    return postures.empty() ? 2 : 0;
}

int cmd_explore(const std::string& config_path, int workers) {
    const auto cfg = parse_run_config(read_file(config_path));
    const auto result = run_explore(cfg, workers);

    const fs::path dir = cfg.output_dir;
    write_file(dir / "exploration.csv", exploration_to_csv(result.log));
    write_file(dir / "regions.json", regions_to_json(result.regions, cfg.region));
    write_file(dir / "report.json", report_to_json(cfg, result));
    write_file(dir / "map.svg", render_svg(cfg, result));

    std::printf("%zu evaluations in %.1f s, %zu region(s)\n", result.log.size(),
                result.seconds, result.regions.size());
    if (result.regions.empty()) return 3;
    const auto& top = result.regions.front();
    std::printf("best placement: x=%.3f y=%.3f radius=%.3f\n", top.circle.center.x(),
                top.circle.center.y(), top.circle.radius);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust base placement for a 6R arm on a constrained trajectory"};
    app.require_subcommand(1);

    auto* ik = app.add_subcommand("ik", "Analytical inverse kinematics of a flange pose");
    std::vector<double> pose_vals;
    bool ik_json = false;
    std::string residual_csv;
    double q4_step_deg = 0.25;
    ik->add_option("--pose", pose_vals, "x y z phi theta psi (m, rad)")
        ->expected(6)
        ->required();
    ik->add_flag("--json", ik_json, "print solutions as JSON");
    ik->add_option("--residual-csv", residual_csv, "write the four residual curves as CSV");
    ik->add_option("--q4-step", q4_step_deg, "q4 grid pitch in degrees");

    auto* saddle = app.add_subcommand("saddle", "Emit a saddle (tube intersection) trajectory");
    SaddleSpec spec;
    std::string saddle_out;
    saddle->add_option("--R-major", spec.R_major, "large tube radius (m)");
    saddle->add_option("--r-minor", spec.r_minor, "small tube radius (m)");
    saddle->add_option("--tilt", spec.tilt, "angle between tube axes (rad)");
    saddle->add_option("--bevel", spec.bevel, "tool tilt from the surface normal (rad)");
    saddle->add_flag("--camera-in-axis", spec.camera_in_axis,
                     "align the tool z axis with the small tube axis");
    saddle->add_option("--lead-in", spec.lead_in, "straight approach length (m)");
    saddle->add_option("--samples", spec.samples, "points per revolution");
    saddle->add_option("--out", saddle_out, "output file (default: stdout)");

    auto* simulate = app.add_subcommand("simulate", "Simulate one base placement");
    std::string sim_config;
    std::vector<double> base_xy;
    bool sim_json = false;
    simulate->add_option("--config", sim_config, "run config JSON")->required();
    simulate->add_option("--base", base_xy, "base position x y (m)")->expected(2)->required();
    simulate->add_flag("--json", sim_json, "print outcomes as JSON");

    auto* explore = app.add_subcommand("explore", "Explore the placement plane and analyze");
    std::string exp_config;
    int workers = 1;
    explore->add_option("--config", exp_config, "run config JSON")->required();
    explore->add_option("--workers", workers, "parallel placement evaluations");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ik->parsed()) return cmd_ik(pose_vals, ik_json, residual_csv, q4_step_deg);
        if (saddle->parsed()) return cmd_saddle(spec, saddle_out);
        if (simulate->parsed())
            return cmd_simulate(sim_config, base_xy[0], base_xy[1], sim_json);
        if (explore->parsed()) return cmd_explore(exp_config, workers);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
