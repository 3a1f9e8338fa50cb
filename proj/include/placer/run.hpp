#ifndef PLACER_RUN_HPP
#define PLACER_RUN_HPP

#include <string>

#include "placer/region.hpp"
#include "placer/trajectory.hpp"

namespace placer {

enum class ExploreMode { grid, pso };

/// Full run description; parsed from a single JSON document.
struct RunConfig {
    RobotModel robot;
    Pose tcp;
    Trajectory trajectory;       // resolved from inline poses or a saddle spec
    Bounds2 bounds;
    double z_offset = 0.0;       // base plane height relative to the trajectory centroid
    std::optional<Disk2> forbidden_region;
    ExploreMode mode = ExploreMode::pso;
    double grid_step = 0.1;
    SwarmConfig swarm;
    SimOptions sim;
    RegionParams region;
    std::string output_dir = "out";
    std::string echo;            // canonical JSON echo of the parsed config
};

/// Parses and validates a config document. Throws std::invalid_argument
/// with a field-level message on errors. BASE_PLACER_SEED, when set,
/// overrides the configured swarm seed.
RunConfig parse_run_config(const std::string& json_text);

struct ExploreResult {
    ExplorationLog log;
    std::vector<Region> regions;
    double seconds = 0.0;
};

/// Objective for one planar placement under this config.
double placement_score(const RunConfig& cfg, const Vec2& xy);

/// Grid or PSO exploration followed by region analysis.
ExploreResult run_explore(const RunConfig& cfg, int workers = 1);

std::string exploration_to_csv(const ExplorationLog& log);
std::string report_to_json(const RunConfig& cfg, const ExploreResult& result);

/// Score map + regions + trajectory projection as a standalone SVG.
std::string render_svg(const RunConfig& cfg, const ExploreResult& result);

}  // namespace placer

#endif
