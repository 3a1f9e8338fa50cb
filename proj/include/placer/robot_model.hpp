#ifndef PLACER_ROBOT_MODEL_HPP
#define PLACER_ROBOT_MODEL_HPP

#include <array>
#include <string>
#include <vector>

#include "placer/pose.hpp"

namespace placer {

/// One row of the modified-DH table (Khalil-Kleinfinger convention).
struct MdhRow {
    double d = 0.0;             // joint-to-joint distance (m)
    double a = 0.0;             // offset along previous x (m)
    double alpha = 0.0;         // twist (rad), one of {0, +-pi/2}
    double theta_offset = 0.0;  // constant added to the joint variable (rad)
};

/// 6R serial arm description: MDH table, joint limits, capsule radii.
struct RobotModel {
    std::string name;
    std::array<MdhRow, 6> rows;
    Vec6 q_min;
    Vec6 q_max;
    std::vector<double> capsule_radii;  // one per collision segment

    /// Validates invariants; throws std::invalid_argument on violation.
    void validate() const;
};

/// Built-in Fanuc CRX10iA/L model.
RobotModel crx10ia_l();

/// Parse a model from its JSON document. Throws std::invalid_argument on
/// schema violations. The string "crx10ia_l" resolves to the built-in model.
RobotModel load_robot_model_json(const std::string& json_text);
std::string robot_model_to_json(const RobotModel& model);

}  // namespace placer

#endif
