#include "placer/robot_model.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace placer {

namespace {
constexpr double kPi = M_PI;
}

void RobotModel::validate() const {
    for (const auto& r : rows) {
        const double a = r.alpha;
        if (!(std::abs(a) < 1e-9 || std::abs(std::abs(a) - kPi / 2) < 1e-9))
            throw std::invalid_argument("alpha must be one of {0, +-pi/2}: " + name);
        if (!std::isfinite(r.d) || !std::isfinite(r.a) || !std::isfinite(r.theta_offset))
            throw std::invalid_argument("non-finite MDH parameter in model " + name);
    }
    for (int i = 0; i < 6; ++i)
        if (!(q_min[i] < q_max[i]))
            throw std::invalid_argument("q_min must be < q_max for every joint: " + name);
    if (capsule_radii.size() < 6)
        throw std::invalid_argument("capsule_radii needs at least 6 entries: " + name);
    for (double r : capsule_radii)
        if (!(r > 0.0))
            throw std::invalid_argument("capsule radii must be positive: " + name);
}

RobotModel crx10ia_l() {
    RobotModel m;
    m.name = "crx10ia_l";
    m.rows = {MdhRow{0.245, 0.0, 0.0, 0.0},
              MdhRow{0.0, 0.0, kPi / 2, 0.0},
              MdhRow{0.0, 0.710, 0.0, 0.0},
              MdhRow{0.540, 0.0, -kPi / 2, 0.0},
              MdhRow{0.150, 0.0, kPi / 2, 0.0},
              MdhRow{0.160, 0.0, -kPi / 2, 0.0}};
    m.q_min << -kPi, -kPi / 2, -kPi, -19.0 * kPi / 18.0, -kPi, -5.0 * kPi / 4.0;
    m.q_max << kPi, 3.0 * kPi / 2.0, 2.0 * kPi, 19.0 * kPi / 18.0, kPi, 5.0 * kPi / 4.0;
    // segment i spans frame origins i..i+1; last entry covers the tool capsule
    m.capsule_radii = {0.09, 0.07, 0.07, 0.06, 0.05, 0.05, 0.03};
    m.validate();
    return m;
}

RobotModel load_robot_model_json(const std::string& json_text) {
    if (json_text == "crx10ia_l") return crx10ia_l();
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (j.is_string()) {
        if (j.get<std::string>() == "crx10ia_l") return crx10ia_l();
        throw std::invalid_argument("unknown robot model name: " + j.get<std::string>());
    }
    RobotModel m;
    m.name = j.value("name", "unnamed");
    const auto& mdh = j.at("mdh");
    if (mdh.size() != 6) throw std::invalid_argument("mdh must list exactly 6 rows");
    for (int i = 0; i < 6; ++i) {
        const auto& r = mdh[i];
        m.rows[i] = {r.at("d").get<double>(), r.at("a").get<double>(),
                     r.at("alpha").get<double>(), r.value("theta_offset", 0.0)};
    }
    const auto& lo = j.at("q_min");
    const auto& hi = j.at("q_max");
    if (lo.size() != 6 || hi.size() != 6)
        throw std::invalid_argument("q_min/q_max must have 6 entries");
    for (int i = 0; i < 6; ++i) {
        m.q_min[i] = lo[i].get<double>();
        m.q_max[i] = hi[i].get<double>();
    }
    for (const auto& r : j.at("capsule_radii")) m.capsule_radii.push_back(r.get<double>());
    m.validate();
    return m;
}

std::string robot_model_to_json(const RobotModel& model) {
    nlohmann::json j;
    j["name"] = model.name;
    for (const auto& r : model.rows)
        j["mdh"].push_back({{"d", r.d}, {"a", r.a}, {"alpha", r.alpha},
                            {"theta_offset", r.theta_offset}});
    for (int i = 0; i < 6; ++i) {
        j["q_min"].push_back(model.q_min[i]);
        j["q_max"].push_back(model.q_max[i]);
    }
    j["capsule_radii"] = model.capsule_radii;
    return j.dump(2);
}

}  // namespace placer
