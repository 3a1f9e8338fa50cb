#include "placer/ik.hpp"

#include <algorithm>
#include <cmath>

namespace placer {

namespace {

struct ChainAngles {
    double t1, t2, t3;  // matrix angles theta_1..theta_3
};

/// All sub-solves at one (theta4, branch); empty when the branch has no
/// point at this theta4.
std::optional<ChainAngles> solve_chain(const Vec3& P, double t4, Branch b,
                                       double d1, double a3, double d4, double d5) {
    auto t1 = solve_q1(P, t4, b.eps1, d5);
    if (!t1) return std::nullopt;
    auto t3 = solve_q3(P, *t1, t4, b.eps2, d1, a3, d4, d5);
    if (!t3) return std::nullopt;
    auto t2 = solve_q2(P, *t1, *t3, t4, d1, a3, d4, d5);
    if (!t2) return std::nullopt;
    return ChainAngles{*t1, *t2, *t3};
}

double residual_value(const Mat3& R, const ChainAngles& c, double t4) {
    const double s1 = std::sin(c.t1), c1 = std::cos(c.t1);
    const double s23 = std::sin(c.t2 + c.t3), c23 = std::cos(c.t2 + c.t3);
    const double s4 = std::sin(t4), c4 = std::cos(t4);
    return s4 * (R(2, 2) * s23 + R(0, 2) * c1 * c23 + R(1, 2) * s1 * c23) +
           c4 * (R(0, 2) * s1 - R(1, 2) * c1);
}

}  // namespace

Vec3 wrist_center(const Pose& pose, double d6) {
    return pose.p - d6 * pose.R.col(2);
}

std::optional<double> solve_q1(const Vec3& P, double q4, int eps1, double d5) {
    const double X = -P.x();
    const double Y = P.y();
    const double Z = -d5 * std::cos(q4);
    const double den = X * X + Y * Y;
    const double disc = den - Z * Z;
    if (disc < 0.0 || den < 1e-12) return std::nullopt;
    const double rt = std::sqrt(disc);
    const double S1 = (X * Z + eps1 * Y * rt) / den;
    const double C1 = (Y * Z - eps1 * X * rt) / den;
    return std::atan2(S1, C1);
}

std::optional<double> solve_q3(const Vec3& P, double q1, double q4, int eps2,
                               double d1, double a3, double d4, double d5) {
    const double U = P.x() * std::cos(q1) + P.y() * std::sin(q1);
    const double V = P.z() - d1;
    const double X = d5 * std::sin(q4);
    const double Y = -d4;
    const double Z1 = a3;
    const double B1 = 2.0 * Z1 * Y;
    const double B2 = 2.0 * Z1 * X;
    const double B3 = U * U + V * V - X * X - Y * Y - Z1 * Z1;
    const double den = B1 * B1 + B2 * B2;
    const double disc = den - B3 * B3;
    if (disc < 0.0 || den < 1e-12) return std::nullopt;
    const double rt = std::sqrt(disc);
    const double S3 = (B1 * B3 + eps2 * B2 * rt) / den;
    const double C3 = (B2 * B3 - eps2 * B1 * rt) / den;
    return std::atan2(S3, C3);
}

std::optional<double> solve_q2(const Vec3& P, double q1, double q3, double q4,
                               double d1, double a3, double d4, double d5) {
    const double U = P.x() * std::cos(q1) + P.y() * std::sin(q1);
    const double V = P.z() - d1;
    const double s3 = std::sin(q3), c3 = std::cos(q3);
    const double s4 = std::sin(q4);
    // V S2 + U C2 = a3 - d4 S3 + d5 S4 C3
    // -U S2 + V C2 = d4 C3 + d5 S4 S3
    const double X1 = V, Y1 = U, Z1 = a3 - d4 * s3 + d5 * s4 * c3;
    const double X2 = -U, Y2 = V, Z2 = d4 * c3 + d5 * s4 * s3;
    const double det = X1 * Y2 - X2 * Y1;
    if (std::abs(det) < 1e-12) return std::nullopt;
    const double S2 = (Z1 * Y2 - Z2 * Y1) / det;
    const double C2 = (Z2 * X1 - Z1 * X2) / det;
    return std::atan2(S2, C2);
}

std::optional<double> residual(const RobotModel& model, const Pose& pose,
                               double q4, Branch branch) {
    const double d1 = model.rows[0].d, a3 = model.rows[2].a;
    const double d4 = model.rows[3].d, d5 = model.rows[4].d, d6 = model.rows[5].d;
    const Vec3 P = wrist_center(pose, d6);
    auto c = solve_chain(P, q4, branch, d1, a3, d4, d5);
    if (!c) return std::nullopt;
    return residual_value(pose.R, *c, q4);
}

std::vector<ResidualSample> residual_curve(const RobotModel& model, const Pose& pose,
                                           Branch branch, double q4_step) {
    std::vector<ResidualSample> out;
    const int n = std::max(2, static_cast<int>(std::ceil(2.0 * M_PI / q4_step)) + 1);
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double q4 = -M_PI + 2.0 * M_PI * i / (n - 1);
        out.push_back({q4, residual(model, pose, q4, branch)});
    }
    return out;
}

namespace {

/// Assemble the full joint vector at a refined theta4 root.
std::optional<IkSolution> build_solution(const RobotModel& model, const Pose& pose,
                                         const Vec3& P, double t4, Branch b) {
    const double d1 = model.rows[0].d, a3 = model.rows[2].a;
    const double d4 = model.rows[3].d, d5 = model.rows[4].d;
    auto c = solve_chain(P, t4, b, d1, a3, d4, d5);
    if (!c) return std::nullopt;
    const Mat3& R = pose.R;
    const double s1 = std::sin(c->t1), c1 = std::cos(c->t1);
    const double s23 = std::sin(c->t2 + c->t3), c23 = std::cos(c->t2 + c->t3);
    const double s4 = std::sin(t4), c4 = std::cos(t4);

    const double S5 = s4 * (R(0, 2) * s1 - R(1, 2) * c1) -
                      c4 * (R(2, 2) * s23 + c23 * (R(0, 2) * c1 + R(1, 2) * s1));
    const double C5 = R(2, 2) * c23 - s23 * (R(0, 2) * c1 + R(1, 2) * s1);
    const double t5 = std::atan2(S5, C5);

    const double S6 = c4 * (R(1, 0) * c1 - R(0, 0) * s1) - R(2, 0) * s23 * s4 -
                      c23 * s4 * (R(0, 0) * c1 + R(1, 0) * s1);
    const double C6 = c4 * (R(1, 1) * c1 - R(0, 1) * s1) - R(2, 1) * s23 * s4 -
                      c23 * s4 * (R(0, 1) * c1 + R(1, 1) * s1);
    const double t6 = std::atan2(S6, C6);

    IkSolution sol;
    const double thetas[6] = {c->t1, c->t2, c->t3, t4, t5, t6};
    for (int i = 0; i < 6; ++i) sol.q[i] = thetas[i] - model.rows[i].theta_offset;
    sol.q[0] = wrap_pi(sol.q[0]);
    sol.q[3] = wrap_pi(sol.q[3]);
    sol.q[4] = wrap_pi(sol.q[4]);
    sol.q[5] = wrap_pi(sol.q[5]);
    sol.branch = b;
    sol.residual = residual_value(R, *c, t4);
    return sol;
}

double wrapped_max_norm(const Vec6& a, const Vec6& b) {
    double m = 0.0;
    for (int i = 0; i < 6; ++i) m = std::max(m, std::abs(wrap_pi(a[i] - b[i])));
    return m;
}

}  // namespace

std::vector<IkSolution> inverse_kinematics(const RobotModel& model, const Pose& pose,
                                           const IkOptions& opts) {
    const double d1 = model.rows[0].d, a3 = model.rows[2].a;
    const double d4 = model.rows[3].d, d5 = model.rows[4].d, d6 = model.rows[5].d;
    const Vec3 P = wrist_center(pose, d6);

    const auto g_at = [&](double t4, Branch b) -> std::optional<double> {
        auto c = solve_chain(P, t4, b, d1, a3, d4, d5);
        if (!c) return std::nullopt;
        return residual_value(pose.R, *c, t4);
    };

    std::vector<IkSolution> sols;
    const int n = std::max(3, static_cast<int>(std::ceil(2.0 * M_PI / opts.q4_step)) + 1);

    for (Branch b : Branch::all()) {
        std::vector<double> grid(n);
        std::vector<std::optional<double>> g(n);
        for (int i = 0; i < n; ++i) {
            grid[i] = -M_PI + 2.0 * M_PI * i / (n - 1);
            g[i] = g_at(grid[i], b);
        }

        std::vector<double> roots;
        for (int i = 0; i + 1 < n; ++i) {
            if (!g[i] || !g[i + 1]) continue;
            double ga = *g[i], gb = *g[i + 1];
            if (ga == 0.0) {
                roots.push_back(grid[i]);
                continue;
            }
            if (ga * gb >= 0.0) continue;
            double a = grid[i], bq = grid[i + 1];
            while (bq - a > opts.refine_tol) {
                const double m = 0.5 * (a + bq);
                auto gm = g_at(m, b);
                if (!gm) break;  // curve gap opened inside the bracket
                if (ga * *gm <= 0.0) {
                    bq = m;
                    gb = *gm;
                } else {
                    a = m;
                    ga = *gm;
                }
            }
            roots.push_back(0.5 * (a + bq));
        }
        if (n >= 2 && g[n - 1] && *g[n - 1] == 0.0) roots.push_back(grid[n - 1]);

        // curve endpoints: the residual can dive through zero in the sliver
        // between the last valid sample and the discriminant boundary
        for (int i = 0; i + 1 < n; ++i) {
            if (g[i].has_value() == g[i + 1].has_value()) continue;
            const bool left_valid = g[i].has_value();
            double tv = left_valid ? grid[i] : grid[i + 1];
            const double gv = left_valid ? *g[i] : *g[i + 1];
            // bisect the validity boundary, keeping the innermost valid point
            double a = tv, bad = left_valid ? grid[i + 1] : grid[i];
            double ga = gv;
            while (std::abs(bad - a) > opts.refine_tol) {
                const double m = 0.5 * (a + bad);
                auto gm = g_at(m, b);
                if (gm) {
                    a = m;
                    ga = *gm;
                } else {
                    bad = m;
                }
            }
            if (gv * ga >= 0.0) continue;
            double lo = tv, hi = a, glo = gv;
            while (std::abs(hi - lo) > opts.refine_tol) {
                const double m = 0.5 * (lo + hi);
                auto gm = g_at(m, b);
                if (!gm) break;
                if (glo * *gm <= 0.0) {
                    hi = m;
                } else {
                    lo = m;
                    glo = *gm;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }

        // near-tangent double roots: local minima of |G| that dip below 1e-6
        for (int i = 1; i + 1 < n; ++i) {
            if (!g[i - 1] || !g[i] || !g[i + 1]) continue;
            if (*g[i - 1] * *g[i] < 0.0 || *g[i] * *g[i + 1] < 0.0) continue;
            if (std::abs(*g[i]) > std::abs(*g[i - 1]) ||
                std::abs(*g[i]) > std::abs(*g[i + 1]))
                continue;
            double a = grid[i - 1], c = grid[i + 1];
            while (c - a > opts.refine_tol) {
                const double m1 = a + (c - a) / 3.0, m2 = c - (c - a) / 3.0;
                auto g1 = g_at(m1, b), g2 = g_at(m2, b);
                if (!g1 || !g2) break;
                if (std::abs(*g1) < std::abs(*g2))
                    c = m2;
                else
                    a = m1;
            }
            const double m = 0.5 * (a + c);
            auto gm = g_at(m, b);
            if (gm && std::abs(*gm) < 1e-6) roots.push_back(m);
        }

        for (double r : roots) {
            if (auto s = build_solution(model, pose, P, r, b)) sols.push_back(*s);
        }
    }

    std::sort(sols.begin(), sols.end(), [](const IkSolution& a, const IkSolution& b) {
        if (a.q[3] != b.q[3]) return a.q[3] < b.q[3];
        return a.branch.index() < b.branch.index();
    });

    std::vector<IkSolution> unique;
    for (const auto& s : sols) {
        bool dup = false;
        for (const auto& u : unique)
            if (wrapped_max_norm(s.q, u.q) < opts.dedup_tol) {
                dup = true;
                break;
            }
        if (!dup) unique.push_back(s);
    }
    return unique;
}

}  // namespace placer
