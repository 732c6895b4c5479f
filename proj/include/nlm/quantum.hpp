#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nlm/behavior.hpp"
#include "nlm/scenario.hpp"

namespace nlm {

/// Pure two-qubit state cos(alpha)|00> + sin(alpha)|11> in Schmidt form,
/// restricted to 0 <= alpha <= pi/4 so the weights are ordered.
struct PureState {
    double alpha = 0.0;

    explicit PureState(double a) : alpha(a) {
        if (!(a >= 0.0 && a <= std::numbers::pi / 4 + 1e-12))
            throw std::invalid_argument("PureState: alpha must lie in [0, pi/4]");
    }
};

/// A binary measurement direction on the Bloch sphere. The outcome-0 effect
/// is (1 + n.sigma)/2; with `degenerate` set it is replaced by the zero
/// operator, so outcome 0 never occurs.
struct BlochSetting {
    double theta = 0.0;  // polar angle in [0, pi]
    double phi = 0.0;    // azimuth in [0, 2*pi)
    bool degenerate = false;

    Eigen::Vector3d direction() const {
        return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                std::cos(theta)};
    }
};

struct SettingsConfig {
    std::vector<BlochSetting> alice, bob;

    Scenario scenario() const {
        return {static_cast<int>(alice.size()), static_cast<int>(bob.size())};
    }
};

/// Closed-form behavior of the state under projective (or degenerate)
/// measurements:
///   P_A(0)    = (1 + a_z cos 2a) / 2
///   P_B(0)    = (1 + b_z cos 2a) / 2
///   P_AB(0,0) = [1 + cos 2a (a_z + b_z) + a_z b_z + sin 2a (a_x b_x - a_y b_y)] / 4
/// Degenerate settings contribute 0 to their marginal and all their joints.
inline CGPoint<double> quantum_point(const PureState& state, const SettingsConfig& cfg) {
    const Scenario sc = cfg.scenario();
    const double c2 = std::cos(2 * state.alpha);
    const double s2 = std::sin(2 * state.alpha);
    VecX<double> ma(sc.m_a), mb(sc.m_b);
    MatX<double> joint(sc.m_a, sc.m_b);
    std::vector<Eigen::Vector3d> avec(cfg.alice.size()), bvec(cfg.bob.size());
    for (int i = 0; i < sc.m_a; ++i) {
        avec[static_cast<size_t>(i)] = cfg.alice[static_cast<size_t>(i)].direction();
        ma[i] = cfg.alice[static_cast<size_t>(i)].degenerate
                    ? 0.0
                    : 0.5 * (1.0 + avec[static_cast<size_t>(i)].z() * c2);
    }
    for (int j = 0; j < sc.m_b; ++j) {
        bvec[static_cast<size_t>(j)] = cfg.bob[static_cast<size_t>(j)].direction();
        mb[j] = cfg.bob[static_cast<size_t>(j)].degenerate
                    ? 0.0
                    : 0.5 * (1.0 + bvec[static_cast<size_t>(j)].z() * c2);
    }
    for (int i = 0; i < sc.m_a; ++i)
        for (int j = 0; j < sc.m_b; ++j) {
            if (cfg.alice[static_cast<size_t>(i)].degenerate ||
                cfg.bob[static_cast<size_t>(j)].degenerate) {
                joint(i, j) = 0.0;
                continue;
            }
            const Eigen::Vector3d& a = avec[static_cast<size_t>(i)];
            const Eigen::Vector3d& b = bvec[static_cast<size_t>(j)];
            joint(i, j) = 0.25 * (1.0 + c2 * (a.z() + b.z()) + a.z() * b.z() +
                                  s2 * (a.x() * b.x() - a.y() * b.y()));
        }
    return {sc, std::move(ma), std::move(mb), std::move(joint)};
}

// ---- closed-form families for the 4-vs-3-settings facet ---------------------

/// In-plane family, valid everywhere, optimal for small Schmidt angles.
/// All directions lie in the (x,z) plane; only theta_a and theta_b vary.
inline SettingsConfig m4322_family1_settings(double theta_a, double theta_b) {
    const double pi = std::numbers::pi;
    SettingsConfig cfg;
    cfg.alice = {{pi, 0.0}, {theta_a, pi}, {pi / 2, pi}, {theta_a, 0.0}};
    cfg.bob = {{theta_b, pi}, {theta_b, 0.0}, {pi, 0.0}};
    return cfg;
}

inline double m4322_family1(double alpha, double theta_a, double theta_b) {
    const double c2 = std::cos(2 * alpha), s2 = std::sin(2 * alpha);
    const double ca = std::cos(theta_a), sa = std::sin(theta_a);
    const double cb = std::cos(theta_b), sb = std::sin(theta_b);
    return 0.5 * (-3.0 + c2 + ca - cb * (1.0 + c2) + ca * cb + sb * (1.0 + sa) * s2);
}

/// Out-of-plane family, optimal for larger Schmidt angles; a single
/// parameter theta_b depends on the state.
inline SettingsConfig m4322_family2_settings(double theta_b) {
    const double pi = std::numbers::pi;
    SettingsConfig cfg;
    cfg.alice = {{pi, 0.0}, {pi / 2, 5 * pi / 6}, {pi / 2, pi / 2}, {pi / 2, 7 * pi / 6}};
    cfg.bob = {{theta_b, 4 * pi / 3}, {theta_b, 2 * pi / 3}, {theta_b, 0.0}};
    return cfg;
}

inline double m4322_family2(double alpha, double theta_b) {
    const double c2 = std::cos(2 * alpha), s2 = std::sin(2 * alpha);
    const double cb = std::cos(theta_b), sb = std::sin(theta_b);
    return 0.25 * (-7.0 + c2 - 3.0 * cb * (1.0 + c2) + 3.0 * std::sqrt(3.0) * sb * s2);
}

/// Analytic maximizer of the second family over theta_b.
inline double m4322_thetab_opt(double alpha) {
    const double c2 = std::cos(2 * alpha), s2 = std::sin(2 * alpha);
    return std::numbers::pi - std::atan(std::sqrt(3.0) * s2 / (1.0 + c2));
}

struct SmallAlphaRow {
    double alpha;
    double value;          // family-2 value at the analytic optimum
    double quadratic_ref;  // alpha^2 / 4
    bool positive;
};

struct SmallAlphaReport {
    std::vector<SmallAlphaRow> rows;
    bool all_positive = true;
};

/// Evaluates the small-angle behavior of the second family at its analytic
/// optimum: values must stay positive and track alpha^2/4 to fourth order.
inline SmallAlphaReport small_alpha_bound_check(const std::vector<double>& alphas) {
    SmallAlphaReport rep;
    for (double a : alphas) {
        SmallAlphaRow row{};
        row.alpha = a;
        row.value = m4322_family2(a, m4322_thetab_opt(a));
        row.quadratic_ref = a * a / 4.0;
        row.positive = a > 0.0 ? row.value > 0.0 : row.value >= -1e-15;
        if (a > 0.0 && !row.positive) rep.all_positive = false;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace nlm
