#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "nlm/inequality.hpp"
#include "nlm/nelder_mead.hpp"
#include "nlm/parallel.hpp"
#include "nlm/quantum.hpp"

namespace nlm {

struct OptimizeOptions {
    int restarts = 64;
    uint64_t seed = 1;
    bool plane_xz = false;  // restrict all azimuths to {0, pi}
    int max_evals = 10000;
    double x_tol = 1e-9;
};

struct OptimizeResult {
    double value = 0.0;
    SettingsConfig config;
};

namespace detail {

/// Inequality coefficients converted to dense doubles once per run.
struct DenseFunctional {
    Eigen::VectorXd ca, cb;
    Eigen::MatrixXd cj;

    explicit DenseFunctional(const CGInequality& ineq)
        : ca(ineq.scenario.m_a), cb(ineq.scenario.m_b),
          cj(ineq.scenario.m_a, ineq.scenario.m_b) {
        for (int i = 0; i < ineq.scenario.m_a; ++i) ca[i] = ineq.coeff_a[i].to_double();
        for (int j = 0; j < ineq.scenario.m_b; ++j) cb[j] = ineq.coeff_b[j].to_double();
        for (int i = 0; i < ineq.scenario.m_a; ++i)
            for (int j = 0; j < ineq.scenario.m_b; ++j) cj(i, j) = ineq.coeff_joint(i, j).to_double();
    }

    double operator()(const CGPoint<double>& p) const {
        double v = ca.dot(p.marg_a()) + cb.dot(p.marg_b());
        v += cj.cwiseProduct(p.joint()).sum();
        return v;
    }
};

inline SettingsConfig config_from_params(const Scenario& sc, const Eigen::VectorXd& params,
                                         bool plane_xz) {
    SettingsConfig cfg;
    cfg.alice.resize(static_cast<size_t>(sc.m_a));
    cfg.bob.resize(static_cast<size_t>(sc.m_b));
    const double pi = std::numbers::pi;
    auto assign = [&](BlochSetting& s, int base) {
        if (plane_xz) {
            // one signed polar angle; negative values sit at azimuth pi
            double t = std::remainder(params[base], 2 * pi);
            s.theta = std::abs(t);
            s.phi = t >= 0 ? 0.0 : pi;
        } else {
            double t = std::remainder(params[2 * base], 2 * pi);
            double ph = params[2 * base + 1];
            if (t < 0) {
                t = -t;
                ph += pi;
            }
            s.theta = t;
            s.phi = ph - 2 * pi * std::floor(ph / (2 * pi));
        }
    };
    for (int i = 0; i < sc.m_a; ++i) assign(cfg.alice[static_cast<size_t>(i)], i);
    for (int j = 0; j < sc.m_b; ++j) assign(cfg.bob[static_cast<size_t>(j)], sc.m_a + j);
    return cfg;
}

inline uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// The azimuth gauge is fixed by reflecting all azimuths whenever the first
/// off-axis setting reports phi above pi; the correlations only see
/// cos(phi_A + phi_B), so the reflected configuration is equivalent.
inline SettingsConfig canonicalize_config(SettingsConfig cfg) {
    const double pi = std::numbers::pi;
    const double eps = 1e-9;
    auto all = [&cfg]() {
        std::vector<BlochSetting*> v;
        for (auto& s : cfg.alice) v.push_back(&s);
        for (auto& s : cfg.bob) v.push_back(&s);
        return v;
    }();
    for (BlochSetting* s : all) {
        if (std::sin(s->theta) <= eps) continue;
        double ph = s->phi;
        if (std::abs(ph) <= eps || std::abs(ph - pi) <= eps) continue;
        if (ph > pi)
            for (BlochSetting* t : all) t->phi = t->phi > eps ? 2 * pi - t->phi : t->phi;
        break;
    }
    return cfg;
}

/// Multi-start derivative-free maximization of the inequality expectation
/// over the measurement angles. Deterministic for a fixed seed; the best
/// value is monotone in the number of restarts.
inline OptimizeResult optimize_settings(const CGInequality& ineq, const PureState& state,
                                        const OptimizeOptions& options = {}) {
    if (options.restarts < 1) throw std::invalid_argument("optimize_settings: restarts must be >= 1");
    const Scenario& sc = ineq.scenario;
    const detail::DenseFunctional functional(ineq);
    const int n_settings = sc.m_a + sc.m_b;
    const int dim = options.plane_xz ? n_settings : 2 * n_settings;
    const double pi = std::numbers::pi;

    auto objective = [&](const Eigen::VectorXd& params) {
        return -functional(quantum_point(state, detail::config_from_params(sc, params, options.plane_xz)));
    };

    struct Candidate {
        double value;
        Eigen::VectorXd params;
    };
    auto run_restart = [&](uint64_t k) {
        std::mt19937_64 rng(detail::splitmix64(options.seed ^ (k * 0x9e3779b97f4a7c15ULL)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Eigen::VectorXd x0(dim);
        if (options.plane_xz) {
            for (int p = 0; p < dim; ++p) x0[p] = (2.0 * unit(rng) - 1.0) * pi;
        } else {
            for (int s = 0; s < n_settings; ++s) {
                x0[2 * s] = unit(rng) * pi;
                x0[2 * s + 1] = unit(rng) * 2 * pi;
            }
        }
        NelderMeadOptions nm;
        nm.max_evals = options.max_evals;
        nm.x_tol = options.x_tol;
        NelderMeadResult r = nelder_mead_minimize(objective, x0, 0.4, nm);
        return Candidate{-r.value, std::move(r.x)};
    };

    std::vector<Candidate> candidates =
        parallel_map<Candidate>(static_cast<uint64_t>(options.restarts), run_restart);
    const Candidate* best = &candidates[0];
    for (const Candidate& c : candidates)
        if (c.value > best->value) best = &c;

    OptimizeResult result;
    result.value = best->value;
    result.config =
        canonicalize_config(detail::config_from_params(sc, best->params, options.plane_xz));
    return result;
}

struct SweepPoint {
    double alpha = 0.0;
    double value = 0.0;
    SettingsConfig config;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    size_t argmax_index = 0;
    double alpha_at_max = 0.0;
    double max_value = 0.0;
    std::optional<double> positive_upper_edge;  // largest alpha with value > 0
};

struct SweepOptions {
    OptimizeOptions optimize;
    double edge_tol = 1e-4;  // bisection tolerance on alpha, radians
};

inline std::vector<double> alpha_grid(double lo, double hi, int steps) {
    if (steps < 2) throw std::invalid_argument("alpha_grid: need at least 2 steps");
    std::vector<double> g(static_cast<size_t>(steps));
    for (int k = 0; k < steps; ++k) g[static_cast<size_t>(k)] = lo + (hi - lo) * k / (steps - 1);
    return g;
}

/// Optimizes per grid point and locates the upper edge of the violating
/// region by bisection between the bracketing grid points.
inline SweepResult sweep_alpha(const CGInequality& ineq, const std::vector<double>& alphas,
                               const SweepOptions& options = {}) {
    if (alphas.empty()) throw std::invalid_argument("sweep_alpha: empty grid");
    const double pi = std::numbers::pi;
    for (size_t k = 0; k < alphas.size(); ++k) {
        if (!(alphas[k] >= 0.0 && alphas[k] <= pi / 4 + 1e-12))
            throw std::invalid_argument("sweep_alpha: grid point outside [0, pi/4]");
        if (k && alphas[k] <= alphas[k - 1])
            throw std::invalid_argument("sweep_alpha: grid must be strictly increasing");
    }

    SweepResult result;
    result.points = parallel_map<SweepPoint>(alphas.size(), [&](uint64_t k) {
        OptimizeResult r = optimize_settings(ineq, PureState(alphas[k]), options.optimize);
        return SweepPoint{alphas[k], r.value, std::move(r.config)};
    });

    for (size_t k = 0; k < result.points.size(); ++k)
        if (result.points[k].value > result.points[result.argmax_index].value) result.argmax_index = k;
    result.alpha_at_max = result.points[result.argmax_index].alpha;
    result.max_value = result.points[result.argmax_index].value;

    size_t last_positive = result.points.size();
    for (size_t k = result.points.size(); k-- > 0;)
        if (result.points[k].value > 0.0) {
            last_positive = k;
            break;
        }
    if (last_positive < result.points.size()) {
        if (last_positive + 1 == result.points.size()) {
            result.positive_upper_edge = result.points.back().alpha;  // positive at grid end
        } else {
            double lo = result.points[last_positive].alpha;
            double hi = result.points[last_positive + 1].alpha;
            while (hi - lo > options.edge_tol) {
                double mid = 0.5 * (lo + hi);
                double v = optimize_settings(ineq, PureState(mid), options.optimize).value;
                (v > 0.0 ? lo : hi) = mid;
            }
            result.positive_upper_edge = 0.5 * (lo + hi);
        }
    }
    return result;
}

/// Golden-section refinement of the best alpha inside [lo, hi], assuming the
/// optimized curve is unimodal there.
inline SweepPoint maximize_over_alpha(const CGInequality& ineq, double lo, double hi,
                                      const OptimizeOptions& options, double alpha_tol = 1e-4) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    auto value_at = [&](double a) { return optimize_settings(ineq, PureState(a), options).value; };
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = value_at(x1), f2 = value_at(x2);
    while (hi - lo > alpha_tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = value_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = value_at(x1);
        }
    }
    double mid = 0.5 * (lo + hi);
    SweepPoint best;
    best.alpha = mid;
    OptimizeResult r = optimize_settings(ineq, PureState(mid), options);
    best.value = r.value;
    best.config = std::move(r.config);
    return best;
}

// ---- output -----------------------------------------------------------------

namespace detail {

inline std::string real17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Columns: alpha_rad, M_value, then per-setting angles in canonical order.
inline void write_sweep_csv(std::ostream& os, const Scenario& sc, const SweepResult& sweep) {
    os << "alpha_rad,M_value";
    for (int i = 0; i < sc.m_a; ++i) os << ",theta_A" << i << ",phi_A" << i;
    for (int j = 0; j < sc.m_b; ++j) os << ",theta_B" << j << ",phi_B" << j;
    os << "\n";
    for (const SweepPoint& p : sweep.points) {
        os << detail::real17(p.alpha) << "," << detail::real17(p.value);
        for (const BlochSetting& s : p.config.alice)
            os << "," << detail::real17(s.theta) << "," << detail::real17(s.phi);
        for (const BlochSetting& s : p.config.bob)
            os << "," << detail::real17(s.theta) << "," << detail::real17(s.phi);
        os << "\n";
    }
}

inline nlohmann::json settings_to_json(const SettingsConfig& cfg) {
    nlohmann::json j;
    j["alice"] = nlohmann::json::array();
    for (const auto& s : cfg.alice)
        j["alice"].push_back({{"theta", s.theta}, {"phi", s.phi}, {"degenerate", s.degenerate}});
    j["bob"] = nlohmann::json::array();
    for (const auto& s : cfg.bob)
        j["bob"].push_back({{"theta", s.theta}, {"phi", s.phi}, {"degenerate", s.degenerate}});
    return j;
}

inline nlohmann::json sweep_to_json(const SweepResult& sweep) {
    nlohmann::json j;
    j["points"] = nlohmann::json::array();
    for (const SweepPoint& p : sweep.points)
        j["points"].push_back(
            {{"alpha", p.alpha}, {"value", p.value}, {"settings", settings_to_json(p.config)}});
    j["alpha_at_max"] = sweep.alpha_at_max;
    j["max_value"] = sweep.max_value;
    if (sweep.positive_upper_edge)
        j["positive_upper_edge"] = *sweep.positive_upper_edge;
    else
        j["positive_upper_edge"] = nullptr;
    return j;
}

}  // namespace nlm
