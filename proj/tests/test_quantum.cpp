#include <doctest.h>

#include <numbers>
#include <random>

#include "nlm/inequality.hpp"
#include "nlm/nelder_mead.hpp"
#include "nlm/quantum.hpp"
#include "test_helpers.hpp"

using nlm::BlochSetting;
using nlm::PureState;
using nlm::Scenario;
using nlm::SettingsConfig;

namespace {

constexpr double kPi = std::numbers::pi;

double eval_double(const nlm::CGInequality& ineq, const nlm::CGPoint<double>& p) {
    return nlm::evaluate(ineq, p);
}

/// Small 2-parameter maximization of the in-plane family: dense grid plus a
/// simplex refinement. Independent of optimize_settings.
double family1_max(double alpha) {
    double best = -1e9, best_ta = 0, best_tb = 0;
    const int n = 96;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) {
            double ta = 2 * kPi * a / n - kPi, tb = 2 * kPi * b / n - kPi;
            double v = nlm::m4322_family1(alpha, ta, tb);
            if (v > best) {
                best = v;
                best_ta = ta;
                best_tb = tb;
            }
        }
    auto obj = [alpha](const Eigen::VectorXd& x) {
        return -nlm::m4322_family1(alpha, x[0], x[1]);
    };
    Eigen::VectorXd x0(2);
    x0 << best_ta, best_tb;
    nlm::NelderMeadOptions opts;
    opts.x_tol = 1e-12;
    return -nlm::nelder_mead_minimize(obj, x0, 0.05, opts).value;
}

}  // namespace

TEST_CASE("state validation") {
    CHECK_THROWS_AS(PureState(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(PureState(1.0), std::invalid_argument);
    CHECK(PureState(kPi / 4).alpha == doctest::Approx(kPi / 4));
}

TEST_CASE("maximally entangled state with both settings on +z") {
    SettingsConfig cfg;
    cfg.alice = {{0.0, 0.0}, {0.0, 0.0}};
    cfg.bob = {{0.0, 0.0}, {0.0, 0.0}};
    auto p = nlm::quantum_point(PureState(kPi / 4), cfg);
    for (int i = 0; i < 2; ++i) CHECK(p.marg_a()[i] == doctest::Approx(0.5).epsilon(1e-12));
    for (int j = 0; j < 2; ++j) CHECK(p.marg_b()[j] == doctest::Approx(0.5).epsilon(1e-12));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(p.joint()(i, j) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("product state factorizes") {
    std::mt19937_64 rng(2);
    for (int iter = 0; iter < 100; ++iter) {
        auto cfg = test_helpers::random_config(Scenario(3, 3), rng);
        auto p = nlm::quantum_point(PureState(0.0), cfg);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(p.joint()(i, j) ==
                      doctest::Approx(p.marg_a()[i] * p.marg_b()[j]).epsilon(1e-12));
    }
}

TEST_CASE("closed form equals the 4-dimensional operator oracle") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(0.0, kPi / 4);
    for (int iter = 0; iter < 1000; ++iter) {
        PureState state(angle(rng));
        auto cfg = test_helpers::random_config(Scenario(3, 3), rng);
        auto fast = nlm::quantum_point(state, cfg);
        auto slow = test_helpers::oracle_point(state, cfg);
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(fast.marg_a()[i] - slow.marg_a()[i]) <= 1e-12);
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(fast.marg_b()[j] - slow.marg_b()[j]) <= 1e-12);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(fast.joint()(i, j) - slow.joint()(i, j)) <= 1e-12);
    }
}

TEST_CASE("quantum behaviors satisfy the CG cone bounds") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(0.0, kPi / 4);
    for (int iter = 0; iter < 1000; ++iter) {
        PureState state(angle(rng));
        auto cfg = test_helpers::random_config(Scenario(3, 3), rng);
        auto p = nlm::quantum_point(state, cfg);  // constructor enforces the bounds
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(p.joint()(i, j) >= -1e-12);
                CHECK(p.joint()(i, j) <= std::min(p.marg_a()[i], p.marg_b()[j]) + 1e-12);
                CHECK(p.marg_a()[i] + p.marg_b()[j] - p.joint()(i, j) <= 1.0 + 1e-12);
            }
    }
}

TEST_CASE("degenerate settings zero out their marginal and joints, oracle agrees") {
    std::mt19937_64 rng(7);
    auto cfg = test_helpers::random_config(Scenario(3, 3), rng);
    cfg.alice[1].degenerate = true;
    cfg.bob[2].degenerate = true;
    PureState state(0.3);
    auto p = nlm::quantum_point(state, cfg);
    CHECK(p.marg_a()[1] == 0.0);
    CHECK(p.marg_b()[2] == 0.0);
    for (int j = 0; j < 3; ++j) CHECK(p.joint()(1, j) == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(p.joint()(i, 2) == 0.0);

    auto slow = test_helpers::oracle_point(state, cfg);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(p.joint()(i, j) - slow.joint()(i, j)) <= 1e-12);
}

TEST_CASE("in-plane family formula matches the general pipeline") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(0.0, kPi / 4);
    std::uniform_real_distribution<double> theta(0.0, kPi);
    auto m4322 = nlm::builtin("m4322");
    for (int iter = 0; iter < 300; ++iter) {
        double alpha = angle(rng), ta = theta(rng), tb = theta(rng);
        double closed = nlm::m4322_family1(alpha, ta, tb);
        double pipeline = eval_double(
            m4322, nlm::quantum_point(PureState(alpha), nlm::m4322_family1_settings(ta, tb)));
        CHECK(std::abs(closed - pipeline) <= 1e-12);
    }
}

TEST_CASE("out-of-plane family formula matches the general pipeline") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> angle(0.0, kPi / 4);
    std::uniform_real_distribution<double> theta(0.0, kPi);
    auto m4322 = nlm::builtin("m4322");
    for (int iter = 0; iter < 300; ++iter) {
        double alpha = angle(rng), tb = theta(rng);
        double closed = nlm::m4322_family2(alpha, tb);
        double pipeline = eval_double(
            m4322, nlm::quantum_point(PureState(alpha), nlm::m4322_family2_settings(tb)));
        CHECK(std::abs(closed - pipeline) <= 1e-12);
    }
}

TEST_CASE("analytic optimum of the out-of-plane family is stationary") {
    for (double alpha : {0.1, 0.3, kPi / 4}) {
        double tb = nlm::m4322_thetab_opt(alpha);
        // analytic derivative of the family in theta_b
        double c2 = std::cos(2 * alpha), s2 = std::sin(2 * alpha);
        double deriv =
            0.25 * (3.0 * std::sin(tb) * (1.0 + c2) + 3.0 * std::sqrt(3.0) * std::cos(tb) * s2);
        CHECK(std::abs(deriv) <= 1e-10);
        // and it is a maximum: nearby values are lower
        CHECK(nlm::m4322_family2(alpha, tb) >= nlm::m4322_family2(alpha, tb + 1e-4));
        CHECK(nlm::m4322_family2(alpha, tb) >= nlm::m4322_family2(alpha, tb - 1e-4));
    }
}

TEST_CASE("small-angle violation tracks alpha^2/4") {
    auto report = nlm::small_alpha_bound_check({0.0, 0.005, 0.01, 0.02, 0.1});
    CHECK(report.all_positive);
    CHECK(report.rows[0].value == doctest::Approx(0.0).epsilon(1e-12));
    for (size_t k = 1; k < report.rows.size(); ++k) {
        const auto& row = report.rows[k];
        CHECK(row.value > 0.0);
        double ratio = row.value / row.quadratic_ref;
        if (row.alpha <= 0.02) CHECK(std::abs(ratio - 1.0) <= 10.0 * row.alpha * row.alpha);
    }
    // alpha = 0.1 keeps the quadratic-bound constant: deviation <= 10 alpha^2
    // (direct evaluation gives 7.0%, so the constant is about 7)
    const auto& last = report.rows.back();
    CHECK(std::abs(last.value / last.quadratic_ref - 1.0) <= 10.0 * last.alpha * last.alpha);
    CHECK(std::abs(last.value / last.quadratic_ref - 1.0) >= 0.05);
}

TEST_CASE("product states cannot violate the in-plane family") {
    CHECK(family1_max(0.0) <= 1e-9);
    CHECK(family1_max(0.0) >= -1e-9);  // the bound is attained at the poles
}

TEST_CASE("in-plane family reproduces the four-settings optimum near pi/12") {
    CHECK(std::abs(family1_max(kPi / 12) - 0.0102) <= 2e-4);
}

TEST_CASE("family crossover: in-plane wins below pi/10.6, out-of-plane above") {
    double below = kPi / 10.6 - 0.08, above = kPi / 10.6 + 0.08;
    CHECK(family1_max(below) >= nlm::m4322_family2(below, nlm::m4322_thetab_opt(below)));
    CHECK(family1_max(above) <= nlm::m4322_family2(above, nlm::m4322_thetab_opt(above)) + 1e-9);
}

TEST_CASE("degenerate reduction: a 4422 table with dead settings acts as its 3322 core") {
    // a 4422 inequality whose live block is the strengthened 3322 form;
    // Alice's 4th and Bob's 1st settings only carry coefficients that the
    // degenerate (always-outcome-1) measurements kill pointwise
    auto m3322 = nlm::builtin("m3322");
    Scenario sc4422(4, 4);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long long> coeff(-3, 3);
    nlm::VecX<nlm::Rational> ca(4), cb(4);
    nlm::MatX<nlm::Rational> cj(4, 4);
    for (int i = 0; i < 4; ++i) ca[i] = nlm::Rational(coeff(rng));
    for (int j = 0; j < 4; ++j) cb[j] = nlm::Rational(coeff(rng));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) cj(i, j) = nlm::Rational(coeff(rng));
    for (int i = 0; i < 3; ++i) ca[i] = m3322.coeff_a[i];
    for (int j = 0; j < 3; ++j) cb[j + 1] = m3322.coeff_b[j];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) cj(i, j + 1) = m3322.coeff_joint(i, j);
    nlm::CGInequality m4422("m4422_synthetic", sc4422, ca, cb, cj);

    std::uniform_real_distribution<double> angle(0.0, kPi / 4);
    for (int iter = 0; iter < 100; ++iter) {
        PureState state(angle(rng));
        auto cfg = test_helpers::random_config(sc4422, rng);
        cfg.alice[3].degenerate = true;
        cfg.bob[0].degenerate = true;
        double big = eval_double(m4422, nlm::quantum_point(state, cfg));

        SettingsConfig core;
        core.alice = {cfg.alice[0], cfg.alice[1], cfg.alice[2]};
        core.bob = {cfg.bob[1], cfg.bob[2], cfg.bob[3]};
        double small = eval_double(m3322, nlm::quantum_point(state, core));
        CHECK(std::abs(big - small) <= 1e-12);
    }
}
