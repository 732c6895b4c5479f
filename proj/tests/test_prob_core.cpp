#include <doctest.h>

#include <random>
#include <sstream>

#include "nlm/behavior.hpp"
#include "nlm/demo.hpp"
#include "nlm/inequality.hpp"
#include "nlm/strategies.hpp"
#include "test_helpers.hpp"

using nlm::CGPoint;
using nlm::FullJoint;
using nlm::Rational;
using nlm::Scenario;

TEST_CASE("scenario dimensions") {
    CHECK(Scenario(3, 3).d_ns() == 15);
    CHECK(Scenario(4, 3).d_ns() == 19);
    CHECK(Scenario(2, 2).d_ns() == 8);
    CHECK_THROWS_AS(Scenario(1, 3), std::invalid_argument);
    CHECK(nlm::parse_scenario("4322") == Scenario(4, 3));
    CHECK_THROWS_AS(nlm::parse_scenario("3321"), std::invalid_argument);
}

TEST_CASE("cg reduction of the machine showcase strategy") {
    // half-prefactor table with a single zero at joint(A2, B1)
    auto expected = test_helpers::prefactor_table(Scenario(3, 3), Rational(1, 2), {{2, 1}});
    CHECK(test_helpers::point("0m 0m 1m; 0m 1m 0m") == expected);
}

TEST_CASE("cg reduction of deterministic strategies") {
    // all outputs 1: every zero-outcome probability vanishes
    auto zeros = test_helpers::point("1d 1d 1d; 1d 1d 1d");
    CHECK(zeros.to_vector() == nlm::VecX<Rational>::Constant(15, Rational(0)));

    auto p = test_helpers::point("0d 0d 1d; 0d 0d 0d");
    CHECK(p.marg_a()[0] == Rational(1));
    CHECK(p.marg_a()[2] == Rational(0));
    CHECK(p.marg_b() == nlm::VecX<Rational>::Constant(3, Rational(1)));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(p.joint()(i, j) == p.marg_a()[i] * p.marg_b()[j]);
}

TEST_CASE("one-bit five-strategy mixture reduces to the fifth-prefactor table") {
    auto strategies = nlm::one_bit_showcase_3322();
    std::vector<Rational> weights(5, Rational(1, 5));
    FullJoint<Rational> mixture = nlm::one_bit_mixture(strategies, weights);
    auto ns = nlm::is_no_signaling(mixture);
    CHECK(ns.ok);
    CHECK(ns.max_deviation == Rational(0));
    auto expected =
        test_helpers::prefactor_table(Scenario(3, 3), Rational(1, 5), {{2, 1}, {1, 2}});
    CHECK(nlm::cg_from_full(mixture) == expected);
}

TEST_CASE("single one-bit strategy signals and is rejected by cg_from_full") {
    auto s1 = nlm::one_bit_showcase_3322()[0];  // [1,1,0; c,1,c | 1,1,0]
    FullJoint<Rational> fj = nlm::point_of_one_bit(s1);
    auto ns = nlm::is_no_signaling(fj);
    CHECK_FALSE(ns.ok);
    CHECK(ns.max_deviation > Rational(0));
    CHECK_THROWS_AS(nlm::cg_from_full(fj), std::invalid_argument);
    // Bob's B0 marginal depends on Alice's setting: c = (1,1,0)
    CHECK(fj.marginal_b(0, 0, 0) == Rational(0));
    CHECK(fj.marginal_b(0, 0, 2) == Rational(1));
}

TEST_CASE("product deterministic joints are no-signaling with zero deviation") {
    auto fj = nlm::full_joint_of_nlm(test_helpers::strategy("0d 1d 0d; 1d 0d 1d"));
    auto ns = nlm::is_no_signaling(fj);
    CHECK(ns.ok);
    CHECK(ns.max_deviation == Rational(0));
}

TEST_CASE("every strategy block sums to one exactly") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> action(0, 5);
    for (int iter = 0; iter < 200; ++iter) {
        Scenario sc(3, 3);
        std::vector<nlm::LocalAction> a(3), b(3);
        for (auto& x : a) x = static_cast<nlm::LocalAction>(action(rng));
        for (auto& x : b) x = static_cast<nlm::LocalAction>(action(rng));
        auto fj = nlm::full_joint_of_nlm(nlm::NLMStrategy(sc, a, b));
        for (int p = 0; p < sc.pairs(); ++p) {
            Rational sum(0);
            for (int e = 0; e < 4; ++e) sum += fj.blocks()(p, e);
            CHECK(sum == Rational(1));
        }
    }
}

TEST_CASE("full joint constructor rejects unnormalized blocks") {
    Scenario sc(2, 2);
    nlm::MatX<Rational> blocks = nlm::MatX<Rational>::Constant(4, 4, Rational(1, 4));
    blocks(1, 0) = Rational(1, 2);  // block sums to 5/4
    CHECK_THROWS_AS(FullJoint<Rational>(sc, std::move(blocks)), std::invalid_argument);
}

TEST_CASE("mix: identity, weight checks, scenario checks") {
    auto x = test_helpers::point("0m 0m 1m; 0m 1m 0m");
    CHECK(nlm::mix<Rational>({x}, {Rational(1)}) == x);

    auto y = test_helpers::point("0d 0d 0d; 0d 0d 0d");
    CHECK_THROWS_AS(nlm::mix<Rational>({x, y}, {Rational(1, 2), Rational(1, 3)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(nlm::mix<Rational>({x, y}, {Rational(3, 2), Rational(-1, 2)}),
                    std::invalid_argument);

    auto z2222 = test_helpers::point("0d 0d; 0d 0d");
    CHECK_THROWS_AS(nlm::mix<Rational>({x, z2222}, {Rational(1, 2), Rational(1, 2)}),
                    std::invalid_argument);
}

TEST_CASE("uniform machine inputs equal the deterministic coin flip") {
    auto machine = test_helpers::point("0m 0m 0m; 0m 0m 0m");
    auto all_zero_outputs = test_helpers::point("0d 0d 0d; 0d 0d 0d");
    auto all_one_outputs = test_helpers::point("1d 1d 1d; 1d 1d 1d");
    auto coin = nlm::mix<Rational>({all_zero_outputs, all_one_outputs},
                                   {Rational(1, 2), Rational(1, 2)});
    CHECK(machine == coin);
    CHECK(nlm::canonical_key(machine) == nlm::canonical_key(coin));
}

TEST_CASE("mix is affine for inequality evaluation") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> action(0, 5);
    std::uniform_int_distribution<long long> wnum(0, 5);
    auto i3322 = nlm::builtin("i3322");
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<CGPoint<Rational>> pts;
        std::vector<Rational> ws;
        Rational total(0);
        for (int k = 0; k < 4; ++k) {
            std::vector<nlm::LocalAction> a(3), b(3);
            for (auto& v : a) v = static_cast<nlm::LocalAction>(action(rng));
            for (auto& v : b) v = static_cast<nlm::LocalAction>(action(rng));
            pts.push_back(nlm::point_of_nlm(nlm::NLMStrategy(Scenario(3, 3), a, b)));
            Rational w(wnum(rng) + 1, 1);
            ws.push_back(w);
            total += w;
        }
        for (auto& w : ws) w /= total;
        Rational lhs = nlm::evaluate(i3322, nlm::mix(pts, ws));
        Rational rhs(0);
        for (size_t k = 0; k < pts.size(); ++k) rhs += ws[k] * nlm::evaluate(i3322, pts[k]);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("cg reduction preserves inequality evaluation on random mixtures") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> action(0, 5);
    std::uniform_int_distribution<long long> wnum(1, 6);
    auto i3322 = nlm::builtin("i3322");
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<FullJoint<Rational>> joints;
        std::vector<Rational> ws;
        Rational total(0);
        for (int k = 0; k < 3; ++k) {
            std::vector<nlm::LocalAction> a(3), b(3);
            for (auto& v : a) v = static_cast<nlm::LocalAction>(action(rng));
            for (auto& v : b) v = static_cast<nlm::LocalAction>(action(rng));
            joints.push_back(nlm::full_joint_of_nlm(nlm::NLMStrategy(Scenario(3, 3), a, b)));
            Rational w(wnum(rng), 1);
            ws.push_back(w);
            total += w;
        }
        for (auto& w : ws) w /= total;
        FullJoint<Rational> fj = test_helpers::mix_full(joints, ws);

        // the same functional, written directly over the full joint
        Rational direct(0);
        for (int i = 0; i < 3; ++i) direct += i3322.coeff_a[i] * fj.marginal_a(i, 0, 0);
        for (int j = 0; j < 3; ++j) direct += i3322.coeff_b[j] * fj.marginal_b(j, 0, 0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) direct += i3322.coeff_joint(i, j) * fj.p(i, j, 0, 0);

        CHECK(nlm::evaluate(i3322, nlm::cg_from_full(fj)) == direct);
    }
}

TEST_CASE("canonical keys separate points and identify equal tables") {
    auto eq5 = test_helpers::point("0m 0m 1m; 0m 1m 0m");
    auto eq5_again = test_helpers::point("0m 0m 1m; 0m 1m 0m");
    auto zeros = test_helpers::point("1d 1d 1d; 1d 1d 1d");
    CHECK(nlm::canonical_key(eq5) == nlm::canonical_key(eq5_again));
    CHECK(nlm::canonical_key(eq5) != nlm::canonical_key(zeros));
}

TEST_CASE("real-valued points serialize with 17 significant digits") {
    Scenario sc(2, 2);
    nlm::VecX<double> ma(2), mb(2);
    nlm::MatX<double> joint(2, 2);
    ma << 1.0 / 3.0, 0.5;
    mb << 0.25, 2.0 / 3.0;
    joint << 0.25, 1.0 / 3.0, 0.125, 0.5;
    std::vector<CGPoint<double>> pts = {CGPoint<double>(sc, ma, mb, joint)};
    std::ostringstream os;
    nlm::write_points_csv(os, sc, pts);
    CHECK(os.str() ==
          "A0,A1,B0,B1,A0B0,A0B1,A1B0,A1B1\n"
          "0.33333333333333331,0.5,0.25,0.66666666666666663,"
          "0.25,0.33333333333333331,0.125,0.5\n");
}

TEST_CASE("points csv round-trips exactly") {
    Scenario sc(3, 3);
    std::vector<CGPoint<Rational>> pts = {
        test_helpers::point("0m 0m 1m; 0m 1m 0m"),
        test_helpers::point("0d 1d 0f; 1m 0d 1f"),
        nlm::one_bit_showcase_point(sc),
    };
    std::ostringstream os;
    nlm::write_points_csv(os, sc, pts);
    std::istringstream is(os.str());
    auto back = nlm::read_points_csv(is);
    REQUIRE(back.size() == pts.size());
    for (size_t k = 0; k < pts.size(); ++k) CHECK(back[k] == pts[k]);
    // header names the coordinates in canonical order
    CHECK(os.str().substr(0, 9) == "A0,A1,A2,");
}
