#include <doctest.h>

#include <random>
#include <unordered_set>

#include "nlm/demo.hpp"
#include "nlm/inequality.hpp"
#include "nlm/strategies.hpp"
#include "test_helpers.hpp"

using nlm::CGPoint;
using nlm::LocalAction;
using nlm::Rational;
using nlm::Scenario;

namespace {

const std::vector<CGPoint<Rational>>& nlm3322() {
    static const auto points = nlm::enumerate_nlm(Scenario(3, 3));
    return points;
}

}  // namespace

TEST_CASE("machine joint blocks") {
    auto block = nlm::nlm_joint(LocalAction::mach0, LocalAction::mach1);  // x.y = 0
    CHECK(block[0] == Rational(1, 2));  // P(0,0)
    CHECK(block[3] == Rational(1, 2));  // P(1,1)
    CHECK(block[1] == Rational(0));
    CHECK(block[2] == Rational(0));

    block = nlm::nlm_joint(LocalAction::mach1, LocalAction::mach1);  // x.y = 1
    CHECK(block[1] == Rational(1, 2));  // P(0,1)
    CHECK(block[2] == Rational(1, 2));  // P(1,0)
    CHECK(block[0] == Rational(0));

    // machine against a deterministic 0: machine side uniform, independent
    block = nlm::nlm_joint(LocalAction::mach1, LocalAction::out0);
    CHECK(block[0] == Rational(1, 2));  // P(0,0)
    CHECK(block[2] == Rational(1, 2));  // P(1,0)
    CHECK(block[1] == Rational(0));
    CHECK(block[3] == Rational(0));

    // flip on one side swaps the correlation
    block = nlm::nlm_joint(LocalAction::flip0, LocalAction::mach0);
    CHECK(block[1] == Rational(1, 2));
    CHECK(block[2] == Rational(1, 2));
}

TEST_CASE("deterministic enumeration counts") {
    CHECK(nlm::enumerate_deterministic(Scenario(3, 3)).size() == 64);
    CHECK(nlm::enumerate_deterministic(Scenario(4, 3)).size() == 128);
    CHECK(nlm::enumerate_deterministic(Scenario(2, 2)).size() == 16);
}

TEST_CASE("single-machine enumeration: 3088 distinct points, all no-signaling at spot check") {
    const auto& points = nlm3322();
    CHECK(points.size() == 3088);

    std::unordered_set<std::string> keys;
    for (const auto& p : points) keys.insert(nlm::canonical_key(p));
    CHECK(keys.size() == points.size());

    // deterministic points are a subset
    for (const auto& d : nlm::enumerate_deterministic(Scenario(3, 3)))
        CHECK(keys.count(nlm::canonical_key(d)) == 1);

    // sampled strategies produce exactly no-signaling full joints
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<uint64_t> code(0, 46655);
    for (int iter = 0; iter < 200; ++iter) {
        auto fj = nlm::full_joint_of_nlm(nlm::nlm_strategy_from_code(Scenario(3, 3), code(rng)));
        auto ns = nlm::is_no_signaling(fj);
        CHECK(ns.ok);
        CHECK(ns.max_deviation == Rational(0));
    }
}

TEST_CASE("key collisions would be table collisions: sampled pairwise check") {
    const auto& points = nlm3322();
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<size_t> idx(0, points.size() - 1);
    for (int iter = 0; iter < 500; ++iter) {
        size_t a = idx(rng), b = idx(rng);
        bool same_key = nlm::canonical_key(points[a]) == nlm::canonical_key(points[b]);
        CHECK(same_key == (points[a] == points[b]));
    }
}

TEST_CASE("2222 machine enumeration contains the box point and all deterministic points") {
    auto points = nlm::enumerate_nlm(Scenario(2, 2));
    CHECK(points.size() == 136);  // distinct points, extremal or not (regression value)

    std::unordered_set<std::string> keys;
    for (const auto& p : points) keys.insert(nlm::canonical_key(p));
    for (const auto& d : nlm::enumerate_deterministic(Scenario(2, 2)))
        CHECK(keys.count(nlm::canonical_key(d)) == 1);
    // the box itself: settings fed straight into the machine
    CHECK(keys.count(nlm::canonical_key(test_helpers::point("0m 1m; 0m 1m"))) == 1);
}

TEST_CASE("output relabelling closure on random strategies") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> action(0, 5);
    auto relabel_action = [](LocalAction a) {
        switch (a) {
            case LocalAction::out0: return LocalAction::out1;
            case LocalAction::out1: return LocalAction::out0;
            case LocalAction::mach0: return LocalAction::flip0;
            case LocalAction::mach1: return LocalAction::flip1;
            case LocalAction::flip0: return LocalAction::mach0;
            case LocalAction::flip1: return LocalAction::mach1;
        }
        return a;
    };
    std::unordered_set<std::string> keys;
    for (const auto& p : nlm3322()) keys.insert(nlm::canonical_key(p));

    for (int iter = 0; iter < 100; ++iter) {
        Scenario sc(3, 3);
        std::vector<LocalAction> a(3), b(3);
        for (auto& v : a) v = static_cast<LocalAction>(action(rng));
        for (auto& v : b) v = static_cast<LocalAction>(action(rng));
        CGPoint<Rational> p = nlm::point_of_nlm(nlm::NLMStrategy(sc, a, b));

        std::vector<LocalAction> ra = a, rb = b;
        for (auto& v : ra) v = relabel_action(v);
        for (auto& v : rb) v = relabel_action(v);
        CGPoint<Rational> q = nlm::point_of_nlm(nlm::NLMStrategy(sc, ra, rb));

        // both-sides output flip in CG coordinates
        nlm::VecX<Rational> ma(3), mb(3);
        nlm::MatX<Rational> joint(3, 3);
        for (int i = 0; i < 3; ++i) ma[i] = Rational(1) - p.marg_a()[i];
        for (int j = 0; j < 3; ++j) mb[j] = Rational(1) - p.marg_b()[j];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                joint(i, j) = Rational(1) - p.marg_a()[i] - p.marg_b()[j] + p.joint()(i, j);
        CHECK(q == CGPoint<Rational>(sc, ma, mb, joint));
        CHECK(keys.count(nlm::canonical_key(q)) == 1);
    }
}

TEST_CASE("two-machine XOR coding reproduces the showcase table") {
    auto p = nlm::point_of_two_nlm(nlm::two_nlm_showcase_3322());
    auto expected =
        test_helpers::prefactor_table(Scenario(3, 3), Rational(1, 2), {{2, 1}, {1, 2}});
    CHECK(p == expected);
    CHECK(nlm::evaluate(nlm::builtin("i3322"), p) == Rational(1));
    CHECK(nlm::evaluate(nlm::builtin("m3322"), p) == Rational(1, 2));
}

TEST_CASE("two-machine strategy with all inputs zero collapses to the coin flip") {
    nlm::TwoNLMStrategy s(Scenario(3, 3), {{0, 0}, {0, 0}, {0, 0}}, {{0, 0}, {0, 0}, {0, 0}});
    CHECK(nlm::point_of_two_nlm(s) == test_helpers::point("0m 0m 0m; 0m 0m 0m"));
}

TEST_CASE("two-machine strategy with silent second round equals one machine, no flips") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> bit(0, 1);
    for (int iter = 0; iter < 40; ++iter) {
        Scenario sc(3, 3);
        std::vector<std::array<int, 2>> xs(3), ys(3);
        std::vector<LocalAction> a(3), b(3);
        for (int i = 0; i < 3; ++i) {
            int x = bit(rng);
            xs[static_cast<size_t>(i)] = {x, 0};
            a[static_cast<size_t>(i)] = x ? LocalAction::mach1 : LocalAction::mach0;
        }
        for (int j = 0; j < 3; ++j) {
            int y = bit(rng);
            ys[static_cast<size_t>(j)] = {y, 0};
            b[static_cast<size_t>(j)] = y ? LocalAction::mach1 : LocalAction::mach0;
        }
        CHECK(nlm::point_of_two_nlm(nlm::TwoNLMStrategy(sc, xs, ys)) ==
              nlm::point_of_nlm(nlm::NLMStrategy(sc, a, b)));
    }
}

TEST_CASE("4-settings extension of the showcase strategies") {
    auto two4 = nlm::point_of_two_nlm(nlm::two_nlm_showcase_4322());
    auto expected = test_helpers::prefactor_table(Scenario(4, 3), Rational(1, 2),
                                                  {{2, 1}, {1, 2}, {3, 2}});
    CHECK(two4 == expected);
    CHECK(nlm::evaluate(nlm::builtin("m4322"), two4) == Rational(1, 2));

    auto bit4 = nlm::one_bit_showcase_point(Scenario(4, 3));
    auto expected_fifth = test_helpers::prefactor_table(Scenario(4, 3), Rational(1, 5),
                                                        {{2, 1}, {1, 2}, {3, 2}});
    CHECK(bit4 == expected_fifth);
    CHECK(nlm::evaluate(nlm::builtin("m4322"), bit4) == Rational(1, 5));
}

TEST_CASE("one-bit strategy tables") {
    auto s1 = nlm::one_bit_showcase_3322()[0];  // [1,1,0; c,1,c | 1,1,0]
    CHECK(s1.notation() == "[1,1,0; c,1,c | 1,1,0]");
    auto fj = nlm::point_of_one_bit(s1);
    // joint (0,0) outcome occurs only at (A2,B0) and (A2,B2)
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Rational expected = (i == 2 && (j == 0 || j == 2)) ? Rational(1) : Rational(0);
            CHECK(fj.p(i, j, 0, 0) == expected);
        }

    // echo strategy: Bob always repeats Alice's message
    auto s3 = nlm::one_bit_showcase_3322()[2];  // [0,1,1; c,c,c | 0,1,1]
    auto fj3 = nlm::point_of_one_bit(s3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(fj3.p(i, j, s3.outputs_a[static_cast<size_t>(i)],
                        s3.messages[static_cast<size_t>(i)]) == Rational(1));
        }

    // product point: no communication content, no-signaling
    nlm::OneBitStrategy all_zero(Scenario(3, 3), {0, 0, 0}, {0, 0, 0},
                                 {nlm::OneBitResponse::zero, nlm::OneBitResponse::zero,
                                  nlm::OneBitResponse::zero});
    CHECK(nlm::is_no_signaling(nlm::point_of_one_bit(all_zero)).ok);

    // the complement response answers with the flipped message
    nlm::OneBitStrategy inverted(Scenario(3, 3), {0, 0, 0}, {1, 0, 1},
                                 {nlm::OneBitResponse::copy_flip, nlm::OneBitResponse::copy,
                                  nlm::OneBitResponse::copy_flip});
    auto fji = nlm::point_of_one_bit(inverted);
    for (int i = 0; i < 3; ++i) {
        int c = inverted.messages[static_cast<size_t>(i)];
        CHECK(fji.p(i, 0, 0, 1 - c) == Rational(1));
        CHECK(fji.p(i, 1, 0, c) == Rational(1));
    }
    CHECK(inverted.notation() == "[0,0,0; !c,c,!c | 1,0,1]");
}

TEST_CASE("one-bit mixture edge cases") {
    auto strategies = nlm::one_bit_showcase_3322();
    CHECK_THROWS_AS(
        nlm::one_bit_mixture(strategies, std::vector<Rational>(5, Rational(1, 4))),
        std::invalid_argument);

    std::vector<nlm::OneBitStrategy> single = {strategies[0]};
    auto fj = nlm::one_bit_mixture(single, std::vector<Rational>{Rational(1)});
    CHECK(fj.blocks() == nlm::point_of_one_bit(strategies[0]).blocks());

    std::vector<nlm::OneBitStrategy> copies(5, strategies[1]);
    auto fj5 = nlm::one_bit_mixture(copies, std::vector<Rational>(5, Rational(1, 5)));
    CHECK(fj5.blocks() == nlm::point_of_one_bit(strategies[1]).blocks());
}

TEST_CASE("notation round trip for the machine strategies") {
    auto s = nlm::single_nlm_showcase_3322();
    CHECK(s.notation() == "[0m 0m 1m; 0m 1m 0m]");
    CHECK(test_helpers::strategy("0m 0m 1m; 0m 1m 0m").notation() == s.notation());
}
