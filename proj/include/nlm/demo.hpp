#pragma once

#include <string>
#include <vector>

#include "nlm/behavior.hpp"
#include "nlm/inequality.hpp"
#include "nlm/strategies.hpp"

namespace nlm {

// The showcase strategies behind the demo-points command. These are the
// hand-picked resource witnesses: the single-machine strategy that beats the
// three-settings local facet, the double-machine XOR coding that beats the
// machine facet, and the five-strategy one-bit mixture that does the same
// with communication while staying no-signaling.

inline NLMStrategy single_nlm_showcase_3322() {
    return {Scenario(3, 3),
            {LocalAction::mach0, LocalAction::mach0, LocalAction::mach1},
            {LocalAction::mach0, LocalAction::mach1, LocalAction::mach0}};
}

inline TwoNLMStrategy two_nlm_showcase_3322() {
    return {Scenario(3, 3),
            {{0, 0}, {0, 1}, {1, 0}},
            {{0, 0}, {1, 0}, {0, 1}}};
}

/// Same coding with the extra Alice setting wired like A1.
inline TwoNLMStrategy two_nlm_showcase_4322() {
    return {Scenario(4, 3),
            {{0, 0}, {0, 1}, {1, 0}, {0, 1}},
            {{0, 0}, {1, 0}, {0, 1}}};
}

inline std::vector<OneBitStrategy> one_bit_showcase_3322() {
    using R = OneBitResponse;
    Scenario sc(3, 3);
    return {
        {sc, {1, 1, 0}, {1, 1, 0}, {R::copy, R::one, R::copy}},
        {sc, {1, 0, 1}, {1, 0, 1}, {R::copy, R::copy, R::one}},
        {sc, {0, 1, 1}, {0, 1, 1}, {R::copy, R::copy, R::copy}},
        {sc, {1, 1, 1}, {1, 0, 1}, {R::one, R::one, R::copy}},
        {sc, {1, 1, 1}, {1, 1, 0}, {R::one, R::copy, R::one}},
    };
}

/// The 4-settings variants duplicate A1's output and message onto A3.
inline std::vector<OneBitStrategy> one_bit_showcase_4322() {
    std::vector<OneBitStrategy> out;
    for (const OneBitStrategy& s : one_bit_showcase_3322()) {
        std::vector<int> ra = s.outputs_a, c = s.messages;
        ra.push_back(ra[1]);
        c.push_back(c[1]);
        out.emplace_back(Scenario(4, 3), std::move(ra), std::move(c), s.outputs_b);
    }
    return out;
}

inline CGPoint<Rational> one_bit_showcase_point(const Scenario& sc) {
    std::vector<OneBitStrategy> strategies =
        sc.m_a == 4 ? one_bit_showcase_4322() : one_bit_showcase_3322();
    std::vector<Rational> weights(strategies.size(), Rational(1, 5));
    return cg_from_full(one_bit_mixture(strategies, weights));
}

/// Printed table of a CG point: columns are Alice, rows are Bob.
inline std::string format_point_table(const CGPoint<Rational>& p) {
    std::string s = "      ";
    for (int i = 0; i < p.scenario().m_a; ++i) s += "\t" + p.marg_a()[i].to_string();
    s += "\n";
    for (int j = 0; j < p.scenario().m_b; ++j) {
        s += p.marg_b()[j].to_string() + " |";
        for (int i = 0; i < p.scenario().m_a; ++i) s += "\t" + p.joint()(i, j).to_string();
        s += "\n";
    }
    return s;
}

}  // namespace nlm
