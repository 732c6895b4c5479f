#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "nlm/behavior.hpp"
#include "nlm/parallel.hpp"
#include "nlm/rational.hpp"
#include "nlm/scenario.hpp"

namespace nlm {

/// Per-setting action of one party when a single machine use is available:
/// output a fixed bit, or feed a bit into the machine and keep / flip its
/// output. Exactly six distinct values.
enum class LocalAction : uint8_t {
    out0 = 0,  // 0d: output 0
    out1 = 1,  // 1d: output 1
    mach0 = 2, // 0m: input 0, keep machine output
    mach1 = 3, // 1m: input 1, keep machine output
    flip0 = 4, // 0f: input 0, flip machine output
    flip1 = 5, // 1f: input 1, flip machine output
};

inline constexpr std::array<LocalAction, 6> kAllLocalActions = {
    LocalAction::out0, LocalAction::out1, LocalAction::mach0,
    LocalAction::mach1, LocalAction::flip0, LocalAction::flip1};

inline bool is_machine(LocalAction a) { return a >= LocalAction::mach0; }
inline int machine_input(LocalAction a) { return (static_cast<int>(a) - 2) & 1; }
inline bool machine_flip(LocalAction a) { return a >= LocalAction::flip0; }
inline int det_output(LocalAction a) { return static_cast<int>(a); }

inline std::string to_string(LocalAction a) {
    static const char* names[6] = {"0d", "1d", "0m", "1m", "0f", "1f"};
    return names[static_cast<int>(a)];
}

inline LocalAction parse_local_action(const std::string& s) {
    for (LocalAction a : kAllLocalActions)
        if (to_string(a) == s) return a;
    throw std::invalid_argument("unknown local action: " + s);
}

/// An extremal strategy using the machine at most once: one LocalAction per
/// setting on each side. Shared randomness is handled by convex mixing of
/// these, not stored here.
struct NLMStrategy {
    Scenario scenario;
    std::vector<LocalAction> alice, bob;

    NLMStrategy(Scenario sc, std::vector<LocalAction> a, std::vector<LocalAction> b)
        : scenario(sc), alice(std::move(a)), bob(std::move(b)) {
        if (alice.size() != static_cast<size_t>(sc.m_a) ||
            bob.size() != static_cast<size_t>(sc.m_b))
            throw std::invalid_argument("NLMStrategy: action lists do not match scenario");
    }

    /// Bracket notation, e.g. "[0m 0m 1m; 0m 1m 0m]".
    std::string notation() const {
        std::string s = "[";
        for (size_t i = 0; i < alice.size(); ++i) s += (i ? " " : "") + to_string(alice[i]);
        s += "; ";
        for (size_t j = 0; j < bob.size(); ++j) s += (j ? " " : "") + to_string(bob[j]);
        return s + "]";
    }
};

/// Exact joint outcome block for one setting pair. The machine outputs are
/// uniform and correlated as a XOR b = x AND y; a party acting
/// deterministically is treated as inputting 0 and discarding the output.
inline std::array<Rational, 4> nlm_joint(LocalAction action_a, LocalAction action_b) {
    std::array<Rational, 4> block = {Rational(0), Rational(0), Rational(0), Rational(0)};
    const Rational half(1, 2);
    if (!is_machine(action_a) && !is_machine(action_b)) {
        block[static_cast<size_t>(det_output(action_a) * 2 + det_output(action_b))] = Rational(1);
    } else if (!is_machine(action_a)) {
        int ra = det_output(action_a);
        block[static_cast<size_t>(ra * 2 + 0)] = half;
        block[static_cast<size_t>(ra * 2 + 1)] = half;
    } else if (!is_machine(action_b)) {
        int rb = det_output(action_b);
        block[static_cast<size_t>(0 * 2 + rb)] = half;
        block[static_cast<size_t>(1 * 2 + rb)] = half;
    } else {
        int xy = machine_input(action_a) & machine_input(action_b);
        int fa = machine_flip(action_a) ? 1 : 0;
        int fb = machine_flip(action_b) ? 1 : 0;
        for (int s = 0; s < 2; ++s) {
            int ra = fa ^ s;
            int rb = fb ^ s ^ xy;
            block[static_cast<size_t>(ra * 2 + rb)] = half;
        }
    }
    return block;
}

template <typename Strategy>
FullJoint<Rational> full_joint_of(const Strategy&);

/// Assembles the per-pair blocks of a single-machine strategy.
inline FullJoint<Rational> full_joint_of_nlm(const NLMStrategy& s) {
    const Scenario& sc = s.scenario;
    MatX<Rational> blocks(sc.pairs(), 4);
    for (int i = 0; i < sc.m_a; ++i)
        for (int j = 0; j < sc.m_b; ++j) {
            auto block = nlm_joint(s.alice[static_cast<size_t>(i)], s.bob[static_cast<size_t>(j)]);
            for (int e = 0; e < 4; ++e) blocks(sc.pair_index(i, j), e) = block[static_cast<size_t>(e)];
        }
    return {sc, std::move(blocks)};
}

inline CGPoint<Rational> point_of_nlm(const NLMStrategy& s) {
    return cg_from_full(full_joint_of_nlm(s));
}

/// All 2^(m_a+m_b) deterministic behaviors, in lexicographic output order.
inline std::vector<CGPoint<Rational>> enumerate_deterministic(const Scenario& sc) {
    int n = sc.m_a + sc.m_b;
    std::vector<CGPoint<Rational>> points;
    points.reserve(1u << n);
    for (uint32_t code = 0; code < (1u << n); ++code) {
        std::vector<LocalAction> a(static_cast<size_t>(sc.m_a)), b(static_cast<size_t>(sc.m_b));
        for (int i = 0; i < sc.m_a; ++i)
            a[static_cast<size_t>(i)] = (code >> i) & 1 ? LocalAction::out1 : LocalAction::out0;
        for (int j = 0; j < sc.m_b; ++j)
            b[static_cast<size_t>(j)] =
                (code >> (sc.m_a + j)) & 1 ? LocalAction::out1 : LocalAction::out0;
        points.push_back(point_of_nlm(NLMStrategy(sc, std::move(a), std::move(b))));
    }
    return points;
}

inline NLMStrategy nlm_strategy_from_code(const Scenario& sc, uint64_t code) {
    std::vector<LocalAction> a(static_cast<size_t>(sc.m_a)), b(static_cast<size_t>(sc.m_b));
    for (int i = 0; i < sc.m_a; ++i) {
        a[static_cast<size_t>(i)] = static_cast<LocalAction>(code % 6);
        code /= 6;
    }
    for (int j = 0; j < sc.m_b; ++j) {
        b[static_cast<size_t>(j)] = static_cast<LocalAction>(code % 6);
        code /= 6;
    }
    return {sc, std::move(a), std::move(b)};
}

/// Brute-force pass over all 6^(m_a+m_b) single-machine strategies with
/// on-the-fly deduplication by canonical key. The first-encountered point of
/// each behavior is kept, so the output order is independent of threading.
inline std::vector<CGPoint<Rational>> enumerate_nlm(const Scenario& sc) {
    int n = sc.m_a + sc.m_b;
    if (n > 9) throw std::invalid_argument("enumerate_nlm: scenario too large for brute force");
    uint64_t total = 1;
    for (int k = 0; k < n; ++k) total *= 6;

    struct Shard {
        std::vector<std::string> keys;
        std::vector<CGPoint<Rational>> points;
    };
    std::vector<Shard> shards = parallel_chunked<Shard>(total, [&](uint64_t begin, uint64_t end) {
        Shard shard;
        std::unordered_set<std::string> seen;
        for (uint64_t code = begin; code < end; ++code) {
            CGPoint<Rational> p = point_of_nlm(nlm_strategy_from_code(sc, code));
            std::string key = canonical_key(p);
            if (seen.insert(key).second) {
                shard.keys.push_back(std::move(key));
                shard.points.push_back(std::move(p));
            }
        }
        return shard;
    });

    std::vector<CGPoint<Rational>> points;
    std::unordered_set<std::string> seen;
    for (auto& shard : shards)
        for (size_t k = 0; k < shard.keys.size(); ++k)
            if (seen.insert(std::move(shard.keys[k])).second) points.push_back(std::move(shard.points[k]));
    return points;
}

/// Strategy coding two machine uses: per setting, a pair of inputs. Both
/// outputs are kept and XORed, no flips (r_A = a' xor a'', r_B = b' xor b'').
struct TwoNLMStrategy {
    Scenario scenario;
    std::vector<std::array<int, 2>> alice_inputs, bob_inputs;

    TwoNLMStrategy(Scenario sc, std::vector<std::array<int, 2>> a,
                   std::vector<std::array<int, 2>> b)
        : scenario(sc), alice_inputs(std::move(a)), bob_inputs(std::move(b)) {
        if (alice_inputs.size() != static_cast<size_t>(sc.m_a) ||
            bob_inputs.size() != static_cast<size_t>(sc.m_b))
            throw std::invalid_argument("TwoNLMStrategy: input lists do not match scenario");
        for (const auto& xs : alice_inputs)
            if ((xs[0] | xs[1]) & ~1) throw std::invalid_argument("TwoNLMStrategy: inputs must be bits");
        for (const auto& ys : bob_inputs)
            if ((ys[0] | ys[1]) & ~1) throw std::invalid_argument("TwoNLMStrategy: inputs must be bits");
    }

    std::string notation() const {
        auto pair_str = [](const std::array<int, 2>& p) {
            return "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + ")";
        };
        std::string s = "[A:";
        for (size_t i = 0; i < alice_inputs.size(); ++i) s += (i ? "," : "") + pair_str(alice_inputs[i]);
        s += "; B:";
        for (size_t j = 0; j < bob_inputs.size(); ++j) s += (j ? "," : "") + pair_str(bob_inputs[j]);
        return s + "]";
    }
};

/// XORing two independent machine rounds leaves r_A uniform and fixes only
/// the parity r_A xor r_B = x'y' xor x''y''.
inline CGPoint<Rational> point_of_two_nlm(const TwoNLMStrategy& s) {
    const Scenario& sc = s.scenario;
    const Rational half(1, 2);
    MatX<Rational> blocks(sc.pairs(), 4);
    for (int i = 0; i < sc.m_a; ++i)
        for (int j = 0; j < sc.m_b; ++j) {
            const auto& xs = s.alice_inputs[static_cast<size_t>(i)];
            const auto& ys = s.bob_inputs[static_cast<size_t>(j)];
            int parity = (xs[0] & ys[0]) ^ (xs[1] & ys[1]);
            for (int e = 0; e < 4; ++e) blocks(sc.pair_index(i, j), e) = Rational(0);
            for (int ra = 0; ra < 2; ++ra)
                blocks(sc.pair_index(i, j), ra * 2 + (ra ^ parity)) = half;
        }
    return cg_from_full(FullJoint<Rational>(sc, std::move(blocks)));
}

/// Bob's reply to a one-bit message: a fixed bit, the message itself, or its
/// complement (the complement is not needed by any built-in table; it is kept
/// for completeness of the response alphabet).
enum class OneBitResponse : uint8_t { zero = 0, one = 1, copy = 2, copy_flip = 3 };

inline std::string to_string(OneBitResponse r) {
    static const char* names[4] = {"0", "1", "c", "!c"};
    return names[static_cast<int>(r)];
}

/// Deterministic one-way communication strategy: Alice outputs a fixed bit
/// and sends a one-bit message per setting; Bob answers per setting with a
/// OneBitResponse. Generally signaling on its own.
struct OneBitStrategy {
    Scenario scenario;
    std::vector<int> outputs_a;           // r_A per Alice setting
    std::vector<int> messages;            // c per Alice setting
    std::vector<OneBitResponse> outputs_b;

    OneBitStrategy(Scenario sc, std::vector<int> ra, std::vector<int> c,
                   std::vector<OneBitResponse> rb)
        : scenario(sc), outputs_a(std::move(ra)), messages(std::move(c)), outputs_b(std::move(rb)) {
        if (outputs_a.size() != static_cast<size_t>(sc.m_a) ||
            messages.size() != static_cast<size_t>(sc.m_a) ||
            outputs_b.size() != static_cast<size_t>(sc.m_b))
            throw std::invalid_argument("OneBitStrategy: lists do not match scenario");
        for (int v : outputs_a)
            if (v & ~1) throw std::invalid_argument("OneBitStrategy: outputs must be bits");
        for (int v : messages)
            if (v & ~1) throw std::invalid_argument("OneBitStrategy: messages must be bits");
    }

    int bob_output(int j, int message) const {
        switch (outputs_b[static_cast<size_t>(j)]) {
            case OneBitResponse::zero: return 0;
            case OneBitResponse::one: return 1;
            case OneBitResponse::copy: return message;
            case OneBitResponse::copy_flip: return 1 - message;
        }
        return 0;
    }

    /// Bracket notation "[1,1,0; c,1,c | 1,1,0]".
    std::string notation() const {
        std::string s = "[";
        for (size_t i = 0; i < outputs_a.size(); ++i)
            s += (i ? "," : "") + std::to_string(outputs_a[i]);
        s += "; ";
        for (size_t j = 0; j < outputs_b.size(); ++j)
            s += (j ? "," : "") + to_string(outputs_b[j]);
        s += " | ";
        for (size_t i = 0; i < messages.size(); ++i)
            s += (i ? "," : "") + std::to_string(messages[i]);
        return s + "]";
    }
};

inline FullJoint<Rational> point_of_one_bit(const OneBitStrategy& s) {
    const Scenario& sc = s.scenario;
    MatX<Rational> blocks = MatX<Rational>::Constant(sc.pairs(), 4, Rational(0));
    for (int i = 0; i < sc.m_a; ++i)
        for (int j = 0; j < sc.m_b; ++j) {
            int ra = s.outputs_a[static_cast<size_t>(i)];
            int rb = s.bob_output(j, s.messages[static_cast<size_t>(i)]);
            blocks(sc.pair_index(i, j), ra * 2 + rb) = Rational(1);
        }
    return {sc, std::move(blocks)};
}

/// Weighted average of the strategies' full joints; the weights must be a
/// convex combination. The result may or may not be no-signaling.
inline FullJoint<Rational> one_bit_mixture(std::span<const OneBitStrategy> strategies,
                                           std::span<const Rational> weights) {
    if (strategies.empty() || strategies.size() != weights.size())
        throw std::invalid_argument("one_bit_mixture: need matching non-empty inputs");
    const Scenario& sc = strategies[0].scenario;
    Rational wsum(0);
    for (const Rational& w : weights) {
        if (w < Rational(0)) throw std::invalid_argument("one_bit_mixture: negative weight");
        wsum += w;
    }
    if (wsum != Rational(1)) throw std::invalid_argument("one_bit_mixture: weights do not sum to 1");
    MatX<Rational> blocks = MatX<Rational>::Constant(sc.pairs(), 4, Rational(0));
    for (size_t k = 0; k < strategies.size(); ++k) {
        if (strategies[k].scenario != sc)
            throw std::invalid_argument("one_bit_mixture: scenario mismatch");
        FullJoint<Rational> fj = point_of_one_bit(strategies[k]);
        for (int p = 0; p < sc.pairs(); ++p)
            for (int e = 0; e < 4; ++e) blocks(p, e) += weights[k] * fj.blocks()(p, e);
    }
    return {sc, std::move(blocks)};
}

inline FullJoint<Rational> one_bit_mixture(const std::vector<OneBitStrategy>& strategies,
                                           const std::vector<Rational>& weights) {
    return one_bit_mixture(std::span<const OneBitStrategy>(strategies),
                           std::span<const Rational>(weights));
}

}  // namespace nlm
