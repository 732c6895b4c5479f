#pragma once

#include <stdexcept>
#include <string>

namespace nlm {

/// A bipartite Bell scenario with two outcomes per side: Alice chooses among
/// m_a settings, Bob among m_b. A no-signaling behavior in this scenario is
/// fixed by d_ns = m_a*m_b + m_a + m_b probabilities.
struct Scenario {
    int m_a = 0;
    int m_b = 0;

    Scenario() = default;
    Scenario(int ma, int mb) : m_a(ma), m_b(mb) {
        if (ma < 2 || mb < 2) throw std::invalid_argument("Scenario: needs at least 2 settings per side");
    }

    int d_ns() const { return m_a * m_b + m_a + m_b; }
    int pairs() const { return m_a * m_b; }

    int pair_index(int i, int j) const { return i * m_b + j; }

    // positions inside the canonical CG coordinate vector:
    // marg_A (i ascending), marg_B (j ascending), joint row-major in (i, j)
    int cg_index_marg_a(int i) const { return i; }
    int cg_index_marg_b(int j) const { return m_a + j; }
    int cg_index_joint(int i, int j) const { return m_a + m_b + pair_index(i, j); }

    /// "3322"-style tag: m_a, m_b, then the two outcome counts (always 2 here).
    std::string tag() const { return std::to_string(m_a) + std::to_string(m_b) + "22"; }

    friend bool operator==(const Scenario& a, const Scenario& b) {
        return a.m_a == b.m_a && a.m_b == b.m_b;
    }
    friend bool operator!=(const Scenario& a, const Scenario& b) { return !(a == b); }
};

/// Parses "3322" / "4322" / "2222" tags (last two digits must be 22).
inline Scenario parse_scenario(const std::string& tag) {
    if (tag.size() != 4 || tag[2] != '2' || tag[3] != '2')
        throw std::invalid_argument("Scenario: expected a tag like 3322 (two-outcome scenarios only)");
    int ma = tag[0] - '0';
    int mb = tag[1] - '0';
    return {ma, mb};
}

}  // namespace nlm
