#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlm/rational.hpp"
#include "nlm/scenario.hpp"

namespace nlm {

template <typename S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

template <typename S>
bool in_unit_interval(const S& v, double slack) {
    if constexpr (scalar_traits<S>::is_exact)
        return v >= S(0) && v <= S(1);
    else
        return v >= -slack && v <= 1.0 + slack;
}

template <typename S>
bool nonpositive(const S& v, double slack) {
    if constexpr (scalar_traits<S>::is_exact)
        return v <= S(0);
    else
        return v <= slack;
}

inline constexpr double kRealSlack = 1e-9;

}  // namespace detail

/// Full table of outcome probabilities P_ij(r_A, r_B), one 4-entry block per
/// setting pair. Blocks must be normalized; no-signaling is NOT implied.
template <typename S>
class FullJoint {
public:
    FullJoint(Scenario sc, MatX<S> blocks) : scenario_(sc), blocks_(std::move(blocks)) {
        if (blocks_.rows() != sc.pairs() || blocks_.cols() != 4)
            throw std::invalid_argument("FullJoint: block table has wrong shape");
        for (Eigen::Index p = 0; p < blocks_.rows(); ++p) {
            S sum = blocks_(p, 0) + blocks_(p, 1) + blocks_(p, 2) + blocks_(p, 3);
            bool normalized;
            if constexpr (scalar_traits<S>::is_exact)
                normalized = sum == S(1);
            else
                normalized = std::abs(sum - 1.0) <= detail::kRealSlack;
            if (!normalized)
                throw std::invalid_argument("FullJoint: block " + std::to_string(p) +
                                            " does not sum to 1");
            for (int e = 0; e < 4; ++e)
                if (!detail::in_unit_interval(blocks_(p, e), detail::kRealSlack))
                    throw std::invalid_argument("FullJoint: entry outside [0,1]");
        }
    }

    const Scenario& scenario() const { return scenario_; }

    /// P(r_A, r_B | A_i, B_j)
    const S& p(int i, int j, int r_a, int r_b) const {
        return blocks_(scenario_.pair_index(i, j), r_a * 2 + r_b);
    }

    /// P(r_A | A_i), marginalized with Bob using setting j.
    S marginal_a(int i, int r_a, int j) const {
        return p(i, j, r_a, 0) + p(i, j, r_a, 1);
    }
    /// P(r_B | B_j), marginalized with Alice using setting i.
    S marginal_b(int j, int r_b, int i) const {
        return p(i, j, 0, r_b) + p(i, j, 1, r_b);
    }

    const MatX<S>& blocks() const { return blocks_; }

private:
    Scenario scenario_;
    MatX<S> blocks_;  // row = pair index, col = r_A*2 + r_B
};

/// A behavior in Collins-Gisin coordinates: zero-outcome marginals plus the
/// joint zero-zero block. Together with no-signaling these d_ns numbers fix
/// the full probability table.
template <typename S>
class CGPoint {
public:
    CGPoint(Scenario sc, VecX<S> marg_a, VecX<S> marg_b, MatX<S> joint)
        : scenario_(sc),
          marg_a_(std::move(marg_a)),
          marg_b_(std::move(marg_b)),
          joint_(std::move(joint)) {
        if (marg_a_.size() != sc.m_a || marg_b_.size() != sc.m_b ||
            joint_.rows() != sc.m_a || joint_.cols() != sc.m_b)
            throw std::invalid_argument("CGPoint: dimensions do not match scenario");
        const double eps = detail::kRealSlack;
        for (int i = 0; i < sc.m_a; ++i)
            if (!detail::in_unit_interval(marg_a_[i], eps))
                throw std::invalid_argument("CGPoint: Alice marginal outside [0,1]");
        for (int j = 0; j < sc.m_b; ++j)
            if (!detail::in_unit_interval(marg_b_[j], eps))
                throw std::invalid_argument("CGPoint: Bob marginal outside [0,1]");
        for (int i = 0; i < sc.m_a; ++i)
            for (int j = 0; j < sc.m_b; ++j) {
                const S& q = joint_(i, j);
                if (!detail::in_unit_interval(q, eps) ||
                    !detail::nonpositive<S>(q - marg_a_[i], eps) ||
                    !detail::nonpositive<S>(q - marg_b_[j], eps) ||
                    !detail::nonpositive<S>(marg_a_[i] + marg_b_[j] - q - S(1), eps))
                    throw std::invalid_argument("CGPoint: joint block violates CG bounds");
            }
    }

    const Scenario& scenario() const { return scenario_; }
    const VecX<S>& marg_a() const { return marg_a_; }
    const VecX<S>& marg_b() const { return marg_b_; }
    const MatX<S>& joint() const { return joint_; }

    /// Canonical CG coordinate vector (marg_A, marg_B, joint row-major).
    VecX<S> to_vector() const {
        VecX<S> v(scenario_.d_ns());
        for (int i = 0; i < scenario_.m_a; ++i) v[scenario_.cg_index_marg_a(i)] = marg_a_[i];
        for (int j = 0; j < scenario_.m_b; ++j) v[scenario_.cg_index_marg_b(j)] = marg_b_[j];
        for (int i = 0; i < scenario_.m_a; ++i)
            for (int j = 0; j < scenario_.m_b; ++j)
                v[scenario_.cg_index_joint(i, j)] = joint_(i, j);
        return v;
    }

    static CGPoint from_vector(Scenario sc, const VecX<S>& v) {
        if (v.size() != sc.d_ns())
            throw std::invalid_argument("CGPoint: coordinate vector has wrong length");
        VecX<S> ma(sc.m_a), mb(sc.m_b);
        MatX<S> joint(sc.m_a, sc.m_b);
        for (int i = 0; i < sc.m_a; ++i) ma[i] = v[sc.cg_index_marg_a(i)];
        for (int j = 0; j < sc.m_b; ++j) mb[j] = v[sc.cg_index_marg_b(j)];
        for (int i = 0; i < sc.m_a; ++i)
            for (int j = 0; j < sc.m_b; ++j) joint(i, j) = v[sc.cg_index_joint(i, j)];
        return {sc, std::move(ma), std::move(mb), std::move(joint)};
    }

    friend bool operator==(const CGPoint& a, const CGPoint& b) {
        return a.scenario_ == b.scenario_ && a.marg_a_ == b.marg_a_ &&
               a.marg_b_ == b.marg_b_ && a.joint_ == b.joint_;
    }

private:
    Scenario scenario_;
    VecX<S> marg_a_, marg_b_;
    MatX<S> joint_;
};

template <typename S>
struct NoSignalingReport {
    bool ok = false;
    S max_deviation{};
};

/// Checks that each party's marginals are independent of the other party's
/// setting. Exact scalars use tol = 0 regardless of the argument.
template <typename S>
NoSignalingReport<S> is_no_signaling(const FullJoint<S>& full, double tol = 1e-12) {
    const Scenario& sc = full.scenario();
    S dev = S(0);
    auto track = [&dev](const S& a, const S& b) {
        S d = a - b;
        if (d < S(0)) d = -d;
        if (d > dev) dev = d;
    };
    for (int j = 0; j < sc.m_b; ++j)
        for (int rb = 0; rb < 2; ++rb)
            for (int i = 1; i < sc.m_a; ++i)
                track(full.marginal_b(j, rb, i), full.marginal_b(j, rb, 0));
    for (int i = 0; i < sc.m_a; ++i)
        for (int ra = 0; ra < 2; ++ra)
            for (int j = 1; j < sc.m_b; ++j)
                track(full.marginal_a(i, ra, j), full.marginal_a(i, ra, 0));
    NoSignalingReport<S> rep;
    rep.max_deviation = dev;
    if constexpr (scalar_traits<S>::is_exact)
        rep.ok = dev == S(0);
    else
        rep.ok = dev <= tol;
    return rep;
}

/// Collins-Gisin reduction of a no-signaling full joint. Rejects signaling
/// inputs (beyond zero deviation for exact scalars, tol for real ones).
template <typename S>
CGPoint<S> cg_from_full(const FullJoint<S>& full, double tol = 1e-12) {
    auto rep = is_no_signaling(full, tol);
    if (!rep.ok)
        throw std::invalid_argument("cg_from_full: input violates no-signaling");
    const Scenario& sc = full.scenario();
    VecX<S> ma(sc.m_a), mb(sc.m_b);
    MatX<S> joint(sc.m_a, sc.m_b);
    for (int i = 0; i < sc.m_a; ++i) ma[i] = full.marginal_a(i, 0, 0);
    for (int j = 0; j < sc.m_b; ++j) mb[j] = full.marginal_b(j, 0, 0);
    for (int i = 0; i < sc.m_a; ++i)
        for (int j = 0; j < sc.m_b; ++j) joint(i, j) = full.p(i, j, 0, 0);
    return {sc, std::move(ma), std::move(mb), std::move(joint)};
}

/// Entrywise convex combination. Weights must be non-negative and sum to one
/// (exactly for Rational, within 1e-12 for real weights).
template <typename S>
CGPoint<S> mix(std::span<const CGPoint<S>> points, std::span<const S> weights) {
    if (points.empty() || points.size() != weights.size())
        throw std::invalid_argument("mix: need matching non-empty points and weights");
    const Scenario& sc = points[0].scenario();
    S wsum = S(0);
    for (const S& w : weights) {
        if (w < S(0)) throw std::invalid_argument("mix: negative weight");
        wsum += w;
    }
    bool normalized;
    if constexpr (scalar_traits<S>::is_exact)
        normalized = wsum == S(1);
    else
        normalized = std::abs(wsum - 1.0) <= 1e-12;
    if (!normalized) throw std::invalid_argument("mix: weights do not sum to 1");

    VecX<S> ma = VecX<S>::Constant(sc.m_a, S(0));
    VecX<S> mb = VecX<S>::Constant(sc.m_b, S(0));
    MatX<S> joint = MatX<S>::Constant(sc.m_a, sc.m_b, S(0));
    for (size_t k = 0; k < points.size(); ++k) {
        if (points[k].scenario() != sc) throw std::invalid_argument("mix: scenario mismatch");
        for (int i = 0; i < sc.m_a; ++i) ma[i] += weights[k] * points[k].marg_a()[i];
        for (int j = 0; j < sc.m_b; ++j) mb[j] += weights[k] * points[k].marg_b()[j];
        for (int i = 0; i < sc.m_a; ++i)
            for (int j = 0; j < sc.m_b; ++j) joint(i, j) += weights[k] * points[k].joint()(i, j);
    }
    return {sc, std::move(ma), std::move(mb), std::move(joint)};
}

template <typename S>
CGPoint<S> mix(const std::vector<CGPoint<S>>& points, const std::vector<S>& weights) {
    return mix(std::span<const CGPoint<S>>(points), std::span<const S>(weights));
}

/// Deduplication key: lowest-terms fraction serialization in canonical
/// coordinate order. Equal points give equal keys and vice versa.
inline std::string canonical_key(const CGPoint<Rational>& p) {
    std::string key;
    key.reserve(static_cast<size_t>(p.scenario().d_ns()) * 4);
    auto put = [&key](const Rational& v) {
        key += v.to_fraction_string();
        key += ',';
    };
    for (int i = 0; i < p.scenario().m_a; ++i) put(p.marg_a()[i]);
    for (int j = 0; j < p.scenario().m_b; ++j) put(p.marg_b()[j]);
    for (int i = 0; i < p.scenario().m_a; ++i)
        for (int j = 0; j < p.scenario().m_b; ++j) put(p.joint()(i, j));
    return key;
}

// ---- CSV serialization ----------------------------------------------------

inline std::string cg_csv_header(const Scenario& sc) {
    std::string h;
    for (int i = 0; i < sc.m_a; ++i) h += "A" + std::to_string(i) + ",";
    for (int j = 0; j < sc.m_b; ++j) h += "B" + std::to_string(j) + ",";
    for (int i = 0; i < sc.m_a; ++i)
        for (int j = 0; j < sc.m_b; ++j)
            h += "A" + std::to_string(i) + "B" + std::to_string(j) + ",";
    h.pop_back();
    return h;
}

namespace detail {

inline std::string csv_entry(const Rational& v) { return v.to_fraction_string(); }

inline std::string csv_entry(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// One row per point, canonical CG column order; exact entries as "num/den",
/// real entries as 17-significant-digit decimals.
template <typename S>
void write_points_csv(std::ostream& os, const Scenario& sc,
                      const std::vector<CGPoint<S>>& points) {
    os << cg_csv_header(sc) << "\n";
    for (const auto& p : points) {
        VecX<S> v = p.to_vector();
        for (Eigen::Index c = 0; c < v.size(); ++c) {
            if (c) os << ",";
            os << detail::csv_entry(v[c]);
        }
        os << "\n";
    }
}

/// Reads back an exact point CSV written by write_points_csv (integer entries
/// are also accepted). The scenario is inferred from the header.
inline std::vector<CGPoint<Rational>> read_points_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::invalid_argument("points csv: empty input");
    int ma = 0, mb = 0;
    {
        std::stringstream ss(header);
        std::string col;
        while (std::getline(ss, col, ',')) {
            if (col.size() >= 2 && col[0] == 'A' && col.find('B') == std::string::npos) ++ma;
            if (col.size() >= 2 && col[0] == 'B') ++mb;
        }
    }
    Scenario sc(ma, mb);
    std::vector<CGPoint<Rational>> points;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        VecX<Rational> v(sc.d_ns());
        int c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= sc.d_ns()) throw std::invalid_argument("points csv: too many columns");
            v[c++] = Rational::from_string(cell);
        }
        if (c != sc.d_ns()) throw std::invalid_argument("points csv: too few columns");
        points.push_back(CGPoint<Rational>::from_vector(sc, v));
    }
    return points;
}

}  // namespace nlm
