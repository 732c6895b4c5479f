#pragma once

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlm/behavior.hpp"
#include "nlm/exact_linalg.hpp"
#include "nlm/inequality.hpp"

namespace nlm {

/// Outcome of checking one candidate inequality against a vertex set.
/// is_facet requires validity, a full-dimensional vertex set, and a
/// saturating set of affine dimension d_ns - 1.
struct FacetReport {
    bool valid = false;
    std::vector<size_t> violators;
    size_t n_saturating = 0;
    Eigen::Index linear_rank = 0;   // rank of the saturating points as matrix rows
    Eigen::Index polytope_dim = 0;  // affine dimension of the whole vertex set
    bool is_facet = false;
};

inline nlohmann::json facet_report_to_json(const FacetReport& rep) {
    nlohmann::json j;
    j["valid"] = rep.valid;
    j["violators"] = rep.violators;
    j["n_saturating"] = rep.n_saturating;
    j["linear_rank"] = rep.linear_rank;
    j["polytope_dim"] = rep.polytope_dim;
    j["is_facet"] = rep.is_facet;
    return j;
}

/// Validity plus tightness check. When the bound is 0 and the vertex set
/// contains the origin of CG coordinates (the all-outputs-1 deterministic
/// point, which then saturates), the affine dimension of the saturating set
/// equals its linear rank and the rank shortcut applies; otherwise the
/// affine rank is used.
inline FacetReport verify_facet(const CGInequality& ineq,
                                const std::vector<CGPoint<Rational>>& vertices) {
    if (vertices.empty()) throw std::invalid_argument("verify_facet: empty vertex set");
    const Scenario& sc = vertices[0].scenario();
    if (!(ineq.scenario == sc))
        throw std::invalid_argument("verify_facet: inequality and vertices scenarios differ");
    const int d = sc.d_ns();

    FacetReport rep;
    std::vector<size_t> saturating;
    bool origin_saturates = false;
    for (size_t k = 0; k < vertices.size(); ++k) {
        if (!(vertices[k].scenario() == sc))
            throw std::invalid_argument("verify_facet: mixed scenarios in vertex set");
        Rational v = evaluate(ineq, vertices[k]);
        if (v > ineq.bound) {
            rep.violators.push_back(k);
        } else if (v == ineq.bound) {
            saturating.push_back(k);
            if (vertices[k].to_vector() == VecX<Rational>::Constant(d, Rational(0)))
                origin_saturates = true;
        }
    }
    rep.valid = rep.violators.empty();
    rep.n_saturating = saturating.size();

    RMatrix all(static_cast<Eigen::Index>(vertices.size()), d);
    for (size_t k = 0; k < vertices.size(); ++k)
        all.row(static_cast<Eigen::Index>(k)) = vertices[k].to_vector().transpose();
    rep.polytope_dim = affine_rank(all);

    Eigen::Index sat_affine_dim = 0;
    if (!saturating.empty()) {
        RMatrix sat(static_cast<Eigen::Index>(saturating.size()), d);
        for (size_t k = 0; k < saturating.size(); ++k)
            sat.row(static_cast<Eigen::Index>(k)) =
                vertices[saturating[k]].to_vector().transpose();
        rep.linear_rank = rank_exact(sat);
        sat_affine_dim = (ineq.bound == Rational(0) && origin_saturates) ? rep.linear_rank
                                                                         : affine_rank(sat);
    }
    rep.is_facet = rep.valid && rep.polytope_dim == d && sat_affine_dim == d - 1;
    return rep;
}

struct DDOptions {
    size_t max_rays = 1u << 20;
};

struct DDResourceError : std::runtime_error {
    size_t rays_reached;
    size_t constraints_done;
    size_t constraints_total;
    DDResourceError(size_t rays, size_t done, size_t total)
        : std::runtime_error("dd_facets: resource cap exceeded after " + std::to_string(done) +
                             "/" + std::to_string(total) + " constraints (" +
                             std::to_string(rays) + " rays)"),
          rays_reached(rays),
          constraints_done(done),
          constraints_total(total) {}
};

namespace detail {

// zero-set bitmask over constraint indices
using ZeroSet = std::vector<uint64_t>;

inline void zs_set(ZeroSet& z, size_t i) { z[i / 64] |= (1ULL << (i % 64)); }

inline ZeroSet zs_and(const ZeroSet& a, const ZeroSet& b) {
    ZeroSet r(a.size());
    for (size_t w = 0; w < a.size(); ++w) r[w] = a[w] & b[w];
    return r;
}

inline bool zs_subset(const ZeroSet& a, const ZeroSet& b) {
    for (size_t w = 0; w < a.size(); ++w)
        if (a[w] & ~b[w]) return false;
    return true;
}

inline size_t zs_count(const ZeroSet& z) {
    size_t n = 0;
    for (uint64_t w : z) n += static_cast<size_t>(std::popcount(w));
    return n;
}

struct Ray {
    RVector coords;
    ZeroSet zero;
};

/// Rescales to primitive integer coordinates (unique representative per ray).
inline void make_primitive(RVector& v) {
    BigInt lcm(1);
    for (Eigen::Index c = 0; c < v.size(); ++c) {
        const BigInt& d = v[c].den();
        lcm = lcm / BigInt::gcd(lcm, d) * d;
    }
    BigInt g(0);
    for (Eigen::Index c = 0; c < v.size(); ++c)
        g = BigInt::gcd(g, (v[c] * Rational(lcm, BigInt(1))).num());
    if (g.is_zero()) return;
    Rational f(lcm, g);
    for (Eigen::Index c = 0; c < v.size(); ++c) v[c] *= f;
}

}  // namespace detail

/// Complete facet enumeration of conv(vertices) by the double description
/// method on the homogenization's dual cone. Intended for toy scale (2222);
/// a ray cap protects larger inputs, reporting failure rather than ever
/// returning a partial list. The vertex set must be full-dimensional.
inline std::vector<CGInequality> dd_facets(const std::vector<CGPoint<Rational>>& vertices,
                                           const DDOptions& options = {}) {
    if (vertices.empty()) throw std::invalid_argument("dd_facets: empty vertex set");
    const Scenario sc = vertices[0].scenario();
    const int d = sc.d_ns();

    // deterministic insertion order, deduplicated
    std::vector<const CGPoint<Rational>*> sorted;
    {
        std::vector<std::pair<std::string, const CGPoint<Rational>*>> keyed;
        keyed.reserve(vertices.size());
        for (const auto& v : vertices) {
            if (!(v.scenario() == sc)) throw std::invalid_argument("dd_facets: mixed scenarios");
            keyed.emplace_back(canonical_key(v), &v);
        }
        std::sort(keyed.begin(), keyed.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        keyed.erase(std::unique(keyed.begin(), keyed.end(),
                                [](const auto& a, const auto& b) { return a.first == b.first; }),
                    keyed.end());
        for (auto& [key, ptr] : keyed) sorted.push_back(ptr);
    }
    const size_t n = sorted.size();

    // homogenized constraint normals a_v = (1, v): dual cone {y : a_v . y >= 0}
    RMatrix normals(static_cast<Eigen::Index>(n), d + 1);
    for (size_t k = 0; k < n; ++k) {
        normals(static_cast<Eigen::Index>(k), 0) = Rational(1);
        VecX<Rational> coords = sorted[k]->to_vector();
        for (int c = 0; c < d; ++c) normals(static_cast<Eigen::Index>(k), c + 1) = coords[c];
    }
    if (rank_exact(normals) != d + 1)
        throw std::invalid_argument("dd_facets: vertex set is not full-dimensional");

    // initial simplicial cone from d+1 independent constraints
    std::vector<size_t> basis;
    {
        RMatrix acc(0, d + 1);
        for (size_t k = 0; k < n && basis.size() < static_cast<size_t>(d) + 1; ++k) {
            RMatrix trial(acc.rows() + 1, d + 1);
            trial.topRows(acc.rows()) = acc;
            trial.row(acc.rows()) = normals.row(static_cast<Eigen::Index>(k));
            if (rank_exact(trial) == trial.rows()) {
                acc = std::move(trial);
                basis.push_back(k);
            }
        }
        // rays = columns of inverse(basis normals): a_i . r_j = delta_ij
    }
    RMatrix basis_rows(d + 1, d + 1);
    for (int r = 0; r <= d; ++r)
        basis_rows.row(r) = normals.row(static_cast<Eigen::Index>(basis[static_cast<size_t>(r)]));
    auto inv = inverse_exact(basis_rows);
    if (!inv) throw std::logic_error("dd_facets: initial basis not invertible");

    const size_t words = (n + 63) / 64;
    std::vector<detail::Ray> rays;
    for (int c = 0; c <= d; ++c) {
        detail::Ray ray;
        ray.coords = inv->col(c);
        detail::make_primitive(ray.coords);
        ray.zero = detail::ZeroSet(words, 0);
        for (int r = 0; r <= d; ++r)
            if (r != c) detail::zs_set(ray.zero, basis[static_cast<size_t>(r)]);
        rays.push_back(std::move(ray));
    }

    std::vector<bool> processed(n, false);
    for (size_t b : basis) processed[b] = true;

    auto dot = [&normals, d](size_t k, const RVector& ray) {
        Rational s(0);
        for (int c = 0; c <= d; ++c) s += normals(static_cast<Eigen::Index>(k), c) * ray[c];
        return s;
    };

    size_t done = basis.size();
    for (size_t k = 0; k < n; ++k) {
        if (processed[k]) continue;
        std::vector<Rational> vals(rays.size());
        std::vector<size_t> pos, neg;
        for (size_t r = 0; r < rays.size(); ++r) {
            vals[r] = dot(k, rays[r].coords);
            if (vals[r] > Rational(0))
                pos.push_back(r);
            else if (vals[r] < Rational(0))
                neg.push_back(r);
            else
                detail::zs_set(rays[r].zero, k);
        }
        if (!neg.empty()) {
            // combinatorial adjacency: p and n are adjacent iff no third ray's
            // zero set contains zero(p) & zero(n)
            std::vector<detail::Ray> created;
            const size_t kept = rays.size() - neg.size();
            const size_t min_common = static_cast<size_t>(d) - 1;
            for (size_t p : pos)
                for (size_t ng : neg) {
                    detail::ZeroSet common = detail::zs_and(rays[p].zero, rays[ng].zero);
                    if (detail::zs_count(common) < min_common) continue;
                    bool adjacent = true;
                    for (size_t r = 0; r < rays.size(); ++r) {
                        if (r == p || r == ng) continue;
                        if (detail::zs_subset(common, rays[r].zero)) {
                            adjacent = false;
                            break;
                        }
                    }
                    if (!adjacent) continue;
                    detail::Ray fresh;
                    fresh.coords = vals[p] * rays[ng].coords - vals[ng] * rays[p].coords;
                    detail::make_primitive(fresh.coords);
                    fresh.zero = std::move(common);
                    detail::zs_set(fresh.zero, k);
                    created.push_back(std::move(fresh));
                    if (kept + created.size() > options.max_rays)
                        throw DDResourceError(kept + created.size(), done, n);
                }
            std::vector<detail::Ray> next;
            next.reserve(kept + created.size());
            for (size_t r = 0; r < rays.size(); ++r)
                if (!(vals[r] < Rational(0))) next.push_back(std::move(rays[r]));
            for (auto& ray : created) next.push_back(std::move(ray));
            rays = std::move(next);
        }
        processed[k] = true;
        ++done;
    }

    // each extreme ray (y0, y) is the valid inequality  -y . x <= y0
    std::vector<CGInequality> facets;
    facets.reserve(rays.size());
    for (size_t r = 0; r < rays.size(); ++r) {
        VecX<Rational> ca(sc.m_a), cb(sc.m_b);
        MatX<Rational> cj(sc.m_a, sc.m_b);
        const RVector& y = rays[r].coords;
        for (int i = 0; i < sc.m_a; ++i) ca[i] = -y[1 + sc.cg_index_marg_a(i)];
        for (int j = 0; j < sc.m_b; ++j) cb[j] = -y[1 + sc.cg_index_marg_b(j)];
        for (int i = 0; i < sc.m_a; ++i)
            for (int j = 0; j < sc.m_b; ++j) cj(i, j) = -y[1 + sc.cg_index_joint(i, j)];
        facets.emplace_back("facet_" + std::to_string(r), sc, std::move(ca), std::move(cb),
                            std::move(cj), y[0]);
    }
    return facets;
}

}  // namespace nlm
