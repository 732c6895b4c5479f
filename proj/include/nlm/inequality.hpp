#pragma once

#include <json.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlm/behavior.hpp"
#include "nlm/rational.hpp"
#include "nlm/scenario.hpp"

namespace nlm {

/// A Bell-type inequality over Collins-Gisin coordinates,
///   sum_i cA_i P_i(0) + sum_j cB_j P_j(0) + sum_ij cJ_ij P_ij(0,0) <= bound.
/// The built-in catalog and the text format use bound 0; facet enumeration
/// may produce normalization-type facets with a nonzero bound.
struct CGInequality {
    std::string name;
    Scenario scenario;
    VecX<Rational> coeff_a, coeff_b;
    MatX<Rational> coeff_joint;  // (i, j) indexed Alice x Bob
    Rational bound = Rational(0);

    CGInequality(std::string nm, Scenario sc, VecX<Rational> ca, VecX<Rational> cb,
                 MatX<Rational> cj, Rational bd = Rational(0))
        : name(std::move(nm)),
          scenario(sc),
          coeff_a(std::move(ca)),
          coeff_b(std::move(cb)),
          coeff_joint(std::move(cj)),
          bound(std::move(bd)) {
        if (coeff_a.size() != sc.m_a || coeff_b.size() != sc.m_b ||
            coeff_joint.rows() != sc.m_a || coeff_joint.cols() != sc.m_b)
            throw std::invalid_argument("CGInequality: coefficient dimensions do not match scenario");
    }
};

/// Term-by-term contraction of the coefficient table with the point.
template <typename S>
S evaluate(const CGInequality& ineq, const CGPoint<S>& point) {
    if (!(ineq.scenario == point.scenario()))
        throw std::invalid_argument("evaluate: inequality and point scenarios differ");
    S total = S(0);
    for (int i = 0; i < ineq.scenario.m_a; ++i)
        total += scalar_cast<S>(ineq.coeff_a[i]) * point.marg_a()[i];
    for (int j = 0; j < ineq.scenario.m_b; ++j)
        total += scalar_cast<S>(ineq.coeff_b[j]) * point.marg_b()[j];
    for (int i = 0; i < ineq.scenario.m_a; ++i)
        for (int j = 0; j < ineq.scenario.m_b; ++j)
            total += scalar_cast<S>(ineq.coeff_joint(i, j)) * point.joint()(i, j);
    return total;
}

namespace detail {

inline CGInequality make_ineq(const std::string& name, int ma, int mb,
                              std::initializer_list<long long> ca,
                              std::initializer_list<long long> cb,
                              std::initializer_list<std::initializer_list<long long>> rows_by_bob) {
    Scenario sc(ma, mb);
    VecX<Rational> a(ma), b(mb);
    MatX<Rational> j(ma, mb);
    int i = 0;
    for (long long v : ca) a[i++] = Rational(v);
    int jj = 0;
    for (long long v : cb) b[jj++] = Rational(v);
    int row = 0;
    for (const auto& r : rows_by_bob) {
        int col = 0;
        for (long long v : r) j(col++, row) = Rational(v);
        ++row;
    }
    return {name, sc, std::move(a), std::move(b), std::move(j)};
}

}  // namespace detail

/// Built-in catalog. Tables follow the printed convention: the joint rows
/// below are indexed by Bob's setting, columns by Alice's.
inline CGInequality builtin(const std::string& name) {
    if (name == "i3322")
        return detail::make_ineq("i3322", 3, 3, {-1, 0, 0}, {-2, -1, 0},
                                 {{1, 1, 1}, {1, 1, -1}, {1, -1, 0}});
    if (name == "m3322")
        return detail::make_ineq("m3322", 3, 3, {-2, 0, 0}, {-2, -1, 0},
                                 {{1, 1, 1}, {1, 1, -1}, {1, -1, 0}});
    if (name == "i4322")
        return detail::make_ineq("i4322", 4, 3, {-1, 0, 0, 0}, {-2, -1, 0},
                                 {{1, 1, 1, 0}, {1, 0, -1, 1}, {1, -1, 0, -1}});
    if (name == "m4322")
        return detail::make_ineq("m4322", 4, 3, {-2, 0, 0, 0}, {-2, -1, 0},
                                 {{1, 1, 1, 0}, {1, 0, -1, 1}, {1, -1, 0, -1}});
    if (name == "chsh")
        return detail::make_ineq("chsh", 2, 2, {-1, 0}, {-1, 0}, {{1, 1}, {1, -1}});
    throw std::invalid_argument("builtin: unknown inequality '" + name + "'");
}

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"chsh", "i3322", "m3322", "i4322", "m4322"};
    return names;
}

// ---- text format ------------------------------------------------------------
// Mirrors the printed tables: optional "# name" line, then "mA mB [bound]",
// Alice marginal coefficients, and m_B lines "bobCoeff | joint row".

inline std::string serialize_inequality(const CGInequality& ineq) {
    std::ostringstream os;
    if (!ineq.name.empty()) os << "# " << ineq.name << "\n";
    os << ineq.scenario.m_a << " " << ineq.scenario.m_b;
    if (!(ineq.bound == Rational(0))) os << " " << ineq.bound.to_string();
    os << "\n";
    for (int i = 0; i < ineq.scenario.m_a; ++i) os << (i ? " " : "") << ineq.coeff_a[i];
    os << "\n";
    for (int j = 0; j < ineq.scenario.m_b; ++j) {
        os << ineq.coeff_b[j] << " |";
        for (int i = 0; i < ineq.scenario.m_a; ++i) os << " " << ineq.coeff_joint(i, j);
        os << "\n";
    }
    return os.str();
}

inline CGInequality parse_inequality(const std::string& text) {
    std::istringstream is(text);
    std::string line, name;
    auto next_line = [&is, &line]() {
        while (std::getline(is, line)) {
            size_t s = line.find_first_not_of(" \t\r");
            if (s == std::string::npos) continue;
            return true;
        }
        return false;
    };
    if (!next_line()) throw std::invalid_argument("inequality: empty input");
    if (line[line.find_first_not_of(" \t")] == '#') {
        size_t h = line.find('#');
        size_t s = line.find_first_not_of(" \t", h + 1);
        if (s != std::string::npos) {
            name = line.substr(s);
            while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) name.pop_back();
        }
        if (!next_line()) throw std::invalid_argument("inequality: missing dimensions line");
    }
    int ma = 0, mb = 0;
    Rational bound(0);
    {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> ma >> mb)) throw std::invalid_argument("inequality: bad dimensions line");
        if (ls >> tok) bound = Rational::from_string(tok);
    }
    Scenario sc(ma, mb);
    VecX<Rational> ca(ma), cb(mb);
    MatX<Rational> cj(ma, mb);
    if (!next_line()) throw std::invalid_argument("inequality: missing Alice coefficients");
    {
        std::istringstream ls(line);
        std::string tok;
        for (int i = 0; i < ma; ++i) {
            if (!(ls >> tok)) throw std::invalid_argument("inequality: too few Alice coefficients");
            ca[i] = Rational::from_string(tok);
        }
        if (ls >> tok) throw std::invalid_argument("inequality: too many Alice coefficients");
    }
    for (int j = 0; j < mb; ++j) {
        if (!next_line()) throw std::invalid_argument("inequality: missing joint row " + std::to_string(j));
        std::string row = line;
        size_t bar = row.find('|');
        if (bar == std::string::npos) throw std::invalid_argument("inequality: row missing '|'");
        {
            std::istringstream ls(row.substr(0, bar));
            std::string tok;
            if (!(ls >> tok)) throw std::invalid_argument("inequality: missing Bob coefficient");
            cb[j] = Rational::from_string(tok);
            if (ls >> tok) throw std::invalid_argument("inequality: extra tokens before '|'");
        }
        std::istringstream ls(row.substr(bar + 1));
        std::string tok;
        for (int i = 0; i < ma; ++i) {
            if (!(ls >> tok)) throw std::invalid_argument("inequality: too few joint coefficients");
            cj(i, j) = Rational::from_string(tok);
        }
        if (ls >> tok) throw std::invalid_argument("inequality: too many joint coefficients");
    }
    if (next_line()) throw std::invalid_argument("inequality: trailing content");
    return {name, sc, std::move(ca), std::move(cb), std::move(cj), bound};
}

inline nlohmann::json inequality_to_json(const CGInequality& ineq) {
    nlohmann::json j;
    j["name"] = ineq.name;
    j["mA"] = ineq.scenario.m_a;
    j["mB"] = ineq.scenario.m_b;
    j["bound"] = ineq.bound.to_string();
    j["cA"] = nlohmann::json::array();
    for (int i = 0; i < ineq.scenario.m_a; ++i) j["cA"].push_back(ineq.coeff_a[i].to_string());
    j["cB"] = nlohmann::json::array();
    for (int jb = 0; jb < ineq.scenario.m_b; ++jb) j["cB"].push_back(ineq.coeff_b[jb].to_string());
    j["cJ"] = nlohmann::json::array();
    for (int i = 0; i < ineq.scenario.m_a; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int jb = 0; jb < ineq.scenario.m_b; ++jb) row.push_back(ineq.coeff_joint(i, jb).to_string());
        j["cJ"].push_back(row);
    }
    return j;
}

/// Printed display table (columns = Alice, rows = Bob).
inline std::string format_inequality_table(const CGInequality& ineq) {
    std::ostringstream os;
    os << "      ";
    for (int i = 0; i < ineq.scenario.m_a; ++i) os << "\t" << ineq.coeff_a[i];
    os << "\n";
    for (int j = 0; j < ineq.scenario.m_b; ++j) {
        os << ineq.coeff_b[j] << " |";
        for (int i = 0; i < ineq.scenario.m_a; ++i) os << "\t" << ineq.coeff_joint(i, j);
        os << "\n";
    }
    return os.str();
}

struct MaxReport {
    Rational value;
    std::vector<size_t> argmax;
};

/// Exact maximum of the inequality over a vertex list, with every attaining
/// index.
inline MaxReport max_over_points(const CGInequality& ineq,
                                 const std::vector<CGPoint<Rational>>& points) {
    if (points.empty()) throw std::invalid_argument("max_over_points: empty point list");
    MaxReport rep{evaluate(ineq, points[0]), {0}};
    for (size_t k = 1; k < points.size(); ++k) {
        Rational v = evaluate(ineq, points[k]);
        if (v > rep.value) {
            rep.value = v;
            rep.argmax.assign(1, k);
        } else if (v == rep.value) {
            rep.argmax.push_back(k);
        }
    }
    return rep;
}

}  // namespace nlm
