#pragma once

#include <Eigen/Core>
#include <optional>
#include <stdexcept>

#include "nlm/rational.hpp"

namespace nlm {

using RMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

namespace detail {

/// Clears denominators row by row so the Bareiss recurrence stays integral.
inline RMatrix integerize_rows(const RMatrix& m) {
    RMatrix out = m;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        BigInt lcm(1);
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            const BigInt& d = out(r, c).den();
            lcm = lcm / BigInt::gcd(lcm, d) * d;
        }
        if (!lcm.is_one()) {
            Rational f(lcm, BigInt(1));
            for (Eigen::Index c = 0; c < out.cols(); ++c) out(r, c) *= f;
        }
    }
    return out;
}

}  // namespace detail

/// Exact linear rank via fraction-free (Bareiss) Gaussian elimination.
inline Eigen::Index rank_exact(const RMatrix& input) {
    if (input.rows() == 0 || input.cols() == 0) return 0;
    RMatrix m = detail::integerize_rows(input);
    const Eigen::Index rows = m.rows(), cols = m.cols();
    Rational prev_pivot(1);
    Eigen::Index rank = 0;
    for (Eigen::Index col = 0; col < cols && rank < rows; ++col) {
        Eigen::Index pivot_row = -1;
        for (Eigen::Index r = rank; r < rows; ++r)
            if (!m(r, col).is_zero()) {
                pivot_row = r;
                break;
            }
        if (pivot_row < 0) continue;
        if (pivot_row != rank) m.row(pivot_row).swap(m.row(rank));
        const Rational pivot = m(rank, col);
        // the rescale by pivot/prev_pivot applies to every trailing row, also
        // those already holding a zero in this column
        for (Eigen::Index r = rank + 1; r < rows; ++r) {
            for (Eigen::Index c = col + 1; c < cols; ++c)
                m(r, c) = (m(r, c) * pivot - m(r, col) * m(rank, c)) / prev_pivot;
            m(r, col) = Rational(0);
        }
        prev_pivot = pivot;
        ++rank;
    }
    return rank;
}

/// Affine rank of a point set given as matrix rows: the rank of the
/// differences against the first row (the dimension of the affine hull).
inline Eigen::Index affine_rank(const RMatrix& rows) {
    if (rows.rows() <= 1) return 0;
    RMatrix diffs(rows.rows() - 1, rows.cols());
    for (Eigen::Index r = 1; r < rows.rows(); ++r)
        for (Eigen::Index c = 0; c < rows.cols(); ++c) diffs(r - 1, c) = rows(r, c) - rows(0, c);
    return rank_exact(diffs);
}

/// Exact inverse by Gauss-Jordan elimination; nullopt when singular.
inline std::optional<RMatrix> inverse_exact(const RMatrix& input) {
    if (input.rows() != input.cols()) throw std::invalid_argument("inverse_exact: matrix not square");
    const Eigen::Index n = input.rows();
    RMatrix m = input;
    RMatrix inv = RMatrix::Constant(n, n, Rational(0));
    for (Eigen::Index i = 0; i < n; ++i) inv(i, i) = Rational(1);
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot_row = -1;
        for (Eigen::Index r = col; r < n; ++r)
            if (!m(r, col).is_zero()) {
                pivot_row = r;
                break;
            }
        if (pivot_row < 0) return std::nullopt;
        if (pivot_row != col) {
            m.row(pivot_row).swap(m.row(col));
            inv.row(pivot_row).swap(inv.row(col));
        }
        const Rational pivot = m(col, col);
        for (Eigen::Index c = 0; c < n; ++c) {
            m(col, c) /= pivot;
            inv(col, c) /= pivot;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == col || m(r, col).is_zero()) continue;
            const Rational factor = m(r, col);
            for (Eigen::Index c = 0; c < n; ++c) {
                m(r, c) -= factor * m(col, c);
                inv(r, c) -= factor * inv(col, c);
            }
        }
    }
    return inv;
}

}  // namespace nlm
