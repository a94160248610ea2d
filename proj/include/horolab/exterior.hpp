#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "horolab/errors.hpp"

namespace horolab {

/// k-element subsets of {0,...,n-1} in lexicographic order; this fixes the
/// basis e_S = e_{s1} ^ ... ^ e_{sk} (s1 < ... < sk) of the exterior power.
std::vector<std::vector<int>> wedge_basis(int n, int k);

std::int64_t binomial(int n, int k);

namespace detail {

// determinant of the (rows, cols) submatrix by Laplace expansion along the
// first listed row; exact over integer scalars, adequate for the small j
// used here
template <typename Mat>
typename Mat::Scalar minor_det(const Mat& g, const std::vector<int>& rows,
                               const std::vector<int>& cols) {
    using Scalar = typename Mat::Scalar;
    const int k = static_cast<int>(rows.size());
    if (k == 1) return g(rows[0], cols[0]);
    if (k == 2)
        return g(rows[0], cols[0]) * g(rows[1], cols[1]) -
               g(rows[0], cols[1]) * g(rows[1], cols[0]);
    Scalar acc = Scalar(0);
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    std::vector<int> sub_cols;
    sub_cols.reserve(k - 1);
    Scalar sign = Scalar(1);
    for (int c = 0; c < k; ++c) {
        sub_cols.clear();
        for (int m = 0; m < k; ++m)
            if (m != c) sub_cols.push_back(cols[m]);
        acc += sign * g(rows[0], cols[c]) * minor_det(g, sub_rows, sub_cols);
        sign = -sign;
    }
    return acc;
}

} // namespace detail

/// The induced matrix of g on the j-th exterior power: entry (S,T) is the
/// minor det g[S,T] over the lexicographic wedge basis. Functorial:
/// exterior_power(g*h, j) = exterior_power(g, j) * exterior_power(h, j),
/// exactly so over integer scalars.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
exterior_power(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g, int j) {
    const int n = static_cast<int>(g.rows());
    if (g.cols() != n) throw std::invalid_argument("exterior_power: square matrix required");
    if (j < 1 || j > n) throw std::out_of_range("exterior_power: need 1 <= j <= n");
    if (j == 1) return g;
    const auto basis = wedge_basis(n, j);
    const int N = static_cast<int>(basis.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> w(N, N);
    for (int col = 0; col < N; ++col)
        for (int row = 0; row < N; ++row)
            w(row, col) = detail::minor_det(g, basis[row], basis[col]);
    return w;
}

} // namespace horolab
