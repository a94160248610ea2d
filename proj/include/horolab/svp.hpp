#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

#include "horolab/errors.hpp"

namespace horolab {

using IntVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// LLL-reduced basis together with the unimodular transform:
/// basis = input * transform.
struct LllResult {
    Eigen::MatrixXd basis;
    IntMat transform;
};

/// Textbook LLL on the columns (delta defaults to 0.99), floating-point
/// Gram-Schmidt. Intended for the small dimensions of this library (<= ~8).
LllResult lll_reduce(const Eigen::MatrixXd& basis, double delta = 0.99);

struct ShortestVector {
    double length = 0.0;
    IntVec coords; // integer coordinates in the *input* basis
};

/// Exact shortest nonzero vector of the lattice spanned by the columns:
/// LLL then Fincke-Pohst enumeration with radius set by the reduced basis.
ShortestVector first_minimum(const Eigen::MatrixXd& basis);

/// min over nonzero integer wedge vectors v of |Lambda^j(B) v|; computed as
/// the first minimum of the minors lattice. Throws DimensionTooLarge when
/// C(n,j) exceeds max_dim.
double shortest_vector_wedge(const Eigen::MatrixXd& basis, int j, int max_dim = 20);

/// Visits every lattice point B*x (including x = 0 when it qualifies) with
/// ||B*x - center|| <= radius. The callback receives the point and its
/// integer coordinates in the input basis. Throws EnumerationOverflow once
/// more than max_points points have been emitted.
void for_each_lattice_point_in_ball(
    const Eigen::MatrixXd& basis, const Eigen::VectorXd& center, double radius,
    const std::function<void(const Eigen::VectorXd&, const IntVec&)>& visit,
    std::int64_t max_points = 10'000'000);

} // namespace horolab
