#pragma once

#include <Eigen/Dense>

#include "horolab/errors.hpp"

namespace horolab {

/// g = k * a * u with k orthogonal, a positive diagonal, u unit upper
/// triangular. For unimodular g the a-part has determinant 1.
struct IwasawaTriple {
    Eigen::MatrixXd k;
    Eigen::VectorXd a; // diagonal entries, all > 0
    Eigen::MatrixXd u;

    Eigen::MatrixXd reconstruct() const { return k * a.asDiagonal() * u; }
};

/// QR on columns with the diagonal of R normalized positive; unique, and the
/// a-part is invariant under right multiplication by unit upper triangulars.
/// Throws SingularInput on (numerically) rank-deficient input.
IwasawaTriple iwasawa(const Eigen::MatrixXd& g);

/// ||log a(g)|| — the Euclidean norm of the additive A-part. This is the
/// distance d(x0, x0 g) in the symmetric space when g has determinant 1.
double iwasawa_a_log_norm(const Eigen::MatrixXd& g);

} // namespace horolab
