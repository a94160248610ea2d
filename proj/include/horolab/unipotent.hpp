#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace horolab {

/// strictly-upper entry positions in row-major order (0-based pairs);
/// this order fixes the coordinates of the second kind used everywhere
std::vector<std::pair<int, int>> upper_positions(int n);

inline int unipotent_dim(int n) { return n * (n - 1) / 2; }

/// Theta(s) = exp(s_1 X_1) ... exp(s_d X_d) over the row-major basis
/// X_k = E_{i_k, j_k}
Eigen::MatrixXd unipotent_from_coordinates(const Eigen::VectorXd& s, int n);

/// exact inverse of unipotent_from_coordinates (sequential strip, top row
/// first)
Eigen::VectorXd coordinates_of(const Eigen::MatrixXd& u);

/// u = Theta(s) * gamma with s in [0,1)^d and gamma integral unipotent
struct BoxReduction {
    Eigen::VectorXd s;
    Eigen::MatrixXd gamma;
};

BoxReduction reduce_to_box(const Eigen::MatrixXd& u);

} // namespace horolab
