#include "horolab/unipotent.hpp"

#include <cmath>
#include <stdexcept>

namespace horolab {

std::vector<std::pair<int, int>> upper_positions(int n) {
    std::vector<std::pair<int, int>> pos;
    pos.reserve(unipotent_dim(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pos.emplace_back(i, j);
    return pos;
}

Eigen::MatrixXd unipotent_from_coordinates(const Eigen::VectorXd& s, int n) {
    if (s.size() != unipotent_dim(n))
        throw std::invalid_argument("unipotent_from_coordinates: wrong coordinate count");
    Eigen::MatrixXd u = Eigen::MatrixXd::Identity(n, n);
    const auto pos = upper_positions(n);
    for (std::size_t k = 0; k < pos.size(); ++k) {
        const auto [i, j] = pos[k];
        // right-multiply by I + s_k E_{ij}: col_j += s_k * col_i
        u.col(j) += s[static_cast<Eigen::Index>(k)] * u.col(i);
    }
    return u;
}

namespace {

void check_unipotent(const Eigen::MatrixXd& u) {
    const int n = static_cast<int>(u.rows());
    if (u.cols() != n) throw std::invalid_argument("unipotent: square matrix required");
    for (int i = 0; i < n; ++i) {
        if (std::abs(u(i, i) - 1.0) > 1e-9)
            throw std::invalid_argument("unipotent: diagonal must be 1");
        for (int j = 0; j < i; ++j)
            if (std::abs(u(i, j)) > 1e-9)
                throw std::invalid_argument("unipotent: lower part must vanish");
    }
}

} // namespace

Eigen::VectorXd coordinates_of(const Eigen::MatrixXd& u) {
    check_unipotent(u);
    const int n = static_cast<int>(u.rows());
    Eigen::MatrixXd cur = u;
    const auto pos = upper_positions(n);
    Eigen::VectorXd s(unipotent_dim(n));
    for (std::size_t k = 0; k < pos.size(); ++k) {
        const auto [i, j] = pos[k];
        const double c = cur(i, j);
        s[static_cast<Eigen::Index>(k)] = c;
        // left-multiply by I - c E_{ij}: row_i -= c * row_j
        cur.row(i) -= c * cur.row(j);
    }
    return s;
}

BoxReduction reduce_to_box(const Eigen::MatrixXd& u) {
    check_unipotent(u);
    const int n = static_cast<int>(u.rows());
    Eigen::MatrixXd cur = u;
    const auto pos = upper_positions(n);
    Eigen::VectorXd s(unipotent_dim(n));
    // processed positions are untouched by later strips, so after peeling the
    // fractional parts the remainder Theta(s)^{-1} u has integer entries
    for (std::size_t k = 0; k < pos.size(); ++k) {
        const auto [i, j] = pos[k];
        const double c = cur(i, j);
        const double frac = c - std::floor(c);
        s[static_cast<Eigen::Index>(k)] = frac;
        cur.row(i) -= frac * cur.row(j);
    }
    return {std::move(s), std::move(cur)};
}

} // namespace horolab
