#include "horolab/svp.hpp"

#include <cmath>
#include <limits>

#include "horolab/exterior.hpp"

namespace horolab {

namespace {

// floating-point Gram-Schmidt of the columns: mu lower-triangular
// coefficients, c = squared norms of the orthogonalized vectors
void gso(const Eigen::MatrixXd& b, Eigen::MatrixXd& mu, Eigen::VectorXd& c) {
    const int n = static_cast<int>(b.cols());
    Eigen::MatrixXd bstar = b;
    mu.setZero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            mu(i, j) = b.col(i).dot(bstar.col(j)) / c(j);
            bstar.col(i) -= mu(i, j) * bstar.col(j);
        }
        c(i) = bstar.col(i).squaredNorm();
        if (!(c(i) > 0.0)) throw SingularInput("lll_reduce: rank-deficient basis");
    }
}

// upper-triangular factor with positive diagonal, and w = Q^T * center
void qr_upper(const Eigen::MatrixXd& b, const Eigen::VectorXd& center, Eigen::MatrixXd& r,
              Eigen::VectorXd& w) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    r = qr.matrixQR().triangularView<Eigen::Upper>();
    Eigen::MatrixXd q = qr.householderQ();
    w = q.transpose() * center;
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        if (r(i, i) < 0.0) {
            r.row(i) = -r.row(i);
            w(i) = -w(i);
        }
}

} // namespace

LllResult lll_reduce(const Eigen::MatrixXd& basis, double delta) {
    const int n = static_cast<int>(basis.cols());
    if (basis.rows() != n || n == 0)
        throw std::invalid_argument("lll_reduce: square basis required");
    if (!(delta > 0.25 && delta < 1.0))
        throw std::invalid_argument("lll_reduce: delta must lie in (1/4, 1)");

    Eigen::MatrixXd b = basis;
    IntMat u = IntMat::Identity(n, n);
    Eigen::MatrixXd mu;
    Eigen::VectorXd c(n);
    gso(b, mu, c);

    auto size_reduce = [&](int k, int j) {
        const double q = std::round(mu(k, j));
        if (q == 0.0) return;
        if (std::abs(q) > 4.6e18)
            throw Overflow("lll_reduce: size-reduction coefficient exceeds 64-bit range");
        const auto qi = static_cast<std::int64_t>(q);
        b.col(k) -= q * b.col(j);
        u.col(k) -= qi * u.col(j);
        for (int l = 0; l < j; ++l) mu(k, l) -= q * mu(j, l);
        mu(k, j) -= q;
    };

    int k = 1;
    long iterations = 0;
    const long max_iterations = 100000L * n * n + 10000;
    while (k < n) {
        if (++iterations > max_iterations)
            throw std::runtime_error("lll_reduce: iteration bound exceeded");
        size_reduce(k, k - 1);
        if (c(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * c(k - 1)) {
            for (int j = k - 2; j >= 0; --j) size_reduce(k, j);
            ++k;
        } else {
            b.col(k).swap(b.col(k - 1));
            u.col(k).swap(u.col(k - 1));
            gso(b, mu, c);
            k = std::max(k - 1, 1);
        }
    }
    return {std::move(b), std::move(u)};
}

ShortestVector first_minimum(const Eigen::MatrixXd& basis) {
    const int n = static_cast<int>(basis.cols());
    LllResult red = lll_reduce(basis);

    Eigen::MatrixXd r;
    Eigen::VectorXd w;
    qr_upper(red.basis, Eigen::VectorXd::Zero(n), r, w);

    Eigen::Index seed_col = 0;
    double best = red.basis.colwise().squaredNorm().minCoeff(&seed_col);
    IntVec best_x = IntVec::Zero(n);
    best_x(seed_col) = 1;

    IntVec x = IntVec::Zero(n);
    Eigen::VectorXd partial = Eigen::VectorXd::Zero(n + 1); // accumulated squares above level i

    // depth-first over levels n-1 .. 0; partial(i) = sum of the squared row
    // contributions for rows > i-1 ... maintained as partial(i) for rows >= i
    std::function<void(int)> descend = [&](int i) {
        if (i < 0) {
            const double norm2 = partial(0);
            if (norm2 > 0.0 && norm2 < best) {
                best = norm2;
                best_x = x;
            }
            return;
        }
        double y = 0.0;
        for (int j = i + 1; j < n; ++j) y += r(i, j) * static_cast<double>(x(j));
        const double budget = best - partial(i + 1);
        if (budget < 0.0) return;
        const double half_width = std::sqrt(budget) / r(i, i);
        const double center = -y / r(i, i);
        const auto lo = static_cast<std::int64_t>(std::ceil(center - half_width - 1e-12));
        const auto hi = static_cast<std::int64_t>(std::floor(center + half_width + 1e-12));
        for (std::int64_t xi = lo; xi <= hi; ++xi) {
            const double row = r(i, i) * static_cast<double>(xi) + y;
            const double acc = partial(i + 1) + row * row;
            if (acc >= best) continue;
            x(i) = xi;
            partial(i) = acc;
            descend(i - 1);
        }
        x(i) = 0;
    };
    descend(n - 1);

    ShortestVector out;
    out.length = std::sqrt(best);
    out.coords = red.transform * best_x;
    return out;
}

double shortest_vector_wedge(const Eigen::MatrixXd& basis, int j, int max_dim) {
    const int n = static_cast<int>(basis.cols());
    if (j < 1 || j > n - 1) throw std::out_of_range("shortest_vector_wedge: need 1 <= j <= n-1");
    const std::int64_t dim = binomial(n, j);
    if (dim > max_dim)
        throw DimensionTooLarge("shortest_vector_wedge: wedge dimension " + std::to_string(dim) +
                                " exceeds the configured bound " + std::to_string(max_dim));
    if (j == 1) return first_minimum(basis).length;
    Eigen::MatrixXd w = exterior_power<double>(basis, j);
    return first_minimum(w).length;
}

void for_each_lattice_point_in_ball(
    const Eigen::MatrixXd& basis, const Eigen::VectorXd& center, double radius,
    const std::function<void(const Eigen::VectorXd&, const IntVec&)>& visit,
    std::int64_t max_points) {
    const int n = static_cast<int>(basis.cols());
    if (!(radius > 0.0)) throw std::invalid_argument("lattice point enumeration: radius > 0");
    LllResult red = lll_reduce(basis);

    Eigen::MatrixXd r;
    Eigen::VectorXd w;
    qr_upper(red.basis, center, r, w);

    const double radius2 = radius * radius;
    IntVec x = IntVec::Zero(n);
    Eigen::VectorXd partial = Eigen::VectorXd::Zero(n + 1);
    std::int64_t emitted = 0;

    std::function<void(int)> descend = [&](int i) {
        if (i < 0) {
            if (++emitted > max_points)
                throw EnumerationOverflow("lattice point enumeration: more than " +
                                          std::to_string(max_points) + " points in the ball");
            visit(red.basis * x.cast<double>(), red.transform * x);
            return;
        }
        double y = -w(i);
        for (int j2 = i + 1; j2 < n; ++j2) y += r(i, j2) * static_cast<double>(x(j2));
        const double budget = radius2 - partial(i + 1);
        if (budget < 0.0) return;
        const double half_width = std::sqrt(budget) / r(i, i);
        const double c0 = -y / r(i, i);
        const auto lo = static_cast<std::int64_t>(std::ceil(c0 - half_width - 1e-12));
        const auto hi = static_cast<std::int64_t>(std::floor(c0 + half_width + 1e-12));
        for (std::int64_t xi = lo; xi <= hi; ++xi) {
            const double row = r(i, i) * static_cast<double>(xi) + y;
            const double acc = partial(i + 1) + row * row;
            if (acc > radius2) continue;
            x(i) = xi;
            partial(i) = acc;
            descend(i - 1);
        }
        x(i) = 0;
    };
    descend(n - 1);
}

} // namespace horolab
