#include "horolab/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace horolab {

namespace {

void check_root_index(const CartanVector& x, int i, const char* who) {
    if (i < 1 || i > x.n() - 1)
        throw std::out_of_range(std::string(who) + ": root index " + std::to_string(i) +
                                " out of range for n=" + std::to_string(x.n()));
}

} // namespace

CartanVector::CartanVector(Eigen::VectorXd entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2)
        throw std::invalid_argument("CartanVector: need n >= 2 entries");
}

bool CartanVector::is_traceless(double tol) const {
    const double scale = std::max(1.0, entries_.lpNorm<Eigen::Infinity>());
    return std::abs(trace()) <= tol * scale;
}

CartanVector CartanVector::projected() const {
    return CartanVector(entries_.array() - entries_.mean());
}

CartanVector CartanVector::normalized() const {
    const double len = entries_.norm();
    if (len == 0.0) throw std::invalid_argument("CartanVector: cannot normalize zero vector");
    return CartanVector(entries_ / len);
}

CartanVector CartanVector::operator+(const CartanVector& other) const {
    return CartanVector(entries_ + other.entries_);
}

CartanVector CartanVector::operator-(const CartanVector& other) const {
    return CartanVector(entries_ - other.entries_);
}

CartanVector CartanVector::operator*(double s) const { return CartanVector(entries_ * s); }

double eval_root(const CartanVector& x, int i) {
    check_root_index(x, i, "eval_root");
    return x[i - 1] - x[i];
}

double eval_weight(const CartanVector& x, int i) {
    check_root_index(x, i, "eval_weight");
    return x.entries().head(i).sum();
}

double depth(const CartanVector& x) {
    // evaluated through eval_weight so the two agree bit-for-bit
    double d = std::numeric_limits<double>::infinity();
    for (int i = 1; i < x.n(); ++i) d = std::min(d, eval_weight(x, i));
    return d;
}

double t_min(const CartanVector& x) { return depth(x); }

bool cone_membership(const CartanVector& x, const ConeKind& cone) {
    const int n = x.n();
    switch (cone.tag) {
    case ConeKind::Tag::WeylChamber:
        for (int i = 1; i < n; ++i)
            if (!(eval_root(x, i) > 0.0)) return false;
        return true;
    case ConeKind::Tag::Convergence: {
        std::set<int> removed(cone.removed_roots.begin(), cone.removed_roots.end());
        for (int i = 1; i < n; ++i) {
            if (removed.count(i)) continue;
            if (!(eval_weight(x, i) > 0.0)) return false;
        }
        return true;
    }
    case ConeKind::Tag::Cj: {
        if (cone.j < 1 || cone.j > n - 1)
            throw std::out_of_range("cone_membership: C_j needs 1 <= j <= n-1");
        const double head_min = x.entries().head(cone.j).minCoeff();
        const double tail_max = x.entries().tail(n - cone.j).maxCoeff();
        return head_min >= tail_max; // non-strict, as defined
    }
    case ConeKind::Tag::CjUnion:
        for (int j = 1; j < n; ++j)
            if (cone_membership(x, ConeKind::cj(j))) return true;
        return false;
    }
    return false;
}

CartanVector f_projection(const CartanVector& x, const std::vector<int>& F) {
    const int n = x.n();
    std::set<int> keep;
    for (int i : F) {
        check_root_index(x, i, "f_projection");
        keep.insert(i);
    }
    // weights of the projection: lambda_i for i in F, 0 otherwise; recover
    // entries as successive differences of the padded weight sequence
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n + 1); // w[0]=0, w[n]=0 (traceless)
    for (int i = 1; i < n; ++i)
        if (keep.count(i)) w[i] = eval_weight(x, i);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = w[i + 1] - w[i];
    return CartanVector(std::move(y));
}

CartanVector rho_delta(int n) {
    if (n < 2) throw std::invalid_argument("rho_delta: n >= 2 required");
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = static_cast<double>(n - 1 - 2 * i);
    return CartanVector(std::move(v));
}

std::pair<CartanVector, CartanVector> factor_flow(const CartanVector& theta, double c_max) {
    if (!(c_max > 0.0 && c_max < 1.0))
        throw std::invalid_argument("factor_flow: c_max must lie in (0,1)");
    const double d = depth(theta);
    if (!(d > 0.0))
        throw NotInCone("factor_flow: direction not in the interior of the convergence cone"
                        " (depth <= 0)");
    const CartanVector rho_hat = rho_delta(theta.n()).normalized();

    auto admissible = [&](double c) {
        // every weight of theta - c*d*rho_hat stays >= 0
        double partial = 0.0;
        for (int i = 0; i + 1 < theta.n(); ++i) {
            partial += theta[i] - c * d * rho_hat[i];
            if (partial < 0.0) return false;
        }
        return true;
    };

    double c = c_max;
    if (!admissible(c)) {
        // weights are strictly decreasing in c, so the admissible set is an
        // interval [0, c*]; bisect for its right endpoint
        double lo = 0.0, hi = c_max;
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            (admissible(mid) ? lo : hi) = mid;
        }
        c = lo;
    }
    CartanVector a_dir = rho_hat * (c * d);
    CartanVector b_dir = theta - a_dir;
    return {std::move(a_dir), std::move(b_dir)};
}

int BlockStructure::offset(int b) const {
    int off = 0;
    for (int i = 0; i < b; ++i) off += sizes[i];
    return off;
}

BlockStructure block_structure(int n, const std::vector<int>& cuts) {
    if (n < 2) throw std::invalid_argument("block_structure: n >= 2 required");
    std::set<int> c(cuts.begin(), cuts.end());
    for (int i : c)
        if (i < 1 || i > n - 1)
            throw std::out_of_range("block_structure: cut index out of [1, n-1]");
    BlockStructure bs;
    bs.n = n;
    int prev = 0;
    for (int i : c) {
        bs.sizes.push_back(i - prev);
        prev = i;
    }
    bs.sizes.push_back(n - prev);
    return bs;
}

} // namespace horolab
