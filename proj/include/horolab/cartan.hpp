#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "horolab/errors.hpp"

namespace horolab {

/// A diagonal direction in additive coordinates (t_1,...,t_n). All
/// root/weight/cone tests in the library are done additively, i.e. against
/// 0; multiplicative inputs (entries of a positive diagonal matrix) should
/// be mapped through log first.
///
/// Vectors of the Cartan algebra proper are traceless, and the operations
/// that transport lattices (translate, FlowSpec) insist on that. The cone
/// and weight formulas are well-defined for any diagonal vector, and the
/// literature's standard witnesses carry nonzero trace, so the type itself
/// does not reject them; query is_traceless() or call projected() when the
/// sl_n convention is needed.
class CartanVector {
public:
    explicit CartanVector(Eigen::VectorXd entries);

    static CartanVector zero(int n) { return CartanVector(Eigen::VectorXd::Zero(n)); }

    int n() const { return static_cast<int>(entries_.size()); }
    const Eigen::VectorXd& entries() const { return entries_; }
    double operator[](int i) const { return entries_[i]; } // 0-based

    double trace() const { return entries_.sum(); }
    bool is_traceless(double tol = 1e-12) const;
    /// orthogonal projection to the traceless hyperplane
    CartanVector projected() const;

    double norm() const { return entries_.norm(); }
    CartanVector normalized() const;

    CartanVector operator+(const CartanVector& other) const;
    CartanVector operator-(const CartanVector& other) const;
    CartanVector operator*(double s) const;

private:
    Eigen::VectorXd entries_;
};

/// alpha_i(t) = t_i - t_{i+1}, 1 <= i <= n-1
double eval_root(const CartanVector& x, int i);

/// lambda_i(t) = t_1 + ... + t_i, 1 <= i <= n-1
double eval_weight(const CartanVector& x, int i);

/// D(x) = min_i lambda_i(x); positive exactly on the interior of the
/// convergence cone.
double depth(const CartanVector& x);

/// Alias of depth; the minimum partial sum of the entries.
double t_min(const CartanVector& x);

// Cones in the Cartan algebra. WeylChamber and Convergence are open
// (strict inequalities); Cj keeps its non-strict >= as defined.
struct ConeKind {
    enum class Tag { WeylChamber, Convergence, Cj, CjUnion };

    Tag tag = Tag::WeylChamber;
    std::vector<int> removed_roots; // E, for Convergence; 1-based root indices
    int j = 0;                      // for Cj

    static ConeKind weyl_chamber() { return {Tag::WeylChamber, {}, 0}; }
    static ConeKind convergence(std::vector<int> E = {}) {
        return {Tag::Convergence, std::move(E), 0};
    }
    static ConeKind cj(int j) { return {Tag::Cj, {}, j}; }
    static ConeKind cj_union() { return {Tag::CjUnion, {}, 0}; }
};

bool cone_membership(const CartanVector& x, const ConeKind& cone);

/// The projection a_F: matches the weights of x on F (1-based root indices)
/// and kills the others. Idempotent; preserves tracelessness.
CartanVector f_projection(const CartanVector& x, const std::vector<int>& F);

/// Vector of the sum of positive roots: (n-1, n-3, ..., -(n-1)). Lies in the
/// interior of the Weyl chamber.
CartanVector rho_delta(int n);

/// Splits theta = a_dir + b_dir with a_dir in the open Weyl chamber and
/// b_dir in the closed convergence cone. a_dir = c_eff * depth(theta) * rho_hat
/// where rho_hat = rho_delta/|rho_delta| and c_eff is the largest value in
/// (0, c_max] keeping b_dir admissible, located by bisection to 1e-10.
/// Guarantee: |a_dir| = c_eff * depth(theta) with
/// c_eff >= min(c_max, 1/max_i lambda_i(rho_hat)) > 0.
/// Throws NotInCone when depth(theta) <= 0.
std::pair<CartanVector, CartanVector> factor_flow(const CartanVector& theta, double c_max);

/// Diagonal block sizes (k_1,...,k_{l+1}) of the group Q cut at the root
/// positions in `cuts` (1-based, each in [1, n-1]). Empty cuts give the
/// single block (n).
struct BlockStructure {
    int n = 0;
    std::vector<int> sizes;

    int blocks() const { return static_cast<int>(sizes.size()); }
    // first row/col index (0-based) of block b
    int offset(int b) const;
};

BlockStructure block_structure(int n, const std::vector<int>& cuts);

} // namespace horolab
