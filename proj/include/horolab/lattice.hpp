#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>

#include "horolab/bump.hpp"
#include "horolab/rng.hpp"
#include "horolab/svp.hpp"

namespace horolab {

/// A point of SL_n(R)/SL_n(Z): the columns of `basis` generate a lattice of
/// covolume 1.
class UnimodularLattice {
public:
    explicit UnimodularLattice(Eigen::MatrixXd basis);

    static UnimodularLattice standard(int n) {
        return UnimodularLattice(Eigen::MatrixXd::Identity(n, n));
    }

    int n() const { return static_cast<int>(basis_.rows()); }
    const Eigen::MatrixXd& basis() const { return basis_; }

    /// JSON array of basis rows, row-major, 17 significant digits
    std::string to_json() const;
    static UnimodularLattice from_json(const std::string& text);

private:
    Eigen::MatrixXd basis_;
};

/// first minimum >= eps (inclusive); the compact set K_eps of Mahler's
/// criterion
bool in_K_eps(const UnimodularLattice& lattice, double eps);

/// Lower bound c * eps^n for the injectivity radius of K_eps. The constant c
/// is a calibrated artifact constant (see kInjectivityConstant), chosen so
/// that randomized conjugation checks never violate the bound; only the
/// power law is meaningful.
double injectivity_radius_lower(double eps, int n);
inline constexpr double kInjectivityConstant = 0.05;

/// Siegel transform z -> sum_{v in z, v != 0} f(v); when primitive_only is
/// set the sum runs over primitive lattice vectors only.
struct SiegelTransform {
    Bump f;
    bool primitive_only = false;
};

/// Smooth ramp in the first minimum: 0 below eps0-width, 1 at eps0 and
/// above; width -> 0 recovers the indicator of K_{eps0}.
struct SmoothedCompactIndicator {
    double eps0;
    double width;
};

using TestFunction = std::variant<SiegelTransform, SmoothedCompactIndicator>;

double eval_test_function(const TestFunction& phi, const UnimodularLattice& lattice,
                          std::int64_t max_points = 10'000'000);

/// Analytic Haar mean when available: integral of f for a Siegel transform
/// (divided by zeta(n) for the primitive variant); nullopt otherwise.
std::optional<double> haar_mean(const TestFunction& phi, int n);

/// Riemann zeta for integer s >= 2, to 1e-12 (direct sum + Euler-Maclaurin tail)
double zeta(int s);

/// One Haar draw on SL_2(R)/SL_2(Z) as a 2x2 basis: rejection sampling of
/// the modular fundamental domain in Iwasawa coordinates, times a uniform
/// rotation.
Eigen::Matrix2d haar_sl2_matrix(CounterRng& rng);

/// i.i.d. Haar samples on SL_2(R)/SL_2(Z): rejection sampling of the modular
/// fundamental domain in Iwasawa coordinates, times a random rotation.
class HaarRank1Sampler {
public:
    explicit HaarRank1Sampler(std::uint64_t seed, std::uint64_t stream = 0)
        : rng_(seed, stream) {}

    UnimodularLattice next();

private:
    CounterRng rng_;
};

} // namespace horolab
