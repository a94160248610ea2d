#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "horolab/errors.hpp"
#include "horolab/fit.hpp"
#include "horolab/svp.hpp"

namespace horolab {

/// A parameter grid with exact counts.
struct CountSeries {
    std::vector<double> param;        // ascending grid (R or T)
    std::vector<std::int64_t> counts; // exact, nondecreasing
};

/// Base point of the closed horosphere: a positive diagonal of determinant 1.
struct HorosphereSpec {
    Eigen::VectorXd a0;

    explicit HorosphereSpec(Eigen::VectorXd diag);
    int n() const { return static_cast<int>(a0.size()); }
};

/// Representative of a coset gamma * (Gamma cap U) together with its
/// canonical key: the first column, and for n = 3 also the 2x2 minors of the
/// first two columns (lex order (12), (13), (23)). The key is a complete
/// coset invariant; signs are not normalized (both signs are distinct
/// cosets).
struct CosetRep {
    IntMat gamma;
    std::vector<std::int64_t> key;
};

std::vector<std::int64_t> coset_key(const IntMat& gamma);

/// Streams every coset whose canonical key has all entries bounded by
/// `bound` in absolute value, each exactly once. n = 2 or 3.
void enumerate_cosets(int n, std::int64_t bound, const std::function<void(const CosetRep&)>& visit);
std::vector<CosetRep> enumerate_cosets(int n, std::int64_t bound);

/// gamma * a0 * U meets the ball of radius R around the identity coset:
/// ||log a(gamma a0)|| <= R via the Iwasawa A-part. Well-defined on the
/// coset (the A-part is right-U invariant and a0 normalizes U).
bool coset_in_ball(const CosetRep& coset, const HorosphereSpec& spec, double R);

/// Exact N(R) over the grid. The enumeration is certified: a coset meeting
/// the ball of radius R has first-column norm at most
/// exp(R*sqrt(1-1/n))/a0_1 (and minor norm exp(R*sqrt(1-1/n))/(a0_1*a0_2)
/// for n = 3), so keys outside the box of size `bound` cannot contribute.
/// Throws BoundTooSmall when `bound` does not cover the largest radius.
CountSeries count_lifts(const HorosphereSpec& spec, const std::vector<double>& r_grid,
                        std::int64_t bound);

/// The certified enumeration bound for the given spec and maximal radius.
std::int64_t required_coset_bound(const HorosphereSpec& spec, double r_max);

struct GrowthFit {
    double rate = 0.0; // slope of log N against R
    double rate_se = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int logpoly_degree = 0;        // n-2, for reference
    std::vector<double> residuals; // |log N - fit| per grid point
};

/// least-squares fit of log N(R) against R; needs >= 6 grid points
GrowthFit fit_growth(const CountSeries& series, int logpoly_degree = 0);

} // namespace horolab
