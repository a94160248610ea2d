#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "horolab/cartan.hpp"
#include "horolab/fit.hpp"
#include "horolab/lattice.hpp"
#include "horolab/rng.hpp"
#include "horolab/unipotent.hpp"

namespace horolab {

/// Diagonal flow g_t = exp(t * theta) along a unit direction, a time grid,
/// and the base point acted on. theta is normalized on construction.
struct FlowSpec {
    CartanVector theta;
    std::vector<double> times;
    UnimodularLattice base;

    FlowSpec(const CartanVector& direction, std::vector<double> time_grid, UnimodularLattice z);
    static FlowSpec standard(const CartanVector& direction, std::vector<double> time_grid);
};

/// left translation by exp(t*x); refuses to overflow (|t*x_i| > 300)
UnimodularLattice translate(const UnimodularLattice& lattice, const CartanVector& x, double t);

/// one draw of the horospherical measure in box coordinates: s uniform on
/// [0,1)^d with d = n(n-1)/2
Eigen::VectorXd sample_horosphere(int n, CounterRng& rng);

struct EscapeCell {
    double t = 0.0;
    double eps = 0.0;
    double fraction = 0.0;
    double se = 0.0; // binomial standard error
    std::int64_t samples = 0;
};

struct EscapeSlope {
    double t = 0.0;
    LinearFit loglog;   // log fraction vs log eps, nonzero cells only
    int cells_used = 0; // zero-count cells are excluded from the regression
};

struct EscapeTable {
    std::vector<EscapeCell> cells; // grouped by t, following the given eps grid order
    std::vector<EscapeSlope> slopes;
};

/// Monte Carlo table of mu{ z : g_t z not in K_eps } with per-t log-log fits
EscapeTable escape_mass(const FlowSpec& flow, const std::vector<double>& eps_grid,
                        std::int64_t samples, std::uint64_t seed, int threads = 1);

struct GrowthSeries {
    std::vector<double> times;
    std::vector<double> sups;  // lower bounds of the true sup (grid + random probes)
    double fitted_rate = 0.0;  // slope of log sup against t
    double rate_se = 0.0;
    double alpha_hat = 0.0;        // fitted_rate / t_min(theta)
    double top_weight_rate = 0.0;  // lambda_j(theta), the highest wedge weight rate
    std::int64_t n_probes = 0;
};

/// sup_{u in B_U(r)} |Lambda^j(g_t u) v| sampled on a deterministic grid plus
/// random probes, with the exponential rate fitted over the time grid.
/// r = 0 probes only u = e.
GrowthSeries growth_slope(const FlowSpec& flow, int j, double r, const Eigen::VectorXd& wedge_v,
                          std::int64_t random_samples, std::uint64_t seed);

struct DiscrepancyPoint {
    double t = 0.0;
    double discrepancy = 0.0; // |mu-mean of phi(g_t .) - reference mean|
    double se = 0.0;          // standard error of the mean estimate
    std::int64_t samples = 0;
};

struct DiscrepancySeries {
    std::vector<DiscrepancyPoint> points;
    double reference_mean = 0.0;
    std::vector<int> window; // indices entering the fit: CI excludes 0, t*depth >= 1
    double delta_hat = 0.0;  // decay exponent against x = t * depth(theta)
    double delta_se = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Equidistribution discrepancy of the translated horospherical measure
/// against the Haar mean of phi, with the decay exponent fitted on the
/// post-noise-floor window. Throws ReferenceMeanMissing when no analytic or
/// supplied mean is available.
DiscrepancySeries discrepancy_series(const FlowSpec& flow, const TestFunction& phi,
                                     std::int64_t samples_per_time, std::uint64_t seed,
                                     std::optional<double> reference_mean = std::nullopt,
                                     int threads = 1);

/// One draw of the block-product measure mu_E: per-block Haar on the
/// diagonal SL_k factors (k <= 2) and uniform [0,1) entries in the
/// off-diagonal W part. Throws BlockTooLarge for blocks of size >= 3.
UnimodularLattice sample_mu_E(int n, const std::vector<int>& E, CounterRng& rng);

/// |det| of the left block-row dilation action of exp(x) on the W
/// coordinates: exp(sum_j m_j * S_j) with m_j the number of W columns right
/// of block j and S_j the entry sum of x over block j.
double w_block_jacobian(const CartanVector& x, const BlockStructure& blocks);

} // namespace horolab
