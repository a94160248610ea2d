#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horolab/fit.hpp"
#include "horolab/horocount.hpp"
#include "horolab/svp.hpp"

namespace horolab {

/// A rational point of a flag variety in primitive integer Pluecker
/// coordinates, one vector per flag step, each defined up to sign.
struct FlagPoint {
    std::vector<IntVec> pluecker;
};

/// Anticanonical height data: h(x) = prod_j |v_j|^(m_j).
struct HeightSpec {
    std::vector<int> exponents;
};

/// Exponents of the anticanonical character rho_E expanded in the
/// fundamental weights of the flag steps (the cut positions Delta \ E).
/// E is given as 1-based simple-root indices, E a proper subset of Delta.
HeightSpec anticanonical_exponents(int n, const std::vector<int>& E);

double height(const FlagPoint& x, const HeightSpec& spec);

/// primitivity of every step plus the exact integer incidence relation
/// between consecutive steps (only n <= 3 shapes arise here)
bool valid_flag(const FlagPoint& x, int n);

enum class Variety { P1, P2, P3, Flag3 };

Variety variety_from_string(const std::string& name);
std::string to_string(Variety v);
int variety_rank(Variety v);        // n of the ambient SL_n
int variety_pic_rank(Variety v);    // number of flag steps = #(Delta \ E)
HeightSpec variety_height(Variety v);

/// Exact N(T) for a single threshold.
std::int64_t count_points(Variety variety, double t_max);

/// Exact counts over a grid of thresholds (one enumeration pass, shared
/// across the grid).
CountSeries enumerate_points(Variety variety, const std::vector<double>& t_grid);

/// All points with height <= t_max, for desk-scale cross-checks.
std::vector<FlagPoint> list_points(Variety variety, double t_max, std::int64_t cap = 5'000'000);

struct ManinFit {
    PolyFit poly;                   // N(T)/T against log T, degree d-1
    double residual_exponent = 0.0; // decay rate of |N/T - p(log T)| in log T
    int degree = 0;
};

/// least-squares fit of N(T)/T against a degree-(d-1) polynomial in log T;
/// requires the grid to span at least two decades
ManinFit fit_manin(const CountSeries& series, int expected_pic_rank);

} // namespace horolab
