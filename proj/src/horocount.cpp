#include "horolab/horocount.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "horolab/exterior.hpp"
#include "horolab/intlinalg.hpp"
#include "horolab/iwasawa.hpp"

namespace horolab {

HorosphereSpec::HorosphereSpec(Eigen::VectorXd diag) : a0(std::move(diag)) {
    if (a0.size() < 2) throw std::invalid_argument("HorosphereSpec: n >= 2 required");
    double det = 1.0;
    for (Eigen::Index i = 0; i < a0.size(); ++i) {
        if (!(a0[i] > 0.0)) throw std::invalid_argument("HorosphereSpec: entries must be positive");
        det *= a0[i];
    }
    if (std::abs(det - 1.0) > 1e-12)
        throw std::invalid_argument("HorosphereSpec: determinant must be 1 (got " +
                                    std::to_string(det) + ")");
}

std::vector<std::int64_t> coset_key(const IntMat& gamma) {
    const int n = static_cast<int>(gamma.rows());
    std::vector<std::int64_t> key;
    for (int i = 0; i < n; ++i) key.push_back(gamma(i, 0));
    if (n >= 3) {
        // 2x2 minors of the first two columns, rows (0,1), (0,2), (1,2)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                key.push_back(gamma(a, 0) * gamma(b, 1) - gamma(b, 0) * gamma(a, 1));
    }
    return key;
}

namespace {

// lift a valid (first column, minor vector) key to an SL_3(Z) representative
IntMat lift_flag_key(const IntVec& v, const IntVec& p) {
    IntMat m = complete_to_sl(v);
    const IntMat m_inv = integer_inverse(m);
    const IntMat wedge_inv = exterior_power<std::int64_t>(m_inv, 2);
    IntVec pp = wedge_inv * p; // key of the pulled-back flag; pp like e1 ^ (.)
    if (pp[2] != 0)
        throw std::invalid_argument("lift_flag_key: key fails the incidence relation");
    const Bezout bz = ext_gcd(pp[0], pp[1]);
    if (bz.g != 1) throw std::invalid_argument("lift_flag_key: minor vector is not primitive");
    IntMat flag(3, 3);
    // columns e1, (0, pp12, pp13), (0, -y, x) with x*pp12 + y*pp13 = 1
    flag << 1, 0, 0, 0, pp[0], -bz.y, 0, pp[1], bz.x;
    IntMat gamma = m * flag;
    return gamma;
}

} // namespace

void enumerate_cosets(int n, std::int64_t bound,
                      const std::function<void(const CosetRep&)>& visit) {
    if (bound < 1) throw std::invalid_argument("enumerate_cosets: bound >= 1 required");
    if (n == 2) {
        for (std::int64_t p = -bound; p <= bound; ++p)
            for (std::int64_t q = -bound; q <= bound; ++q) {
                if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
                IntVec v(2);
                v << p, q;
                CosetRep rep;
                rep.gamma = complete_to_sl(v);
                rep.key = coset_key(rep.gamma);
                visit(rep);
            }
        return;
    }
    if (n != 3) throw UnsupportedRank("enumerate_cosets: only n = 2, 3 supported");

    for (std::int64_t v1 = -bound; v1 <= bound; ++v1)
        for (std::int64_t v2 = -bound; v2 <= bound; ++v2)
            for (std::int64_t v3 = -bound; v3 <= bound; ++v3) {
                if (std::gcd(std::gcd(std::abs(v1), std::abs(v2)), std::abs(v3)) != 1) continue;
                IntVec v(3);
                v << v1, v2, v3;
                // integer basis of {q : <q,v> = 0}: rows 2,3 of the inverse of
                // a completion of v
                const IntMat m = complete_to_sl(v);
                const IntMat mi = integer_inverse(m);
                const IntVec b1 = mi.row(1).transpose();
                const IntVec b2 = mi.row(2).transpose();
                // enumerate q = alpha*b1 + beta*b2 with |q|_inf <= bound;
                // coefficient box from Cramer bounds on the 2x2 subsystems
                const double nb1 = b1.cast<double>().norm(), nb2 = b2.cast<double>().norm();
                const double cross = std::sqrt(std::max(
                    1.0, (nb1 * nb1) * (nb2 * nb2) -
                             std::pow(static_cast<double>(b1.dot(b2)), 2.0)));
                const double cap = std::sqrt(3.0) * static_cast<double>(bound);
                const auto amax = static_cast<std::int64_t>(std::floor(cap * nb2 / cross)) + 1;
                const auto bmax = static_cast<std::int64_t>(std::floor(cap * nb1 / cross)) + 1;
                for (std::int64_t alpha = -amax; alpha <= amax; ++alpha)
                    for (std::int64_t beta = -bmax; beta <= bmax; ++beta) {
                        if (std::gcd(std::abs(alpha), std::abs(beta)) != 1) continue;
                        const IntVec q = alpha * b1 + beta * b2;
                        if (q.cwiseAbs().maxCoeff() > bound) continue;
                        IntVec p(3);
                        p << q[2], -q[1], q[0]; // wedge coords from the normal
                        CosetRep rep;
                        rep.gamma = lift_flag_key(v, p);
                        rep.key = coset_key(rep.gamma);
                        visit(rep);
                    }
            }
}

std::vector<CosetRep> enumerate_cosets(int n, std::int64_t bound) {
    std::vector<CosetRep> out;
    enumerate_cosets(n, bound, [&](const CosetRep& rep) { out.push_back(rep); });
    return out;
}

bool coset_in_ball(const CosetRep& coset, const HorosphereSpec& spec, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("coset_in_ball: R > 0 required");
    const Eigen::MatrixXd g = coset.gamma.cast<double>() * spec.a0.asDiagonal();
    return iwasawa_a_log_norm(g) <= R;
}

std::int64_t required_coset_bound(const HorosphereSpec& spec, double r_max) {
    const int n = spec.n();
    const double stretch = std::exp(r_max * std::sqrt(1.0 - 1.0 / n));
    double cap = stretch / spec.a0[0];
    if (n >= 3) cap = std::max(cap, stretch / (spec.a0[0] * spec.a0[1]));
    return static_cast<std::int64_t>(std::ceil(cap));
}

CountSeries count_lifts(const HorosphereSpec& spec, const std::vector<double>& r_grid,
                        std::int64_t bound) {
    if (r_grid.empty()) throw std::invalid_argument("count_lifts: empty grid");
    std::vector<double> grid = r_grid;
    std::sort(grid.begin(), grid.end());
    if (!(grid.front() > 0.0)) throw std::invalid_argument("count_lifts: radii must be positive");
    const std::int64_t required = required_coset_bound(spec, grid.back());
    if (bound < required)
        throw BoundTooSmall("count_lifts: bound " + std::to_string(bound) +
                            " below the certified bound " + std::to_string(required));

    std::vector<double> anorms;
    enumerate_cosets(spec.n(), required, [&](const CosetRep& rep) {
        const Eigen::MatrixXd g = rep.gamma.cast<double>() * spec.a0.asDiagonal();
        anorms.push_back(iwasawa_a_log_norm(g));
    });
    std::sort(anorms.begin(), anorms.end());

    CountSeries series;
    series.param = grid;
    for (double r : grid) {
        const auto it = std::upper_bound(anorms.begin(), anorms.end(), r);
        series.counts.push_back(static_cast<std::int64_t>(it - anorms.begin()));
    }
    return series;
}

GrowthFit fit_growth(const CountSeries& series, int logpoly_degree) {
    if (series.param.size() < 6)
        throw InsufficientData("fit_growth: need at least 6 grid points");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < series.param.size(); ++i) {
        if (series.counts[i] <= 0) continue;
        xs.push_back(series.param[i]);
        ys.push_back(std::log(static_cast<double>(series.counts[i])));
    }
    if (xs.size() < 6) throw InsufficientData("fit_growth: fewer than 6 nonzero counts");
    const LinearFit line = fit_line(xs, ys);
    GrowthFit fit;
    fit.rate = line.slope;
    fit.rate_se = line.slope_se;
    fit.intercept = line.intercept;
    fit.r2 = line.r2;
    fit.logpoly_degree = logpoly_degree;
    for (std::size_t i = 0; i < xs.size(); ++i)
        fit.residuals.push_back(std::abs(ys[i] - (line.intercept + line.slope * xs[i])));
    return fit;
}

} // namespace horolab
