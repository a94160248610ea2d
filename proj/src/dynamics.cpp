#include "horolab/dynamics.hpp"

#include <cmath>

#include "horolab/exterior.hpp"
#include "horolab/parallel.hpp"

namespace horolab {

FlowSpec::FlowSpec(const CartanVector& direction, std::vector<double> time_grid,
                   UnimodularLattice z)
    : theta(direction.normalized()), times(std::move(time_grid)), base(std::move(z)) {
    if (theta.n() != base.n()) throw std::invalid_argument("FlowSpec: dimension mismatch");
    if (!theta.is_traceless(1e-9))
        throw std::invalid_argument("FlowSpec: flow direction must be traceless");
}

FlowSpec FlowSpec::standard(const CartanVector& direction, std::vector<double> time_grid) {
    return FlowSpec(direction, std::move(time_grid), UnimodularLattice::standard(direction.n()));
}

UnimodularLattice translate(const UnimodularLattice& lattice, const CartanVector& x, double t) {
    if (x.n() != lattice.n()) throw std::invalid_argument("translate: dimension mismatch");
    if (!x.is_traceless(1e-9))
        throw std::invalid_argument("translate: direction must be traceless");
    Eigen::MatrixXd basis = lattice.basis();
    for (int i = 0; i < x.n(); ++i) {
        const double e = t * x[i];
        if (std::abs(e) > 300.0)
            throw Overflow("translate: |t*x_i| = " + std::to_string(std::abs(e)) +
                           " exceeds the exp range guard");
        basis.row(i) *= std::exp(e);
    }
    return UnimodularLattice(std::move(basis));
}

Eigen::VectorXd sample_horosphere(int n, CounterRng& rng) {
    Eigen::VectorXd s(unipotent_dim(n));
    for (Eigen::Index k = 0; k < s.size(); ++k) s[k] = rng.uniform01();
    return s;
}

namespace {

// g_t * Theta(s) * base, with the diagonal applied as row scaling
Eigen::MatrixXd flow_translate_basis(const Eigen::VectorXd& row_scale, const Eigen::VectorXd& s,
                                     const Eigen::MatrixXd& base) {
    const int n = static_cast<int>(base.rows());
    Eigen::MatrixXd b = unipotent_from_coordinates(s, n) * base;
    for (int i = 0; i < n; ++i) b.row(i) *= row_scale[i];
    return b;
}

Eigen::VectorXd flow_row_scale(const CartanVector& theta, double t) {
    Eigen::VectorXd scale(theta.n());
    for (int i = 0; i < theta.n(); ++i) {
        const double e = t * theta[i];
        if (std::abs(e) > 300.0)
            throw Overflow("diagonal flow: |t*theta_i| exceeds the exp range guard");
        scale[i] = std::exp(e);
    }
    return scale;
}

constexpr std::int64_t kBatch = 4096;

} // namespace

EscapeTable escape_mass(const FlowSpec& flow, const std::vector<double>& eps_grid,
                        std::int64_t samples, std::uint64_t seed, int threads) {
    if (!(depth(flow.theta) > 0.0))
        throw NotInCone("escape_mass: flow direction must have positive depth");
    if (samples <= 0) throw std::invalid_argument("escape_mass: samples > 0 required");
    for (double eps : eps_grid)
        if (!(eps > 0.0 && eps < 1.0))
            throw std::invalid_argument("escape_mass: eps values must lie in (0,1)");

    const int n = flow.theta.n();
    EscapeTable table;
    const std::int64_t n_batches = (samples + kBatch - 1) / kBatch;

    for (std::size_t ti = 0; ti < flow.times.size(); ++ti) {
        const double t = flow.times[ti];
        const Eigen::VectorXd scale = flow_row_scale(flow.theta, t);
        std::vector<std::vector<std::int64_t>> batch_counts(
            n_batches, std::vector<std::int64_t>(eps_grid.size(), 0));

        parallel_batches(samples, kBatch, threads,
                         [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
                             CounterRng rng(seed, (static_cast<std::uint64_t>(ti) << 32) |
                                                      static_cast<std::uint64_t>(b));
                             auto& counts = batch_counts[b];
                             for (std::int64_t i = lo; i < hi; ++i) {
                                 const Eigen::VectorXd s = sample_horosphere(n, rng);
                                 const Eigen::MatrixXd basis =
                                     flow_translate_basis(scale, s, flow.base.basis());
                                 const double m1 = first_minimum(basis).length;
                                 for (std::size_t e = 0; e < eps_grid.size(); ++e)
                                     if (m1 < eps_grid[e]) ++counts[e];
                             }
                         });

        std::vector<double> log_eps, log_frac;
        for (std::size_t e = 0; e < eps_grid.size(); ++e) {
            std::int64_t hits = 0;
            for (const auto& counts : batch_counts) hits += counts[e];
            EscapeCell cell;
            cell.t = t;
            cell.eps = eps_grid[e];
            cell.samples = samples;
            cell.fraction = static_cast<double>(hits) / static_cast<double>(samples);
            cell.se = std::sqrt(cell.fraction * (1.0 - cell.fraction) /
                                static_cast<double>(samples));
            table.cells.push_back(cell);
            if (hits > 0) {
                log_eps.push_back(std::log(cell.eps));
                log_frac.push_back(std::log(cell.fraction));
            }
        }

        EscapeSlope slope;
        slope.t = t;
        slope.cells_used = static_cast<int>(log_eps.size());
        if (slope.cells_used >= 3) slope.loglog = fit_line(log_eps, log_frac);
        table.slopes.push_back(slope);
    }
    return table;
}

GrowthSeries growth_slope(const FlowSpec& flow, int j, double r, const Eigen::VectorXd& wedge_v,
                          std::int64_t random_samples, std::uint64_t seed) {
    const int n = flow.theta.n();
    if (!(depth(flow.theta) > 0.0))
        throw NotInCone("growth_slope: flow direction must have positive depth");
    if (j < 1 || j > n - 1) throw std::out_of_range("growth_slope: need 1 <= j <= n-1");
    const auto basis_sets = wedge_basis(n, j);
    const auto dim = static_cast<Eigen::Index>(basis_sets.size());
    if (wedge_v.size() != dim)
        throw std::invalid_argument("growth_slope: wedge vector has wrong dimension");
    if (wedge_v.isZero()) throw std::invalid_argument("growth_slope: wedge vector must be nonzero");
    if (r < 0.0) throw std::invalid_argument("growth_slope: r >= 0 required");

    const int d = unipotent_dim(n);

    // probe points in B_U(r): the origin, a coordinate grid, random fills
    std::vector<Eigen::VectorXd> probes;
    probes.push_back(Eigen::VectorXd::Zero(d));
    if (r > 0.0) {
        // grid step r/8 where the box stays small, coarser in high dimension;
        // above the cap the deterministic grid is dropped entirely and the
        // random probes carry the sup (still a valid lower bound)
        int half = 8;
        while (half > 1 && std::pow(2.0 * half + 1.0, d) > 2.0e5) half /= 2;
        if (std::pow(2.0 * half + 1.0, d) <= 2.0e5) {
            const double step = r / half;
            std::vector<int> idx(d, -half);
            while (true) {
                Eigen::VectorXd s(d);
                for (int k = 0; k < d; ++k) s[k] = idx[k] * step;
                if (s.norm() <= r && !s.isZero()) probes.push_back(s);
                int k = 0;
                while (k < d && ++idx[k] > half) idx[k++] = -half;
                if (k == d) break;
            }
        }
        CounterRng rng(seed, 0x9D5);
        for (std::int64_t i = 0; i < random_samples; ++i) {
            Eigen::VectorXd s(d);
            do {
                for (int k = 0; k < d; ++k) s[k] = rng.uniform(-r, r);
            } while (s.norm() > r);
            probes.push_back(s);
        }
    }

    // Lambda^j(g_t u) v = diag(exp(t * w_S)) * (Lambda^j(u) v): precompute the
    // u-part once per probe and the wedge weights once
    Eigen::VectorXd wedge_weights(dim);
    for (Eigen::Index idx_s = 0; idx_s < dim; ++idx_s) {
        double w = 0.0;
        for (int i : basis_sets[idx_s]) w += flow.theta[i];
        wedge_weights[idx_s] = w;
    }
    std::vector<Eigen::VectorXd> u_parts;
    u_parts.reserve(probes.size());
    for (const auto& s : probes)
        u_parts.push_back(exterior_power<double>(unipotent_from_coordinates(s, n), j) * wedge_v);

    GrowthSeries out;
    out.top_weight_rate = eval_weight(flow.theta, j);
    out.n_probes = static_cast<std::int64_t>(probes.size());
    std::vector<double> log_sup;
    for (double t : flow.times) {
        double best = 0.0;
        for (const auto& w : u_parts) {
            double norm2 = 0.0;
            for (Eigen::Index i = 0; i < dim; ++i) {
                const double z = std::exp(t * wedge_weights[i]) * w[i];
                norm2 += z * z;
            }
            best = std::max(best, norm2);
        }
        out.times.push_back(t);
        out.sups.push_back(std::sqrt(best));
        log_sup.push_back(0.5 * std::log(best));
    }
    const LinearFit fit = fit_line(out.times, log_sup);
    out.fitted_rate = fit.slope;
    out.rate_se = fit.slope_se;
    out.alpha_hat = fit.slope / t_min(flow.theta);
    return out;
}

DiscrepancySeries discrepancy_series(const FlowSpec& flow, const TestFunction& phi,
                                     std::int64_t samples_per_time, std::uint64_t seed,
                                     std::optional<double> reference_mean, int threads) {
    if (samples_per_time <= 0)
        throw std::invalid_argument("discrepancy_series: samples > 0 required");
    const int n = flow.theta.n();
    std::optional<double> ref = reference_mean;
    if (!ref) ref = haar_mean(phi, n);
    if (!ref)
        throw ReferenceMeanMissing(
            "discrepancy_series: no analytic Haar mean for this test function; supply one");

    DiscrepancySeries series;
    series.reference_mean = *ref;
    const std::int64_t n_batches = (samples_per_time + kBatch - 1) / kBatch;

    for (std::size_t ti = 0; ti < flow.times.size(); ++ti) {
        const double t = flow.times[ti];
        const Eigen::VectorXd scale = flow_row_scale(flow.theta, t);
        std::vector<KahanSum> batch_sum(n_batches), batch_sumsq(n_batches);

        parallel_batches(samples_per_time, kBatch, threads,
                         [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
                             CounterRng rng(seed, (static_cast<std::uint64_t>(ti) << 32) |
                                                      static_cast<std::uint64_t>(b));
                             KahanSum sum, sumsq;
                             for (std::int64_t i = lo; i < hi; ++i) {
                                 const Eigen::VectorXd s = sample_horosphere(n, rng);
                                 const Eigen::MatrixXd basis =
                                     flow_translate_basis(scale, s, flow.base.basis());
                                 const double v =
                                     eval_test_function(phi, UnimodularLattice(basis));
                                 sum.add(v);
                                 sumsq.add(v * v);
                             }
                             batch_sum[b] = sum;
                             batch_sumsq[b] = sumsq;
                         });

        KahanSum total, total_sq;
        for (std::int64_t b = 0; b < n_batches; ++b) {
            total.add(batch_sum[b].value());
            total_sq.add(batch_sumsq[b].value());
        }
        const double N = static_cast<double>(samples_per_time);
        const double mean = total.value() / N;
        const double var = std::max(0.0, (total_sq.value() - N * mean * mean) / (N - 1.0));

        DiscrepancyPoint p;
        p.t = t;
        p.discrepancy = std::abs(mean - *ref);
        p.se = std::sqrt(var / N);
        p.samples = samples_per_time;
        series.points.push_back(p);
    }

    // fit window: CI excludes 0 and past the pre-asymptotic ramp
    const double D = depth(flow.theta);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const auto& p = series.points[i];
        if (p.discrepancy - 2.0 * p.se <= 0.0) continue;
        if (p.t * D < 1.0) continue;
        series.window.push_back(static_cast<int>(i));
        xs.push_back(p.t * D);
        ys.push_back(std::log(p.discrepancy));
    }
    if (xs.size() >= 3) {
        const LinearFit fit = fit_line(xs, ys);
        series.delta_hat = -fit.slope;
        series.delta_se = fit.slope_se;
        series.intercept = fit.intercept;
        series.r2 = fit.r2;
    }
    return series;
}

UnimodularLattice sample_mu_E(int n, const std::vector<int>& E, CounterRng& rng) {
    std::vector<int> cuts;
    {
        std::vector<bool> in_e(n, false);
        for (int i : E) {
            if (i < 1 || i > n - 1) throw std::out_of_range("sample_mu_E: root index out of range");
            in_e[i] = true;
        }
        for (int i = 1; i <= n - 1; ++i)
            if (!in_e[i]) cuts.push_back(i);
    }
    const BlockStructure blocks = block_structure(n, cuts);

    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (int b = 0; b < blocks.blocks(); ++b) {
        const int k = blocks.sizes[b];
        const int off = blocks.offset(b);
        if (k == 1) continue;
        if (k == 2)
            m.block<2, 2>(off, off) = haar_sl2_matrix(rng);
        else
            throw BlockTooLarge("sample_mu_E: diagonal block of size " + std::to_string(k) +
                                " exceeds the desk-scale limit 2");
    }

    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            // only entries crossing a block boundary belong to W
            int bi = 0, bj = 0;
            for (int b = 0; b < blocks.blocks(); ++b) {
                if (i >= blocks.offset(b)) bi = b;
                if (j >= blocks.offset(b)) bj = b;
            }
            if (bi != bj) w(i, j) = rng.uniform01();
        }
    // q = m * w: the W coordinates of the leading block row appear verbatim
    // as basis entries, and E = {} degenerates to the entry box of U
    return UnimodularLattice(m * w);
}

double w_block_jacobian(const CartanVector& x, const BlockStructure& blocks) {
    if (x.n() != blocks.n) throw std::invalid_argument("w_block_jacobian: dimension mismatch");
    double exponent = 0.0;
    int consumed = 0;
    for (int b = 0; b < blocks.blocks(); ++b) {
        const int k = blocks.sizes[b];
        double block_sum = 0.0;
        for (int i = 0; i < k; ++i) block_sum += x[consumed + i];
        consumed += k;
        const int w_cols = blocks.n - consumed; // columns strictly right of block b
        exponent += static_cast<double>(w_cols) * block_sum;
    }
    return std::exp(exponent);
}

} // namespace horolab
