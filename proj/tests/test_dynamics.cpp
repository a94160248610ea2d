#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "horolab/dynamics.hpp"
#include "test_support.hpp"

using namespace horolab;
using namespace horolab::testsupport;

namespace {

CartanVector cv(std::initializer_list<double> entries) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (double e : entries) x[i++] = e;
    return CartanVector(x);
}

double ks_statistic_uniform01(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(std::abs(xs[i] - lo), std::abs(xs[i] - hi)));
    }
    return d;
}

} // namespace

TEST_CASE("unipotent coordinates") {
    // n=2: a single entry
    Eigen::VectorXd s1(1);
    s1 << 0.37;
    const Eigen::MatrixXd u1 = unipotent_from_coordinates(s1, 2);
    CHECK(u1(0, 1) == 0.37);
    CHECK(u1(0, 0) == 1.0);
    CHECK(u1(1, 0) == 0.0);

    // n=3 closed form of the second-kind product
    Eigen::VectorXd s3(3);
    s3 << 0.2, 0.5, 0.8;
    const Eigen::MatrixXd u3 = unipotent_from_coordinates(s3, 3);
    CHECK(u3(0, 1) == doctest::Approx(0.2));
    CHECK(u3(2 - 1, 3 - 1) == doctest::Approx(0.8));
    CHECK(u3(0, 2) == doctest::Approx(0.5 + 0.2 * 0.8));

    CounterRng rng(301, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        Eigen::VectorXd s(unipotent_dim(n));
        for (Eigen::Index k = 0; k < s.size(); ++k) s[k] = rng.uniform(-4.0, 4.0);
        const Eigen::MatrixXd u = unipotent_from_coordinates(s, n);
        // exact inverse
        CHECK((coordinates_of(u) - s).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
}

TEST_CASE("box reduction") {
    CounterRng rng(307, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        Eigen::VectorXd s(unipotent_dim(n));
        for (Eigen::Index k = 0; k < s.size(); ++k) s[k] = rng.uniform(-6.0, 6.0);
        const Eigen::MatrixXd u = unipotent_from_coordinates(s, n);
        const BoxReduction red = reduce_to_box(u);
        for (Eigen::Index k = 0; k < red.s.size(); ++k) {
            CHECK(red.s[k] >= 0.0);
            CHECK(red.s[k] < 1.0);
        }
        // the cofactor is integral unipotent
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double e = red.gamma(i, j);
                CHECK(std::abs(e - std::round(e)) <= 1e-9);
            }
        // and it recomposes
        const Eigen::MatrixXd back = unipotent_from_coordinates(red.s, n) * red.gamma;
        CHECK((back - u).lpNorm<Eigen::Infinity>() <= 1e-9);
    }

    // points already in the box are fixed
    Eigen::VectorXd s(3);
    s << 0.25, 0.5, 0.75;
    const BoxReduction red = reduce_to_box(unipotent_from_coordinates(s, 3));
    CHECK((red.s - s).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(red.gamma.isIdentity(1e-12));
}

TEST_CASE("translate") {
    const auto z2 = UnimodularLattice::standard(2);
    const CartanVector theta = cv({1, -1}).normalized();

    CHECK(translate(z2, theta, 0.0).basis() == z2.basis());

    for (double t : {0.5, 2.0, 5.0}) {
        const double fm = first_minimum(translate(z2, theta, t).basis()).length;
        CHECK(fm == doctest::Approx(std::exp(-t / std::sqrt(2.0))).epsilon(1e-12));
    }

    CHECK_THROWS_AS(translate(z2, theta, 1000.0), Overflow);
    CHECK_THROWS_AS(translate(z2, cv({1, 1}), 1.0), std::invalid_argument); // trace 2

    // flow additivity
    CounterRng rng(311, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 3);
        const CartanVector x{random_convergence_direction(n, rng)};
        const UnimodularLattice base(random_sl(n, rng));
        const double t1 = rng.uniform(-2.0, 2.0), t2 = rng.uniform(-2.0, 2.0);
        const auto once = translate(base, x, t1 + t2);
        const auto twice = translate(translate(base, x, t1), x, t2);
        CHECK((once.basis() - twice.basis()).norm() <= 1e-9 * once.basis().norm());
        CHECK(std::abs(once.basis().determinant() - 1.0) <= 1e-9);
    }
}

TEST_CASE("horosphere sampler marginals") {
    const int N = 100000;
    CounterRng rng(313, 0);
    std::vector<std::vector<double>> coords(unipotent_dim(3));
    for (int i = 0; i < N; ++i) {
        const Eigen::VectorXd s = sample_horosphere(3, rng);
        for (Eigen::Index k = 0; k < s.size(); ++k) coords[k].push_back(s[k]);
    }
    for (auto& c : coords)
        CHECK(ks_statistic_uniform01(std::move(c)) < 1.63 / std::sqrt(N));

    CounterRng r1(99, 5), r2(99, 5);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_horosphere(3, r1) == sample_horosphere(3, r2));
}

TEST_CASE("escape mass table") {
    const FlowSpec flow = FlowSpec::standard(cv({1, -1}), {2.0, 6.0});
    const std::vector<double> eps = {0.5, 0.25, 0.125};
    const EscapeTable table = escape_mass(flow, eps, 20000, 17, 2);

    REQUIRE(table.cells.size() == 6);
    for (const auto& c : table.cells) {
        CHECK(c.fraction >= 0.0);
        CHECK(c.fraction <= 1.0);
        CHECK(c.samples == 20000);
    }
    // monotone nondecreasing in eps at fixed t, exactly (nested K_eps)
    for (std::size_t base = 0; base < table.cells.size(); base += eps.size()) {
        // cells are ordered by the eps grid as given; sort indices by eps
        std::vector<const EscapeCell*> row;
        for (std::size_t k = 0; k < eps.size(); ++k) row.push_back(&table.cells[base + k]);
        std::sort(row.begin(), row.end(),
                  [](const EscapeCell* a, const EscapeCell* b) { return a->eps < b->eps; });
        for (std::size_t k = 1; k < row.size(); ++k)
            CHECK(row[k - 1]->fraction <= row[k]->fraction);
    }

    CHECK_THROWS_AS(escape_mass(FlowSpec::standard(cv({-1, 1}), {1.0}), eps, 100, 1),
                    NotInCone);
    CHECK_THROWS_AS(escape_mass(flow, {1.5}, 100, 1), std::invalid_argument);
}

TEST_CASE("escape mass agrees with the rank-one Haar picture at large time") {
    // by equidistribution the escape fraction converges to the Haar measure
    // of the complement of K_eps
    const FlowSpec flow = FlowSpec::standard(cv({1, -1}), {10.0});
    const std::vector<double> eps = {0.5, 0.25};
    const std::int64_t n_mc = 40000;
    const EscapeTable table = escape_mass(flow, eps, n_mc, 23, 2);

    HaarRank1Sampler sampler(29);
    const int N = 40000;
    std::vector<std::int64_t> haar_hits(eps.size(), 0);
    for (int i = 0; i < N; ++i) {
        const double fm = first_minimum(sampler.next().basis()).length;
        for (std::size_t k = 0; k < eps.size(); ++k)
            if (fm < eps[k]) ++haar_hits[k];
    }
    for (std::size_t k = 0; k < eps.size(); ++k) {
        const double haar_frac = static_cast<double>(haar_hits[k]) / N;
        const auto& cell = table.cells[k];
        const double se =
            std::sqrt(cell.se * cell.se + haar_frac * (1.0 - haar_frac) / N) + 1e-4;
        CHECK(std::abs(cell.fraction - haar_frac) <= 5.0 * se);
    }
}

TEST_CASE("growth slope") {
    const CartanVector theta = cv({2, 0, -2});
    const FlowSpec flow = FlowSpec::standard(theta, {1, 2, 3, 4, 5, 6, 7, 8});

    // highest weight vector of Lambda^2 at u = e: the rate is the weight
    Eigen::VectorXd top = Eigen::VectorXd::Zero(3);
    top[0] = 1.0; // e1 ^ e2 in lex order
    const GrowthSeries hw = growth_slope(flow, 2, 0.0, top, 0, 1);
    CHECK(hw.fitted_rate == doctest::Approx(eval_weight(flow.theta, 2)).epsilon(1e-10));
    CHECK(hw.n_probes == 1);

    // e3 contracts without the sup and stops contracting with it
    Eigen::VectorXd e3 = Eigen::VectorXd::Zero(3);
    e3[2] = 1.0;
    const GrowthSeries no_sup = growth_slope(flow, 1, 0.0, e3, 0, 1);
    CHECK(no_sup.fitted_rate < 0.0);
    const GrowthSeries with_sup = growth_slope(flow, 1, 1.0, e3, 200, 1);
    CHECK(with_sup.fitted_rate >= 0.0);
    CHECK(with_sup.top_weight_rate == doctest::Approx(eval_weight(flow.theta, 1)));

    // scaling invariance of the fitted rate
    CounterRng rng(331, 0);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd v(3);
        for (int k = 0; k < 3; ++k) v[k] = rng.uniform(-2.0, 2.0);
        if (v.isZero()) continue;
        const double c = rng.uniform(0.1, 10.0);
        const GrowthSeries g1 = growth_slope(flow, 1, 0.5, v, 50, 7);
        const GrowthSeries g2 = growth_slope(flow, 1, 0.5, (c * v).eval(), 50, 7);
        CHECK(g1.fitted_rate == doctest::Approx(g2.fitted_rate).epsilon(1e-9));
    }

    // the sup never decreases with r
    const GrowthSeries small_r = growth_slope(flow, 1, 0.5, e3, 100, 11);
    const GrowthSeries big_r = growth_slope(flow, 1, 1.0, e3, 100, 11);
    for (std::size_t i = 0; i < small_r.sups.size(); ++i)
        CHECK(big_r.sups[i] >= small_r.sups[i] * (1.0 - 1e-12));

    CHECK_THROWS_AS(growth_slope(flow, 1, 1.0, Eigen::VectorXd::Zero(3), 10, 1),
                    std::invalid_argument);
}

TEST_CASE("discrepancy series") {
    const CartanVector theta = cv({1, -1});
    const TestFunction phi = SiegelTransform{Bump(Eigen::Vector2d::Zero(), 0.9, 1), false};

    // t = 0 and a bump so small that no lattice point of any sheared Z^2 is
    // inside the support: the mu-mean is 0 and the discrepancy is the
    // reference mean itself
    const FlowSpec at0 = FlowSpec::standard(theta, {0.0});
    const DiscrepancySeries d0 = discrepancy_series(at0, phi, 2000, 5);
    CHECK(d0.points.size() == 1);
    CHECK(d0.points[0].discrepancy == doctest::Approx(d0.reference_mean).epsilon(1e-9));
    CHECK(d0.points[0].se == 0.0);

    // missing reference mean
    const TestFunction chi = SmoothedCompactIndicator{0.5, 0.1};
    CHECK_THROWS_AS(discrepancy_series(at0, chi, 100, 1), ReferenceMeanMissing);
    const DiscrepancySeries with_ref = discrepancy_series(at0, chi, 100, 1, 0.75);
    CHECK(with_ref.reference_mean == 0.75);

    CHECK_THROWS_AS(discrepancy_series(at0, phi, -5, 1), std::invalid_argument);
}

TEST_CASE("discrepancy series is deterministic and schedule-independent") {
    const CartanVector theta = cv({1, -1});
    const TestFunction phi = SiegelTransform{Bump(Eigen::Vector2d::Zero(), 1.2, 1), false};
    const FlowSpec flow = FlowSpec::standard(theta, {0.0, 2.0, 4.0});

    const DiscrepancySeries s1 = discrepancy_series(flow, phi, 30000, 77, std::nullopt, 1);
    const DiscrepancySeries s2 = discrepancy_series(flow, phi, 30000, 77, std::nullopt, 2);
    REQUIRE(s1.points.size() == s2.points.size());
    for (std::size_t i = 0; i < s1.points.size(); ++i) {
        CHECK(s1.points[i].discrepancy == s2.points[i].discrepancy);
        CHECK(s1.points[i].se == s2.points[i].se);
    }
}

TEST_CASE("rank-one equidistribution decays") {
    const CartanVector theta = cv({1, -1});
    const TestFunction phi = SiegelTransform{Bump(Eigen::Vector2d::Zero(), 1.2, 1), false};
    const FlowSpec flow = FlowSpec::standard(theta, {0.0, 2.0, 4.0, 6.0, 8.0});
    const DiscrepancySeries s = discrepancy_series(flow, phi, 50000, 3, std::nullopt, 2);
    // the early points dominate the late ones
    CHECK(s.points.front().discrepancy > s.points.back().discrepancy);
}

TEST_CASE("fit is stable under doubling the sample count") {
    const CartanVector theta = cv({1, -1});
    const TestFunction phi = SiegelTransform{Bump(Eigen::Vector2d::Zero(), 1.25, 1), false};
    // time grid stops well above the noise floor so the fit window is the
    // same at both sample counts and the comparison isolates the MC jitter
    const FlowSpec flow = FlowSpec::standard(theta, {0, 1, 2, 3, 4});
    const DiscrepancySeries base = discrepancy_series(flow, phi, 200000, 8, std::nullopt, 2);
    const DiscrepancySeries dbl = discrepancy_series(flow, phi, 400000, 8, std::nullopt, 2);
    REQUIRE(base.window.size() >= 3);
    REQUIRE(base.window == dbl.window);
    CHECK(std::abs(base.delta_hat - dbl.delta_hat) <
          base.delta_se + dbl.delta_se + 1e-12);
}

TEST_CASE("escape mass propagates the overflow guard") {
    const FlowSpec flow = FlowSpec::standard(cv({1, -1}), {1000.0});
    CHECK_THROWS_AS(escape_mass(flow, {0.5}, 100, 1), Overflow);
}

TEST_CASE("mu_E block sampler") {
    CounterRng rng(401, 0);

    // E = empty set reduces to the horospherical box sampler in law; the
    // sample must be unit upper triangular with in-box entries
    for (int i = 0; i < 200; ++i) {
        const UnimodularLattice lat = sample_mu_E(3, {}, rng);
        const Eigen::MatrixXd& b = lat.basis();
        for (int r = 0; r < 3; ++r) CHECK(b(r, r) == 1.0);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < r; ++c) CHECK(b(r, c) == 0.0);
        CHECK(b(0, 1) >= 0.0);
        CHECK(b(0, 1) < 1.0);
    }

    // blocks (1,2): deterministic first column, Haar lower block
    for (int i = 0; i < 200; ++i) {
        const UnimodularLattice lat = sample_mu_E(3, {2}, rng);
        const Eigen::MatrixXd& b = lat.basis();
        CHECK(b(0, 0) == 1.0);
        CHECK(b(1, 0) == 0.0);
        CHECK(b(2, 0) == 0.0);
        CHECK(std::abs(b.block<2, 2>(1, 1).determinant() - 1.0) <= 1e-12);
        CHECK(std::abs(b.determinant() - 1.0) <= 1e-9);
    }

    // uniform marginals of the W entries
    std::vector<double> w12;
    for (int i = 0; i < 20000; ++i) w12.push_back(sample_mu_E(3, {2}, rng).basis()(0, 1));
    CHECK(ks_statistic_uniform01(std::move(w12)) < 1.63 / std::sqrt(20000.0));

    // E = Delta on n=2 is the rank-one Haar measure
    const UnimodularLattice haar2 = sample_mu_E(2, {1}, rng);
    CHECK(std::abs(haar2.basis().determinant() - 1.0) <= 1e-12);

    CHECK_THROWS_AS(sample_mu_E(3, {1, 2}, rng), BlockTooLarge);
}

TEST_CASE("W-block Jacobian") {
    CHECK(w_block_jacobian(CartanVector::zero(3), block_structure(3, {1})) == 1.0);

    // unit block determinants give exactly 1
    CHECK(w_block_jacobian(cv({0, 0.7, -0.7}), block_structure(3, {1})) == 1.0);
    // a non-unit block is detected
    const double s = 0.3;
    CHECK(w_block_jacobian(cv({s, -s}), block_structure(2, {1})) ==
          doctest::Approx(std::exp(s)).epsilon(1e-14));
    CHECK(w_block_jacobian(cv({s, -s}), block_structure(2, {1})) != 1.0);

    CounterRng rng(409, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);
        std::vector<int> cuts;
        for (int i = 1; i < n; ++i)
            if (rng.next_u64() & 1) cuts.push_back(i);
        const BlockStructure bs = block_structure(n, cuts);
        // per-block entries that sum to zero exactly
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        int off = 0;
        for (int b = 0; b < bs.blocks(); ++b) {
            const int k = bs.sizes[b];
            double sum = 0.0;
            for (int i = 0; i < k - 1; ++i) {
                x[off + i] = rng.uniform(-1.0, 1.0);
                sum += x[off + i];
            }
            x[off + k - 1] = -sum;
            off += k;
        }
        CHECK(std::abs(w_block_jacobian(CartanVector(x), bs) - 1.0) <= 1e-12);
    }
}
