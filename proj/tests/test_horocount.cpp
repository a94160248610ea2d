#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "horolab/horocount.hpp"
#include "horolab/intlinalg.hpp"
#include "horolab/iwasawa.hpp"
#include "test_support.hpp"

using namespace horolab;
using namespace horolab::testsupport;

namespace {

// independent oracle for n=2, a0 = I: the A-part of an integer matrix with
// first column (p,q) has norm sqrt(2)*|log |(p,q)||
std::int64_t brute_count_n2(double R, std::int64_t box) {
    std::int64_t count = 0;
    for (std::int64_t p = -box; p <= box; ++p)
        for (std::int64_t q = -box; q <= box; ++q) {
            if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
            const double norm = std::sqrt(static_cast<double>(p * p + q * q));
            if (std::sqrt(2.0) * std::abs(std::log(norm)) <= R) ++count;
        }
    return count;
}

} // namespace

TEST_CASE("integer linear algebra helpers") {
    CounterRng rng(501, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 2);
        IntVec v(n);
        std::int64_t g = 0;
        do {
            for (int i = 0; i < n; ++i) {
                v[i] = static_cast<std::int64_t>(rng.next_u64() % 21) - 10;
            }
            g = 0;
            for (int i = 0; i < n; ++i) g = std::gcd(g, std::abs(v[i]));
        } while (g != 1);
        const IntMat m = complete_to_sl(v);
        CHECK(m.col(0) == v);
        const std::int64_t det =
            n == 2 ? m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) : det3(m);
        CHECK(det == 1);
        // exact inverse
        const IntMat mi = integer_inverse(m);
        CHECK((m * mi).isIdentity());
    }
    // non-primitive input is rejected
    IntVec bad(3);
    bad << 2, 4, 6;
    CHECK_THROWS_AS(complete_to_sl(bad), std::invalid_argument);
}

TEST_CASE("coset enumeration n=2 matches the handwritten key list") {
    const auto cosets = enumerate_cosets(2, 1);
    std::set<std::vector<std::int64_t>> keys;
    for (const auto& rep : cosets) {
        keys.insert(rep.key);
        // contract: determinant exactly 1
        CHECK(rep.gamma(0, 0) * rep.gamma(1, 1) - rep.gamma(0, 1) * rep.gamma(1, 0) == 1);
    }
    CHECK(keys.size() == cosets.size()); // no duplicates
    const std::set<std::vector<std::int64_t>> expect = {
        {1, 0}, {0, 1}, {1, 1}, {1, -1}, {-1, 0}, {0, -1}, {-1, 1}, {-1, -1}};
    CHECK(keys == expect);
}

TEST_CASE("coset keys are complete invariants (n=2 brute force)") {
    // enumerate all 2x2 integer matrices with entries <= 2 and det 1, group
    // them by first column, and verify the grouped matrices differ by a
    // right unipotent factor
    std::set<std::vector<std::int64_t>> brute_keys;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b)
            for (int c = -2; c <= 2; ++c)
                for (int d = -2; d <= 2; ++d) {
                    if (a * d - b * c != 1) continue;
                    if (std::abs(a) > 1 || std::abs(c) > 1) continue;
                    brute_keys.insert({a, c});
                }
    std::set<std::vector<std::int64_t>> enumerated;
    for (const auto& rep : enumerate_cosets(2, 1)) enumerated.insert(rep.key);
    CHECK(brute_keys == enumerated);
}

TEST_CASE("coset enumeration n=3: determinants, keys, completeness probe") {
    const auto cosets = enumerate_cosets(3, 2);
    std::set<std::vector<std::int64_t>> keys;
    for (const auto& rep : cosets) {
        CHECK(det3(rep.gamma) == 1);
        CHECK(rep.key == coset_key(rep.gamma));
        for (std::int64_t e : rep.key) CHECK(std::abs(e) <= 2);
        keys.insert(rep.key);
    }
    CHECK(keys.size() == cosets.size());

    // every coset reachable by a small integer matrix appears
    std::set<std::vector<std::int64_t>> brute;
    IntMat m(3, 3);
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c)
                for (int d = -1; d <= 1; ++d)
                    for (int e = -1; e <= 1; ++e)
                        for (int f = -1; f <= 1; ++f)
                            for (int g = -1; g <= 1; ++g)
                                for (int h = -1; h <= 1; ++h)
                                    for (int i = -1; i <= 1; ++i) {
                                        m << a, b, c, d, e, f, g, h, i;
                                        if (det3(m) != 1) continue;
                                        const auto key = coset_key(m);
                                        bool in_box = true;
                                        for (std::int64_t x : key)
                                            if (std::abs(x) > 2) in_box = false;
                                        if (in_box) brute.insert(key);
                                    }
    for (const auto& key : brute) CHECK(keys.count(key) == 1);
}

TEST_CASE("ball membership via the Iwasawa A-part") {
    const HorosphereSpec spec{Eigen::Vector2d(1.0, 1.0)};

    CosetRep id;
    id.gamma = IntMat::Identity(2, 2);
    id.key = coset_key(id.gamma);
    CHECK(coset_in_ball(id, spec, 0.1)); // A-part is the identity

    // rotation by pi/2: first column (0,1), A-part I
    IntMat rot(2, 2);
    rot << 0, -1, 1, 0;
    CosetRep r{rot, coset_key(rot)};
    CHECK(coset_in_ball(r, spec, 0.1));

    // right unipotent shifts do not change the test
    CounterRng rng(601, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3;
        IntVec v(n);
        std::int64_t g = 0;
        do {
            for (int i = 0; i < n; ++i)
                v[i] = static_cast<std::int64_t>(rng.next_u64() % 9) - 4;
            g = 0;
            for (int i = 0; i < n; ++i) g = std::gcd(g, std::abs(v[i]));
        } while (g != 1);
        const IntMat gamma = complete_to_sl(v);
        const IntMat shifted = gamma * random_unipotent(n, rng, 2);
        Eigen::VectorXd a0(3);
        a0 << 2.0, 0.5, 1.0;
        const HorosphereSpec spec3{a0};
        const double na = iwasawa_a_log_norm(gamma.cast<double>() * a0.asDiagonal());
        const double nb = iwasawa_a_log_norm(shifted.cast<double>() * a0.asDiagonal());
        CHECK(na == doctest::Approx(nb).epsilon(1e-10));
        CHECK(coset_key(shifted) == coset_key(gamma));
    }
}

TEST_CASE("count_lifts against the independent n=2 oracle") {
    const HorosphereSpec spec{Eigen::Vector2d(1.0, 1.0)};
    const std::vector<double> grid = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    const std::int64_t bound = required_coset_bound(spec, 3.0);
    const CountSeries series = count_lifts(spec, grid, bound);

    const auto box = static_cast<std::int64_t>(std::ceil(std::exp(3.0 / std::sqrt(2.0)))) + 1;
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(series.counts[i] == brute_count_n2(grid[i], box));

    // monotone, exactly
    for (std::size_t i = 1; i < series.counts.size(); ++i)
        CHECK(series.counts[i - 1] <= series.counts[i]);

    CHECK_THROWS_AS(count_lifts(spec, grid, bound / 4), BoundTooSmall);
}

TEST_CASE("count_lifts with a nontrivial base point") {
    Eigen::Vector2d diag(2.0, 0.5);
    const HorosphereSpec spec{diag};
    const std::vector<double> grid = {1.0, 2.0, 3.0};
    const CountSeries series = count_lifts(spec, grid, required_coset_bound(spec, 3.0));

    // direct verification against first principles: A-part of gamma * a0
    std::int64_t expect = 0;
    const std::int64_t box = required_coset_bound(spec, 3.0);
    for (std::int64_t p = -box; p <= box; ++p)
        for (std::int64_t q = -box; q <= box; ++q) {
            if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
            IntVec v(2);
            v << p, q;
            const IntMat gamma = complete_to_sl(v);
            if (iwasawa_a_log_norm(gamma.cast<double>() * diag.asDiagonal()) <= 2.0) ++expect;
        }
    CHECK(series.counts[1] == expect);
}

TEST_CASE("count_lifts n=3 is consistent with its own enumeration") {
    Eigen::Vector3d diag(1.0, 1.0, 1.0);
    const HorosphereSpec spec{diag};
    const std::vector<double> grid = {0.8, 1.2};
    const CountSeries series = count_lifts(spec, grid, required_coset_bound(spec, 1.2));
    std::int64_t direct = 0;
    enumerate_cosets(3, required_coset_bound(spec, 1.2), [&](const CosetRep& rep) {
        if (coset_in_ball(rep, spec, 1.2)) ++direct;
    });
    CHECK(series.counts[1] == direct);
    CHECK(series.counts[0] <= series.counts[1]);
    CHECK(series.counts[0] >= 1); // the identity coset is always inside
}

TEST_CASE("growth fit") {
    // noiseless exponential input: N(R) = 2^R over an integer grid
    CountSeries series;
    for (int r = 1; r <= 12; ++r) {
        series.param.push_back(static_cast<double>(r));
        series.counts.push_back(std::int64_t{1} << r);
    }
    const GrowthFit fit = fit_growth(series, 0);
    CHECK(fit.rate == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    for (double r : fit.residuals) CHECK(r <= 1e-9);

    CountSeries tiny;
    tiny.param = {1, 2, 3};
    tiny.counts = {1, 2, 4};
    CHECK_THROWS_AS(fit_growth(tiny, 0), InsufficientData);
}

TEST_CASE("ranks beyond the supported enumeration are refused") {
    CHECK_THROWS_AS(enumerate_cosets(4, 1), UnsupportedRank);
    Eigen::VectorXd a0 = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(count_lifts(HorosphereSpec{a0}, {1.0}, 100), UnsupportedRank);
}

TEST_CASE("required bound certifies the enumeration") {
    // no coset outside the certified bound can enter the ball: every coset
    // in a slightly larger enumeration that passes the ball test must have
    // its key inside the certified box
    const HorosphereSpec spec{Eigen::Vector2d(1.0, 1.0)};
    const double rmax = 2.0;
    const std::int64_t required = required_coset_bound(spec, rmax);
    enumerate_cosets(2, required + 15, [&](const CosetRep& rep) {
        if (coset_in_ball(rep, spec, rmax)) {
            for (std::int64_t e : rep.key) CHECK(std::abs(e) <= required);
        }
    });
}
