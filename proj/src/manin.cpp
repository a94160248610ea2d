#include "horolab/manin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "horolab/cartan.hpp"
#include "horolab/intlinalg.hpp"

namespace horolab {

namespace {

std::vector<int> cuts_from_E(int n, const std::vector<int>& E) {
    std::vector<bool> in_e(n, false);
    for (int i : E) {
        if (i < 1 || i > n - 1)
            throw std::out_of_range("anticanonical_exponents: root index out of range");
        in_e[i] = true;
    }
    std::vector<int> cuts;
    for (int i = 1; i <= n - 1; ++i)
        if (!in_e[i]) cuts.push_back(i);
    return cuts;
}

__int128 ipow128(std::int64_t base, int e) {
    __int128 r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

std::int64_t isqrt64(std::int64_t x) {
    if (x < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
    while (r > 0 && r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

// largest q >= 0 with q^n <= T^2
std::int64_t norm2_cap(double t_max, int n) {
    if (t_max < 1.0) return 0;
    const auto t2 = static_cast<long double>(t_max) * static_cast<long double>(t_max);
    auto q = static_cast<std::int64_t>(std::pow(t_max, 2.0 / n)) + 2;
    while (q > 0 && static_cast<long double>(ipow128(q, n)) > t2) --q;
    while (static_cast<long double>(ipow128(q + 1, n)) <= t2) ++q;
    return q;
}

bool sign_normalized(std::int64_t a, std::int64_t b, std::int64_t c) {
    if (a != 0) return a > 0;
    if (b != 0) return b > 0;
    return c > 0;
}

// tally[q] = number of primitive vectors (both signs) of squared norm q
std::vector<std::int64_t> primitive_norm_histogram(int n, std::int64_t qmax) {
    std::vector<std::int64_t> tally(static_cast<std::size_t>(qmax) + 1, 0);
    const std::int64_t r = isqrt64(qmax);
    if (n == 2) {
        for (std::int64_t a = -r; a <= r; ++a)
            for (std::int64_t b = -r; b <= r; ++b) {
                const std::int64_t q = a * a + b * b;
                if (q == 0 || q > qmax) continue;
                if (std::gcd(std::abs(a), std::abs(b)) != 1) continue;
                ++tally[static_cast<std::size_t>(q)];
            }
    } else if (n == 3) {
        for (std::int64_t a = -r; a <= r; ++a)
            for (std::int64_t b = -r; b <= r; ++b) {
                const std::int64_t q2 = a * a + b * b;
                if (q2 > qmax) continue;
                const std::int64_t g2 = std::gcd(std::abs(a), std::abs(b));
                const std::int64_t cmax = isqrt64(qmax - q2);
                for (std::int64_t c = -cmax; c <= cmax; ++c) {
                    const std::int64_t q = q2 + c * c;
                    if (q == 0) continue;
                    if (std::gcd(g2, std::abs(c)) != 1) continue;
                    ++tally[static_cast<std::size_t>(q)];
                }
            }
    } else if (n == 4) {
        for (std::int64_t a = -r; a <= r; ++a)
            for (std::int64_t b = -r; b <= r; ++b) {
                const std::int64_t q2 = a * a + b * b;
                if (q2 > qmax) continue;
                const std::int64_t g2 = std::gcd(std::abs(a), std::abs(b));
                for (std::int64_t c = -r; c <= r; ++c) {
                    const std::int64_t q3 = q2 + c * c;
                    if (q3 > qmax) continue;
                    const std::int64_t g3 = std::gcd(g2, std::abs(c));
                    const std::int64_t dmax = isqrt64(qmax - q3);
                    for (std::int64_t d = -dmax; d <= dmax; ++d) {
                        const std::int64_t q = q3 + d * d;
                        if (q == 0) continue;
                        if (std::gcd(g3, std::abs(d)) != 1) continue;
                        ++tally[static_cast<std::size_t>(q)];
                    }
                }
            }
    } else {
        throw UnsupportedVariety("primitive_norm_histogram: only n = 2, 3, 4");
    }
    return tally;
}

struct ReducedPlane {
    IntVec b1, b2; // Gauss-reduced basis of { q in Z^3 : <q,v> = 0 }
};

ReducedPlane perp_lattice_basis(const IntVec& v) {
    const IntMat m = complete_to_sl(v);
    const IntMat mi = integer_inverse(m);
    ReducedPlane out;
    out.b1 = mi.row(1).transpose();
    out.b2 = mi.row(2).transpose();
    // Gauss reduction; stop on non-improving steps (the half-integer case
    // oscillates under round-half-away-from-zero)
    while (true) {
        if (out.b1.squaredNorm() > out.b2.squaredNorm()) std::swap(out.b1, out.b2);
        const std::int64_t n1 = out.b1.squaredNorm();
        const std::int64_t d = out.b2.dot(out.b1);
        const auto mu = static_cast<std::int64_t>(
            std::llround(static_cast<double>(d) / static_cast<double>(n1)));
        if (mu == 0) break;
        const IntVec cand = out.b2 - mu * out.b1;
        if (cand.squaredNorm() >= out.b2.squaredNorm()) break;
        out.b2 = cand;
    }
    return out;
}

// visit all (alpha, beta) != 0 modulo +- with gcd(alpha,beta) = 1 and
// Q(alpha,beta) <= cap; passes the exact value of Q
template <typename Visit>
void for_each_coprime_in_form(const ReducedPlane& plane, std::int64_t cap, Visit&& visit) {
    const std::int64_t g11 = plane.b1.squaredNorm();
    const std::int64_t g12 = plane.b1.dot(plane.b2);
    const std::int64_t g22 = plane.b2.squaredNorm();
    if (cap < g11) return; // the reduced minimum already exceeds the cap
    const double disc = static_cast<double>(g11) * static_cast<double>(g22) -
                        static_cast<double>(g12) * static_cast<double>(g12);
    const auto beta_max = static_cast<std::int64_t>(
        std::floor(std::sqrt(static_cast<double>(cap) * static_cast<double>(g11) / disc))) + 1;
    for (std::int64_t beta = 0; beta <= beta_max; ++beta) {
        // alpha window: g11 a^2 + 2 g12 b a + (g22 b^2 - cap) <= 0
        const double discr = std::max(0.0, static_cast<double>(g11) * cap -
                                               disc * static_cast<double>(beta) * beta);
        const double mid = -static_cast<double>(g12) * beta / static_cast<double>(g11);
        const double w = std::sqrt(discr) / static_cast<double>(g11);
        auto lo = static_cast<std::int64_t>(std::floor(mid - w)) - 1;
        auto hi = static_cast<std::int64_t>(std::ceil(mid + w)) + 1;
        if (beta == 0) lo = std::max<std::int64_t>(lo, 1);
        for (std::int64_t alpha = lo; alpha <= hi; ++alpha) {
            if (beta == 0 && alpha < 1) continue;
            const std::int64_t q =
                g11 * alpha * alpha + 2 * g12 * alpha * beta + g22 * beta * beta;
            if (q <= 0 || q > cap) continue;
            if (std::gcd(std::abs(alpha), std::abs(beta)) != 1) continue;
            visit(alpha, beta, q);
        }
    }
}

// weighted histogram over heights h = q_v * q_p for the full flag: weight 2
// for q_v < q_p (the swapped pair is counted implicitly), 1 for equal norms
std::vector<std::int64_t> flag3_height_histogram(std::int64_t hmax) {
    std::vector<std::int64_t> tally(static_cast<std::size_t>(hmax) + 1, 0);
    const std::int64_t qv_max = isqrt64(hmax);
    const std::int64_t r = isqrt64(qv_max);
    IntVec v(3);
    for (std::int64_t a = -r; a <= r; ++a)
        for (std::int64_t b = -r; b <= r; ++b)
            for (std::int64_t c = -r; c <= r; ++c) {
                if (!sign_normalized(a, b, c)) continue;
                const std::int64_t qv = a * a + b * b + c * c;
                if (qv == 0 || qv > qv_max) continue;
                if (std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)) != 1) continue;
                v << a, b, c;
                const ReducedPlane plane = perp_lattice_basis(v);
                const std::int64_t cap = hmax / qv;
                for_each_coprime_in_form(plane, cap,
                                         [&](std::int64_t, std::int64_t, std::int64_t qp) {
                                             if (qp < qv) return;
                                             tally[static_cast<std::size_t>(qv * qp)] +=
                                                 (qp > qv) ? 2 : 1;
                                         });
            }
    return tally;
}

} // namespace

HeightSpec anticanonical_exponents(int n, const std::vector<int>& E) {
    const std::vector<int> cuts = cuts_from_E(n, E);
    if (cuts.empty())
        throw std::invalid_argument("anticanonical_exponents: E must be a proper subset");
    const BlockStructure bs = block_structure(n, cuts);
    HeightSpec spec;
    // the weight multiplicity at the cut between consecutive blocks is the
    // sum of their sizes
    for (int b = 0; b + 1 < bs.blocks(); ++b)
        spec.exponents.push_back(bs.sizes[b] + bs.sizes[b + 1]);
    return spec;
}

double height(const FlagPoint& x, const HeightSpec& spec) {
    if (x.pluecker.size() != spec.exponents.size())
        throw std::invalid_argument("height: flag steps do not match the height exponents");
    double h = 1.0;
    for (std::size_t j = 0; j < x.pluecker.size(); ++j)
        h *= std::pow(std::sqrt(static_cast<double>(x.pluecker[j].squaredNorm())),
                      spec.exponents[j]);
    return h;
}

bool valid_flag(const FlagPoint& x, int n) {
    for (const auto& v : x.pluecker) {
        std::int64_t g = 0;
        for (Eigen::Index i = 0; i < v.size(); ++i) g = std::gcd(g, std::abs(v[i]));
        if (g != 1) return false;
    }
    if (x.pluecker.size() == 1) return true;
    if (n == 3 && x.pluecker.size() == 2) {
        const IntVec& v = x.pluecker[0];
        const IntVec& p = x.pluecker[1]; // (p12, p13, p23)
        if (v.size() != 3 || p.size() != 3) return false;
        return v[0] * p[2] - v[1] * p[1] + v[2] * p[0] == 0;
    }
    return false;
}

Variety variety_from_string(const std::string& name) {
    if (name == "p1") return Variety::P1;
    if (name == "p2") return Variety::P2;
    if (name == "p3") return Variety::P3;
    if (name == "flag3") return Variety::Flag3;
    throw UnsupportedVariety("unknown variety '" + name + "' (expected p1|p2|p3|flag3)");
}

std::string to_string(Variety v) {
    switch (v) {
    case Variety::P1: return "p1";
    case Variety::P2: return "p2";
    case Variety::P3: return "p3";
    case Variety::Flag3: return "flag3";
    }
    return "?";
}

int variety_rank(Variety v) {
    switch (v) {
    case Variety::P1: return 2;
    case Variety::P2: return 3;
    case Variety::P3: return 4;
    case Variety::Flag3: return 3;
    }
    return 0;
}

int variety_pic_rank(Variety v) { return v == Variety::Flag3 ? 2 : 1; }

HeightSpec variety_height(Variety v) {
    const int n = variety_rank(v);
    std::vector<int> E;
    if (v != Variety::Flag3 && n > 2)
        for (int i = 2; i <= n - 1; ++i) E.push_back(i);
    return anticanonical_exponents(n, E);
}

CountSeries enumerate_points(Variety variety, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("enumerate_points: empty grid");
    std::vector<double> grid = t_grid;
    std::sort(grid.begin(), grid.end());
    if (!(grid.front() > 0.0))
        throw std::invalid_argument("enumerate_points: thresholds must be positive");
    const double t_max = grid.back();

    CountSeries series;
    series.param = grid;

    if (variety == Variety::Flag3) {
        const auto hmax = static_cast<std::int64_t>(std::floor(t_max));
        if (hmax < 1) {
            series.counts.assign(grid.size(), 0);
            return series;
        }
        const auto tally = flag3_height_histogram(hmax);
        std::vector<std::int64_t> prefix(tally.size() + 1, 0);
        for (std::size_t h = 1; h < tally.size(); ++h) prefix[h] = prefix[h - 1] + tally[h];
        for (double t : grid) {
            const auto h = std::min<std::int64_t>(hmax, static_cast<std::int64_t>(std::floor(t)));
            series.counts.push_back(h >= 1 ? prefix[static_cast<std::size_t>(h)] : 0);
        }
        return series;
    }

    const int n = variety_rank(variety);
    const std::int64_t qmax = norm2_cap(t_max, n);
    if (qmax < 1) {
        series.counts.assign(grid.size(), 0);
        return series;
    }
    const auto tally = primitive_norm_histogram(n, qmax);
    std::vector<std::int64_t> prefix(tally.size(), 0);
    for (std::size_t q = 1; q < tally.size(); ++q) prefix[q] = prefix[q - 1] + tally[q];
    for (double t : grid) {
        const std::int64_t q = std::min(qmax, norm2_cap(t, n));
        // vectors come in +- pairs
        series.counts.push_back(q >= 1 ? prefix[static_cast<std::size_t>(q)] / 2 : 0);
    }
    return series;
}

std::int64_t count_points(Variety variety, double t_max) {
    return enumerate_points(variety, {t_max}).counts.front();
}

std::vector<FlagPoint> list_points(Variety variety, double t_max, std::int64_t cap) {
    std::vector<FlagPoint> out;
    auto guard = [&]() {
        if (static_cast<std::int64_t>(out.size()) > cap)
            throw EnumerationOverflow("list_points: more than " + std::to_string(cap) +
                                      " points");
    };
    if (variety == Variety::Flag3) {
        // no swap trick here: the base vector must cover every q_v <= hmax
        const auto hmax = static_cast<std::int64_t>(std::floor(t_max));
        const std::int64_t qv_max = std::max<std::int64_t>(hmax, 0);
        const std::int64_t r = isqrt64(std::max<std::int64_t>(qv_max, 0));
        IntVec v(3);
        for (std::int64_t a = -r; a <= r; ++a)
            for (std::int64_t b = -r; b <= r; ++b)
                for (std::int64_t c = -r; c <= r; ++c) {
                    if (!sign_normalized(a, b, c)) continue;
                    const std::int64_t qv = a * a + b * b + c * c;
                    if (qv == 0 || qv > qv_max) continue;
                    if (std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)) != 1) continue;
                    v << a, b, c;
                    const ReducedPlane plane = perp_lattice_basis(v);
                    for_each_coprime_in_form(
                        plane, hmax / qv,
                        [&](std::int64_t alpha, std::int64_t beta, std::int64_t) {
                            const IntVec q = alpha * plane.b1 + beta * plane.b2;
                            IntVec p(3);
                            p << q[2], -q[1], q[0];
                            FlagPoint pt;
                            pt.pluecker = {v, p};
                            out.push_back(std::move(pt));
                            guard();
                        });
                }
        // the enumeration above is asymmetric (q_v <= q_p was not imposed);
        // it already lists each ordered flag once because p runs over the
        // full incidence plane of v
        return out;
    }

    const int n = variety_rank(variety);
    const std::int64_t qmax = norm2_cap(t_max, n);
    const std::int64_t r = isqrt64(std::max<std::int64_t>(qmax, 0));
    // odometer over the cube [-r, r]^n
    std::vector<std::int64_t> idx(n, -r);
    while (true) {
        std::int64_t q = 0, g = 0;
        for (int k = 0; k < n; ++k) {
            q += idx[k] * idx[k];
            g = std::gcd(g, std::abs(idx[k]));
        }
        bool head_positive = false;
        for (int k = 0; k < n; ++k) {
            if (idx[k] != 0) {
                head_positive = idx[k] > 0;
                break;
            }
        }
        if (q >= 1 && q <= qmax && g == 1 && head_positive) {
            IntVec v(n);
            for (int k = 0; k < n; ++k) v[k] = idx[k];
            FlagPoint pt;
            pt.pluecker = {v};
            out.push_back(std::move(pt));
            guard();
        }
        int k = 0;
        while (k < n && ++idx[k] > r) idx[k++] = -r;
        if (k == n) break;
    }
    return out;
}

ManinFit fit_manin(const CountSeries& series, int expected_pic_rank) {
    if (series.param.size() < 4)
        throw InsufficientData("fit_manin: need at least 4 grid points");
    if (series.param.back() < 100.0 * series.param.front())
        throw InsufficientData("fit_manin: grid must span at least two decades");
    const int degree = expected_pic_rank - 1;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < series.param.size(); ++i) {
        xs.push_back(std::log(series.param[i]));
        ys.push_back(static_cast<double>(series.counts[i]) / series.param[i]);
    }
    ManinFit fit;
    fit.degree = degree;
    fit.poly = fit_poly(xs, ys, degree);

    std::vector<double> rx, ry;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double resid = std::abs(ys[i] - fit.poly.eval(xs[i]));
        if (resid > 0.0 && xs[i] > 0.0) {
            rx.push_back(std::log(xs[i]));
            ry.push_back(std::log(resid));
        }
    }
    if (rx.size() >= 3) fit.residual_exponent = fit_line(rx, ry).slope;
    return fit;
}

} // namespace horolab
