#include "horolab/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace horolab {

UnimodularLattice::UnimodularLattice(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() < 2)
        throw std::invalid_argument("UnimodularLattice: square basis with n >= 2 required");
    const double det = basis_.determinant();
    if (std::abs(det - 1.0) > 1e-9)
        throw std::invalid_argument("UnimodularLattice: determinant must be 1 (got " +
                                    std::to_string(det) + ")");
}

std::string UnimodularLattice::to_json() const {
    std::ostringstream os;
    char buf[64];
    os << "[";
    for (int i = 0; i < n(); ++i) {
        os << (i ? "," : "") << "[";
        for (int j = 0; j < n(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", basis_(i, j));
            os << (j ? "," : "") << buf;
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

UnimodularLattice UnimodularLattice::from_json(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::vector<double> cur;
    std::size_t i = 0;
    int depth = 0;
    std::string num;
    auto flush_number = [&]() {
        if (!num.empty()) {
            cur.push_back(std::stod(num));
            num.clear();
        }
    };
    for (; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch == '[') {
            ++depth;
        } else if (ch == ']') {
            flush_number();
            if (depth == 2) {
                rows.push_back(cur);
                cur.clear();
            }
            --depth;
        } else if (ch == ',') {
            flush_number();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            num += ch;
        }
    }
    if (rows.empty()) throw std::invalid_argument("lattice JSON: no rows found");
    const auto n = rows.size();
    Eigen::MatrixXd basis(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n) throw std::invalid_argument("lattice JSON: ragged rows");
        for (std::size_t c = 0; c < n; ++c) basis(r, c) = rows[r][c];
    }
    return UnimodularLattice(std::move(basis));
}

bool in_K_eps(const UnimodularLattice& lattice, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("in_K_eps: need 0 < eps <= 1");
    return first_minimum(lattice.basis()).length >= eps;
}

double injectivity_radius_lower(double eps, int n) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("injectivity_radius_lower: need 0 < eps <= 1");
    return kInjectivityConstant * std::pow(eps, n);
}

namespace {

// smooth 0->1 transition on [0,1]
double smoothstep_inf(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

std::int64_t gcd_of_coords(const IntVec& v) {
    std::int64_t g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) g = std::gcd(g, std::abs(v(i)));
    return g;
}

} // namespace

double eval_test_function(const TestFunction& phi, const UnimodularLattice& lattice,
                          std::int64_t max_points) {
    if (const auto* siegel = std::get_if<SiegelTransform>(&phi)) {
        if (siegel->f.dim() != lattice.n())
            throw std::invalid_argument("eval_test_function: bump dimension mismatch");
        double sum = 0.0;
        for_each_lattice_point_in_ball(
            lattice.basis(), siegel->f.center(), siegel->f.radius(),
            [&](const Eigen::VectorXd& point, const IntVec& coords) {
                if (coords.isZero()) return;
                if (siegel->primitive_only && gcd_of_coords(coords) != 1) return;
                sum += siegel->f(point);
            },
            max_points);
        return sum;
    }
    const auto& ind = std::get<SmoothedCompactIndicator>(phi);
    const double m1 = first_minimum(lattice.basis()).length;
    if (ind.width <= 0.0) return m1 >= ind.eps0 ? 1.0 : 0.0;
    return smoothstep_inf((m1 - (ind.eps0 - ind.width)) / ind.width);
}

std::optional<double> haar_mean(const TestFunction& phi, int n) {
    if (const auto* siegel = std::get_if<SiegelTransform>(&phi)) {
        const double mass = siegel->f.integral();
        return siegel->primitive_only ? mass / zeta(n) : mass;
    }
    return std::nullopt;
}

double zeta(int s) {
    if (s < 2) throw std::invalid_argument("zeta: integer s >= 2 required");
    const int cutoff = 2000;
    double sum = 0.0;
    for (int k = cutoff; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
    // Euler-Maclaurin tail over k > cutoff
    const double K = cutoff;
    const double tail = std::pow(K, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(K, -s) +
                        s / 12.0 * std::pow(K, -s - 1.0);
    return sum + tail;
}

Eigen::Matrix2d haar_sl2_matrix(CounterRng& rng) {
    // fundamental domain of the modular group: |x| <= 1/2, x^2 + y^2 >= 1,
    // with density proportional to 1/y^2; then a uniform rotation
    double x, y;
    while (true) {
        x = rng.uniform(-0.5, 0.5);
        const double ymin = std::sqrt(1.0 - x * x);
        // conditional mass of 1/y^2 on [ymin, inf) is 1/ymin; accept against
        // the x = 1/2 envelope
        if (rng.uniform01() * (2.0 / std::sqrt(3.0)) <= 1.0 / ymin) {
            double u = rng.uniform01();
            while (u == 0.0) u = rng.uniform01();
            y = ymin / u;
            break;
        }
    }
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const double s = 1.0 / std::sqrt(y);
    Eigen::Matrix2d tau;
    tau << s, x * s, 0.0, y * s; // columns (1,0)/sqrt(y), (x,y)/sqrt(y)
    Eigen::Matrix2d rot;
    rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return rot * tau;
}

UnimodularLattice HaarRank1Sampler::next() { return UnimodularLattice(haar_sl2_matrix(rng_)); }

} // namespace horolab
