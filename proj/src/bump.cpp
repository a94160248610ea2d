#include "horolab/bump.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace horolab {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    return adaptive(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 48);
}

double unit_sphere_area(int m) {
    return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m);
}

Bump::Bump(Eigen::VectorXd center, double radius, int order)
    : center_(std::move(center)), radius_(radius), order_(order) {
    if (!(radius_ > 0.0)) throw std::invalid_argument("Bump: radius > 0 required");
    if (order_ < 1) throw std::invalid_argument("Bump: order >= 1 required");
    const int m = dim();
    // unit-ball mass of the profile; amplitude = (radius^m * mass)^{-1}
    const double mass =
        unit_sphere_area(m) *
        integrate_1d([&](double rho) { return profile(rho) * std::pow(rho, m - 1); }, 0.0, 1.0);
    amplitude_ = 1.0 / (std::pow(radius_, m) * mass);
}

double Bump::profile(double rho) const {
    const double r2 = rho * rho;
    if (r2 >= 1.0) return 0.0;
    return std::exp(-static_cast<double>(order_) * r2 / (1.0 - r2));
}

double Bump::operator()(const Eigen::VectorXd& x) const {
    const double rho = (x - center_).norm() / radius_;
    if (rho >= 1.0) return 0.0;
    return amplitude_ * profile(rho);
}

double Bump::integral() const {
    const int m = dim();
    const double mass =
        unit_sphere_area(m) *
        integrate_1d([&](double rho) { return profile(rho) * std::pow(rho, m - 1); }, 0.0, 1.0);
    return amplitude_ * std::pow(radius_, m) * mass;
}

} // namespace horolab
