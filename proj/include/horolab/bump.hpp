#pragma once

#include <Eigen/Dense>

#include <functional>

namespace horolab {

/// Smooth compactly supported bump on R^m, normalized to unit integral:
///   f(x) = amplitude * exp(-order * rho^2 / (1 - rho^2)),  rho = |x-c|/radius < 1
/// and 0 outside the ball. The normalizing amplitude is radius^{-m} times a
/// dimensional constant obtained by radial quadrature, so sup f scales
/// exactly like radius^{-m}.
class Bump {
public:
    Bump(Eigen::VectorXd center, double radius, int order = 1);

    double operator()(const Eigen::VectorXd& x) const;

    int dim() const { return static_cast<int>(center_.size()); }
    int order() const { return order_; }
    double radius() const { return radius_; }
    const Eigen::VectorXd& center() const { return center_; }

    double sup() const { return amplitude_; }
    /// integral over R^m, recomputed by quadrature (== 1 up to quadrature error)
    double integral() const;

    /// unnormalized radial profile on [0,1)
    double profile(double rho) const;

private:
    Eigen::VectorXd center_;
    double radius_;
    int order_;
    double amplitude_;
};

/// adaptive Simpson quadrature on [a,b]
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-12);

/// surface area of the unit sphere S^{m-1} in R^m
double unit_sphere_area(int m);

} // namespace horolab
