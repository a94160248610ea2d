#pragma once

#include <Eigen/Dense>

#include <vector>

#include "horolab/errors.hpp"

namespace horolab {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    double r2 = 0.0;
    int n = 0;
};

/// ordinary least squares y ~ intercept + slope * x
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct PolyFit {
    Eigen::VectorXd coeffs; // c_0 + c_1 x + ... + c_d x^d
    Eigen::VectorXd ses;    // standard errors of the coefficients
    double r2 = 0.0;
    double rss = 0.0;
    int n = 0;

    double tstat(int k) const { return ses[k] > 0.0 ? coeffs[k] / ses[k] : 0.0; }
    double eval(double x) const;
};

PolyFit fit_poly(const std::vector<double>& x, const std::vector<double>& y, int degree);

} // namespace horolab
