#include "horolab/fit.hpp"

#include <cmath>

namespace horolab {

double PolyFit::eval(double x) const {
    double acc = 0.0;
    for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) acc = acc * x + coeffs[k];
    return acc;
}

PolyFit fit_poly(const std::vector<double>& x, const std::vector<double>& y, int degree) {
    const int n = static_cast<int>(x.size());
    if (y.size() != x.size()) throw std::invalid_argument("fit_poly: size mismatch");
    if (n < degree + 2)
        throw InsufficientData("fit_poly: need at least degree+2 points, got " +
                               std::to_string(n));
    Eigen::MatrixXd design(n, degree + 1);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        double p = 1.0;
        for (int k = 0; k <= degree; ++k) {
            design(i, k) = p;
            p *= x[i];
        }
        rhs(i) = y[i];
    }
    PolyFit fit;
    fit.n = n;
    fit.coeffs = design.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXd resid = rhs - design * fit.coeffs;
    fit.rss = resid.squaredNorm();
    const double mean = rhs.mean();
    const double tss = (rhs.array() - mean).matrix().squaredNorm();
    fit.r2 = tss > 0.0 ? 1.0 - fit.rss / tss : 1.0;
    const int dof = n - (degree + 1);
    const double sigma2 = dof > 0 ? fit.rss / dof : 0.0;
    const Eigen::MatrixXd cov =
        sigma2 * (design.transpose() * design).ldlt().solve(
                     Eigen::MatrixXd::Identity(degree + 1, degree + 1));
    fit.ses = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    return fit;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const PolyFit p = fit_poly(x, y, 1);
    LinearFit out;
    out.intercept = p.coeffs[0];
    out.slope = p.coeffs[1];
    out.intercept_se = p.ses[0];
    out.slope_se = p.ses[1];
    out.r2 = p.r2;
    out.n = p.n;
    return out;
}

} // namespace horolab
