#include "horolab/iwasawa.hpp"

#include <cmath>

namespace horolab {

IwasawaTriple iwasawa(const Eigen::MatrixXd& g) {
    const auto n = g.rows();
    if (n != g.cols() || n == 0) throw std::invalid_argument("iwasawa: square matrix required");

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd k = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();

    const double scale = g.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(r(i, i)) <= 1e-13 * std::max(1.0, scale))
            throw SingularInput("iwasawa: input is numerically rank-deficient");
        if (r(i, i) < 0.0) { // flip so that a > 0
            r.row(i) = -r.row(i);
            k.col(i) = -k.col(i);
        }
    }

    IwasawaTriple out;
    out.k = std::move(k);
    out.a = r.diagonal();
    out.u = out.a.cwiseInverse().asDiagonal() * r;
    // pin the unit diagonal exactly
    for (Eigen::Index i = 0; i < n; ++i) out.u(i, i) = 1.0;
    return out;
}

double iwasawa_a_log_norm(const Eigen::MatrixXd& g) {
    return iwasawa(g).a.array().log().matrix().norm();
}

} // namespace horolab
