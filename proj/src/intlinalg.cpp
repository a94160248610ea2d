#include "horolab/intlinalg.hpp"

#include <stdexcept>

#include "horolab/errors.hpp"

namespace horolab {

Bezout ext_gcd(std::int64_t a, std::int64_t b) {
    std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1, r0 = a, r1 = b;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (r0 < 0) {
        r0 = -r0;
        x0 = -x0;
        y0 = -y0;
    }
    return {r0, x0, y0};
}

namespace {

// unimodular row operations reducing a primitive column to e1
IntMat reduce_to_e1(const IntVec& v) {
    const int n = static_cast<int>(v.size());
    IntMat u = IntMat::Identity(n, n);
    IntVec w = v;
    for (int row = 1; row < n; ++row) {
        const std::int64_t a = w[0], b = w[row];
        if (b == 0) continue;
        const Bezout bz = ext_gcd(a, b);
        const Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic> r0vec = u.row(0), rvec = u.row(row);
        u.row(0) = bz.x * r0vec + bz.y * rvec;
        u.row(row) = (-(b / bz.g)) * r0vec + (a / bz.g) * rvec;
        w[0] = bz.g;
        w[row] = 0;
    }
    if (w[0] < 0) { // zeros below a negative head: no gcd step ran
        u.row(0) = -u.row(0);
        w[0] = -w[0];
    }
    if (w[0] != 1) throw std::invalid_argument("complete_to_sl: vector is not primitive");
    return u;
}

} // namespace

std::int64_t det3(const IntMat& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

IntMat integer_inverse(const IntMat& m) {
    const int n = static_cast<int>(m.rows());
    IntMat inv(n, n);
    if (n == 2) {
        const std::int64_t det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
        if (det == -1) inv = -inv;
        else if (det != 1) throw std::invalid_argument("integer_inverse: |det| != 1");
        return inv;
    }
    if (n == 3) {
        const std::int64_t det = det3(m);
        if (det != 1 && det != -1) throw std::invalid_argument("integer_inverse: |det| != 1");
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const int r1 = (j + 1) % 3, r2 = (j + 2) % 3;
                const int c1 = (i + 1) % 3, c2 = (i + 2) % 3;
                inv(i, j) = m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1);
            }
        if (det == -1) inv = -inv;
        return inv;
    }
    throw UnsupportedRank("integer_inverse: only n = 2, 3");
}

IntMat complete_to_sl(const IntVec& v) {
    const int n = static_cast<int>(v.size());
    if (n != 2 && n != 3) throw UnsupportedRank("complete_to_sl: only n = 2, 3");
    if (v.isZero()) throw std::invalid_argument("complete_to_sl: zero vector");
    const IntMat u = reduce_to_e1(v);
    IntMat m = integer_inverse(u);
    const std::int64_t det = (n == 2) ? m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) : det3(m);
    if (det == -1) m.col(1) = -m.col(1); // fix orientation, first column untouched
    return m;
}

} // namespace horolab
