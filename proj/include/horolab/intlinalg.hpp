#pragma once

#include <cstdint>

#include "horolab/svp.hpp"

namespace horolab {

/// extended euclid: g = gcd(a,b) >= 0 with x*a + y*b = g
struct Bezout {
    std::int64_t g, x, y;
};
Bezout ext_gcd(std::int64_t a, std::int64_t b);

/// Completes a primitive integer vector to an SL_n(Z) matrix with that first
/// column (n = 2 or 3).
IntMat complete_to_sl(const IntVec& v);

/// inverse of a determinant +-1 integer matrix (n = 2 or 3), exactly
IntMat integer_inverse(const IntMat& m);

std::int64_t det3(const IntMat& m);

} // namespace horolab
