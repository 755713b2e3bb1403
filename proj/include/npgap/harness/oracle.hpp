#pragma once

#include "npgap/geometry.hpp"

#include <complex>

namespace npgap {

struct OracleValue {
    double u = 0;
    Vec2 grad = Vec2::Zero();
    long terms = 0;
};

// Perfectly conducting two-disk problem in the uniform field h = Re(A z) by
// iterated dipole images (A = 1 for h = x, A = -i for h = y). Reflections stop
// when one generation changes u and grad u by less than tol; throws
// NumericalError after 1e5 terms.
OracleValue image_series_oracle(const Curve& disk1, const Curve& disk2, std::complex<double> A, const Vec2& x,
                                double tol = 1e-15);

}  // namespace npgap
