#include "npgap/harness/oracle.hpp"

#include "npgap/errors.hpp"

#include <cmath>
#include <vector>

namespace npgap {

namespace {

using cplx = std::complex<double>;

struct Dipole {
    cplx at, moment;
};

// Image of a dipole outside the circle (c, r); together with the original it
// is constant on the circle.
Dipole image(const Dipole& d, cplx c, double r) {
    cplx b = std::conj(d.at - c);
    return {c + r * r / b, r * r * std::conj(d.moment) / (b * b)};
}

}  // namespace

OracleValue image_series_oracle(const Curve& disk1, const Curve& disk2, std::complex<double> A, const Vec2& x,
                                double tol) {
    if (disk1.kind() != CurveKind::circle || disk2.kind() != CurveKind::circle)
        throw DomainError("image_series_oracle: inputs must be circles");
    cplx c[2] = {{disk1.center().x(), disk1.center().y()}, {disk2.center().x(), disk2.center().y()}};
    double r[2] = {disk1.radius(), disk2.radius()};
    cplx z(x.x(), x.y());
    if (std::abs(z - c[0]) < r[0] || std::abs(z - c[1]) < r[1])
        throw DomainError("image_series_oracle: point inside a disk");
    if (std::abs(c[1] - c[0]) <= r[0] + r[1]) throw DomainError("image_series_oracle: disks overlap");

    OracleValue out;
    cplx f = A * z, df = A;
    // gen[j]: dipoles added inside disk j in the latest generation.
    std::vector<Dipole> gen[2] = {{{c[0], -std::conj(A) * r[0] * r[0]}}, {{c[1], -std::conj(A) * r[1] * r[1]}}};
    double scale = std::abs(A) * (1 + std::abs(z));
    for (;;) {
        cplx inc = 0, dinc = 0;
        for (int j = 0; j < 2; ++j)
            for (const Dipole& d : gen[j]) {
                inc += d.moment / (z - d.at);
                dinc -= d.moment / ((z - d.at) * (z - d.at));
                ++out.terms;
            }
        f += inc;
        df += dinc;
        if (std::abs(inc) < tol * scale && std::abs(dinc) < tol * std::abs(A)) break;
        if (out.terms > 100000) throw NumericalError("image_series_oracle: no convergence within 1e5 terms");
        // Dipoles of disk j are imaged into the other disk.
        std::vector<Dipole> next[2];
        for (int j = 0; j < 2; ++j)
            for (const Dipole& d : gen[j]) next[1 - j].push_back(image(d, c[1 - j], r[1 - j]));
        gen[0] = std::move(next[0]);
        gen[1] = std::move(next[1]);
    }
    out.u = f.real();
    out.grad = Vec2(df.real(), -df.imag());
    return out;
}

}  // namespace npgap
