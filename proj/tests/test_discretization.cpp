#include "npgap/discretization.hpp"
#include "npgap/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

using namespace npgap;
constexpr double pi = std::numbers::pi;

namespace {

// Adaptive Simpson on [a, b].
double adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double a, double b, double fa, double fm, double fb, double whole, int depth) {
            double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            double flm = f(lm), frm = f(rm);
            double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
            if (depth > 40 || std::abs(left + right - whole) < 15 * tol)
                return left + right + (left + right - whole) / 15;
            return rec(a, m, fa, flm, fm, left, depth + 1) + rec(m, b, fm, frm, fb, right, depth + 1);
        };
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 0);
}

}  // namespace

TEST_CASE("unit circle weights") {
    BoundaryGrid g = discretize(Curve(), 64);
    for (int k = 0; k < 64; ++k) CHECK(g.w[k] == doctest::Approx(2 * pi / 64).epsilon(1e-14));
    CHECK(g.perimeter() == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK_THROWS_AS(discretize(Curve(), 63), DomainError);
}

TEST_CASE("ellipse perimeter and moments against adaptive quadrature") {
    Curve e = Curve::ellipse({0.3, -0.2}, 2, 1, 0.4);
    auto speed = [&](double t) { return e.tangent(t).norm(); };
    double per = adaptive(speed, 0, 2 * pi, 1e-14);
    double mx = adaptive([&](double t) { return e.position(t).x() * speed(t); }, 0, 2 * pi, 1e-14);
    for (bool graded : {false, true}) {
        GradedMap map = graded ? GradedMap{0.7, 0.05, 0.5} : GradedMap{};
        BoundaryGrid g = discretize(e, 256, map);
        CHECK(std::abs(g.perimeter() - per) < 1e-10);
        Eigen::VectorXd x(g.n);
        for (int k = 0; k < g.n; ++k) x[k] = g.x[k].x();
        CHECK(std::abs(trapezoid_integrate(g, x) - mx) < 1e-10);
        Vec2 balance = Vec2::Zero();
        for (int k = 0; k < g.n; ++k) balance += g.w[k] * g.normal[k];
        CHECK(balance.norm() < 1e-10);
    }
}

TEST_CASE("trapezoid integrals on the unit circle") {
    BoundaryGrid g = discretize(Curve(), 64);
    CHECK(trapezoid_integrate(g, Eigen::VectorXd::Ones(64)) == doctest::Approx(2 * pi));
    Eigen::VectorXd c(64);
    for (int k = 0; k < 64; ++k) c[k] = std::cos(g.t[k]);
    CHECK(std::abs(trapezoid_integrate(g, c)) < 1e-14);
}

TEST_CASE("doubling N leaves smooth integrals unchanged") {
    Curve e = Curve::ellipse({0, 0}, 1.5, 1, 0.2);
    for (int n : {128, 256}) {
        BoundaryGrid a = discretize(e, n), b = discretize(e, 2 * n);
        auto f = [](const BoundaryGrid& g) {
            Eigen::VectorXd v(g.n);
            for (int k = 0; k < g.n; ++k) v[k] = std::exp(g.x[k].x()) * std::sin(g.x[k].y());
            return trapezoid_integrate(g, v);
        };
        CHECK(std::abs(f(a) - f(b)) < 1e-10);
    }
}

TEST_CASE("graded map") {
    GradedMap m{1.0, 0.02, 0.5};
    for (double t : {0.0, 0.9, 1.0, 1.05, 2.5, 6.0}) {
        double s = m.sigma(t);
        CHECK(std::abs(std::remainder(m.tau(s) - t, 2 * pi)) < 1e-12);
    }
    CHECK(m.dsigma(1.0) == doctest::Approx(0.5 + 0.5 / 0.02));
    BoundaryGrid g = discretize(Curve::ellipse({0, 0}, 2, 1), 128, m);
    CHECK(std::abs(std::remainder(g.t[0] - 1.0, 2 * pi)) < 1e-14);
    // Nodes cluster: spacing at the center is much smaller than far away.
    CHECK((g.x[1] - g.x[0]).norm() < 0.1 * (g.x[65] - g.x[64]).norm());
}

TEST_CASE("refined grid contains the coarse nodes") {
    BoundaryGrid g = discretize(Curve::ellipse({0, 0}, 2, 1), 64, GradedMap{0.3, 0.05, 0.5});
    BoundaryGrid f = refine(g, 4);
    CHECK(f.n == 256);
    for (int k = 0; k < g.n; ++k) CHECK((f.x[4 * k] - g.x[k]).norm() < 1e-13);
}

TEST_CASE("log quadrature rule") {
    for (int n : {16, 64}) {
        LogQuadratureRule r = log_rule(n);
        Eigen::MatrixXd R = r.matrix();
        // Integral of ln(4 sin^2((t - s)/2)) over a period vanishes.
        CHECK((R * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() < 1e-12);
        // Fourier symbol: cos(m s) -> -2 pi cos(m t) / m for 1 <= m < n/2.
        for (int m : {1, 3, n / 2 - 1}) {
            Eigen::VectorXd c(n);
            for (int k = 0; k < n; ++k) c[k] = std::cos(m * 2 * pi * k / n);
            CHECK(((R * c) + (2 * pi / m) * c).cwiseAbs().maxCoeff() < 1e-11);
        }
    }
    // Mode one at t = 0 against brute force: a midpoint rule converges slowly
    // next to the singularity, so only a loose check.
    const int M = 2000000;
    double brute = 0;
    for (int k = 0; k < M; ++k) {
        double s = 2 * pi * (k + 0.5) / M;
        brute += std::log(4 * std::sin(s / 2) * std::sin(s / 2)) * std::cos(s) * 2 * pi / M;
    }
    LogQuadratureRule r = log_rule(32);
    double v = 0;
    for (int j = 0; j < 32; ++j) v += r(0, j) * std::cos(2 * pi * j / 32);
    CHECK(v == doctest::Approx(-2 * pi).epsilon(1e-12));
    CHECK(std::abs(brute - v) < 1e-4);
}

TEST_CASE("log rule converges fast on smooth times log") {
    // Self-convergence against a large-N reference, f(s) = exp(cos s).
    auto value = [](int n) {
        LogQuadratureRule r = log_rule(n);
        double v = 0;
        for (int j = 0; j < n; ++j) v += r(0, j) * std::exp(std::cos(2 * pi * j / n));
        return v;
    };
    double ref = value(1024);
    double e32 = std::abs(value(32) - ref), e16 = std::abs(value(16) - ref);
    CHECK(e16 < 1e-8);
    CHECK(e32 < 1e-13);
}

TEST_CASE("arclength derivative on a circle") {
    BoundaryGrid g = discretize(Curve::circle({0, 0}, 2), 64);
    Eigen::VectorXd v(64), d(64);
    for (int k = 0; k < 64; ++k) {
        v[k] = std::sin(2 * g.t[k]);
        d[k] = std::cos(2 * g.t[k]);  // d/dsigma = (1/2) d/dt
    }
    CHECK((arclength_derivative(g, v) - d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pair grids cluster nodes at the closest points") {
    InclusionPair p = place_at_gap(Curve(), Curve::ellipse({0, 0}, 2, 1, 0.3), 1e-3);
    PairGrids g = discretize_pair(p, 128);
    CHECK((g.g1.x[0] - p.z1).norm() < 1e-12);
    CHECK((g.g2.x[0] - p.z2).norm() < 1e-12);
    CHECK(g.total() == 256);
    CHECK(default_resolution(1e-3) == 256);
    CHECK(default_resolution(1e-5) == 512);
}
