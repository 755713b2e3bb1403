#include "npgap/errors.hpp"
#include "npgap/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace npgap;
constexpr double pi = std::numbers::pi;

namespace {

// Local minimizer of |c1(s) - c2(t)| by alternating golden-section searches.
double refine_distance(const Curve& c1, const Curve& c2, double s, double t, double h) {
    auto golden = [](auto f, double a, double b) {
        const double g = (std::sqrt(5.0) - 1) / 2;
        double x1 = b - g * (b - a), x2 = a + g * (b - a), f1 = f(x1), f2 = f(x2);
        for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
            if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = f(x1); }
            else { a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = f(x2); }
        }
        return 0.5 * (a + b);
    };
    for (int it = 0; it < 60; ++it) {
        s = golden([&](double a) { return (c1.position(a) - c2.position(t)).norm(); }, s - h, s + h);
        t = golden([&](double b) { return (c1.position(s) - c2.position(b)).norm(); }, t - h, t + h);
    }
    return (c1.position(s) - c2.position(t)).norm();
}

Curve blob() { return Curve::fourier({0.2, -0.1}, 1.0, {0.08, 0.03}, {0.05, -0.02}); }

}  // namespace

TEST_CASE("collinear unit circles") {
    ClosestPoints cp = closest_points(Curve::circle({-1.05, 0}, 1), Curve::circle({1.05, 0}, 1));
    CHECK(cp.eps == doctest::Approx(0.1).epsilon(1e-13));
    CHECK((cp.z1 - Vec2(-0.05, 0)).norm() < 1e-12);
    CHECK((cp.z2 - Vec2(0.05, 0)).norm() < 1e-12);
}

TEST_CASE("mirror symmetric curves give mirrored closest points") {
    Curve e = Curve::ellipse({-3, 0.4}, 2, 1, 0.7);
    Curve m = Curve::ellipse({3, 0.4}, 2, 1, -0.7);
    ClosestPoints cp = closest_points(e, m);
    CHECK(std::abs(cp.z1.x() + cp.z2.x()) < 1e-10);
    CHECK(std::abs(cp.z1.y() - cp.z2.y()) < 1e-10);
}

TEST_CASE("ellipse against circle matches dense sampling") {
    Curve e = Curve::ellipse({0, 0}, 2, 1, 0.0);
    Curve c = Curve::circle({3.01, 0.0}, 1);
    ClosestPoints cp = closest_points(e, c);
    const int n = 4000;
    double best = INFINITY, bs = 0, bt = 0;
    std::vector<Vec2> pe(n), pc(n);
    for (int k = 0; k < n; ++k) {
        pe[k] = e.position(2 * pi * k / n);
        pc[k] = c.position(2 * pi * k / n);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double d = (pe[i] - pc[j]).squaredNorm();
            if (d < best) { best = d; bs = 2 * pi * i / n; bt = 2 * pi * j / n; }
        }
    double oracle = refine_distance(e, c, bs, bt, 4 * pi / n);
    CHECK(std::abs(cp.eps - oracle) < 1e-8);
    CHECK(cp.eps == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("overlap is rejected") {
    CHECK_THROWS_AS(closest_points(Curve::circle({0, 0}, 1), Curve::circle({1.5, 0}, 1)), DomainError);
    CHECK_THROWS_AS(Curve::ellipse({0, 0}, 1, 2), DomainError);
    CHECK_THROWS_AS(Curve::circle({0, 0}, -1), DomainError);
    CHECK_THROWS_AS(Curve::fourier({0, 0}, 1, {0.0, 0.0, 0.5}, {}), DomainError);  // not convex
    CHECK_THROWS_AS(place_at_gap(Curve(), Curve(), 0.0), DomainError);
}

TEST_CASE("placement of two unit circles") {
    InclusionPair p = place_at_gap(Curve(), Curve(), 0.1);
    CHECK((p.curve1.center() - Vec2(-1.05, 0)).norm() < 1e-12);
    CHECK((p.curve2.center() - Vec2(1.05, 0)).norm() < 1e-12);
    CHECK(p.gap_scale() == doctest::Approx(std::sqrt(0.1)));
}

TEST_CASE("placement invariants: gap and normals") {
    const Curve shapes[][2] = {{Curve::ellipse({0, 0}, 2, 1, 0.3), Curve::ellipse({1, 1}, 1.5, 1, -0.5)},
                               {blob(), Curve::ellipse({0, 0}, 1.2, 0.7, 1.1)},
                               {Curve::circle({5, 5}, 0.5), blob()}};
    for (const auto& s : shapes)
        for (double eps : {1e-1, 1e-3, 1e-5}) {
            InclusionPair p = place_at_gap(s[0], s[1], eps);
            ClosestPoints cp = closest_points(p.curve1, p.curve2);
            CHECK(std::abs(cp.eps - eps) < 1e-10);
            CHECK(std::abs((p.z1 - p.z2).norm() - eps) < 1e-10);
            Vec2 d = (p.z2 - p.z1).normalized();
            Vec2 t1 = p.curve1.tangent(p.t1).normalized(), t2 = p.curve2.tangent(p.t2).normalized();
            CHECK(std::abs(d.dot(t1)) < 1e-10);
            CHECK(std::abs(d.dot(t2)) < 1e-10);
        }
}

TEST_CASE("curvature") {
    Curve c = Curve::circle({1, 2}, 2);
    for (double t : {0.0, 1.0, 4.0}) CHECK(c.curvature(t) == doctest::Approx(0.5).epsilon(1e-14));
    Curve e = Curve::ellipse({0, 0}, 2, 1);
    CHECK(e.curvature(pi / 2) == doctest::Approx(0.25).epsilon(1e-14));  // end of the minor axis
    CHECK(e.curvature(0) == doctest::Approx(2.0).epsilon(1e-14));
    // Tangent angle by central differences.
    Curve b = blob();
    for (double t : {0.3, 1.7, 4.2}) {
        double h = 1e-4;
        auto angle = [&](double s) {
            Vec2 d = b.tangent(s);
            return std::atan2(d.y(), d.x());
        };
        double dtheta = std::remainder(angle(t + h) - angle(t - h), 2 * pi) / (2 * h);
        CHECK(std::abs(dtheta / b.tangent(t).norm() - b.curvature(t)) < 1e-7);
    }
}

TEST_CASE("fourier pair curvature matches the radial formula") {
    Curve b = blob();
    InclusionPair p = place_at_gap(b, b, 0.02);
    auto radial_kappa = [&](double t) {
        double r = 1, dr = 0, ddr = 0;
        const double cc[2] = {0.08, 0.03}, ss[2] = {0.05, -0.02};
        for (int n = 1; n <= 2; ++n) {
            r += cc[n - 1] * std::cos(n * t) + ss[n - 1] * std::sin(n * t);
            dr += n * (-cc[n - 1] * std::sin(n * t) + ss[n - 1] * std::cos(n * t));
            ddr += -n * n * (cc[n - 1] * std::cos(n * t) + ss[n - 1] * std::sin(n * t));
        }
        return (r * r + 2 * dr * dr - r * ddr) / std::pow(r * r + dr * dr, 1.5);
    };
    CHECK(std::abs(p.kappa1 - radial_kappa(p.t1)) < 1e-9);
    CHECK(std::abs(p.kappa2 - radial_kappa(p.t2)) < 1e-9);
}

TEST_CASE("osculating disks") {
    InclusionPair p = place_at_gap(Curve::circle({0, 0}, 1), Curve::circle({0, 0}, 0.5), 0.01);
    auto [b1, b2] = osculating_disks(p);
    CHECK((b1.center() - p.curve1.center()).norm() < 1e-12);
    CHECK((b2.center() - p.curve2.center()).norm() < 1e-12);
    CHECK(b1.radius() == doctest::Approx(1.0));
    CHECK(b2.radius() == doctest::Approx(0.5));

    InclusionPair e = place_at_gap(Curve::ellipse({0, 0}, 2, 1), Curve(), 0.01);
    CHECK(e.r1 == doctest::Approx(0.5).epsilon(1e-12));  // b^2 / a

    // Second-order contact: distance to the disk is O(|t - t*|^3).
    InclusionPair g = place_at_gap(blob(), Curve::ellipse({0, 0}, 1.3, 1, 0.4), 0.01);
    for (int j = 0; j < 2; ++j) {
        const Curve& c = j ? g.curve2 : g.curve1;
        double ts = j ? g.t2 : g.t1;
        Vec2 cen = j ? g.c2 : g.c1;
        double r = j ? g.r2 : g.r1, ratio_max = 0;
        for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
            for (double sgn : {-1.0, 1.0}) {
                double dist = std::abs((c.position(ts + sgn * dt) - cen).norm() - r);
                ratio_max = std::max(ratio_max, dist / (dt * dt * dt));
            }
        }
        CHECK(ratio_max < 10);
    }
}

TEST_CASE("inside test and translation") {
    Curve e = Curve::ellipse({1, 1}, 2, 1, 0.5);
    CHECK(e.contains({1, 1}));
    CHECK_FALSE(e.contains({4, 1}));
    Curve t = e.translated({1, -1});
    CHECK(t.contains({2, 0}));
    CHECK((t.position(0.3) - e.position(0.3) - Vec2(1, -1)).norm() < 1e-14);
}
