#include "npgap/geometry.hpp"

#include "npgap/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace npgap {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap(double t) {
    t = std::fmod(t, two_pi);
    return t < 0 ? t + two_pi : t;
}

}  // namespace

Curve Curve::circle(Vec2 center, double radius) {
    if (!(radius > 0)) throw DomainError("circle radius must be positive");
    Curve c;
    c.kind_ = CurveKind::circle;
    c.center_ = center;
    c.r0_ = radius;
    c.a_ = c.b_ = radius;
    return c;
}

Curve Curve::ellipse(Vec2 center, double a, double b, double angle) {
    if (!(b > 0) || a < b) throw DomainError("ellipse needs a >= b > 0");
    Curve c;
    c.kind_ = CurveKind::ellipse;
    c.center_ = center;
    c.a_ = a;
    c.b_ = b;
    c.angle_ = angle;
    return c;
}

Curve Curve::fourier(Vec2 center, double r0, std::vector<double> cos_coef,
                     std::vector<double> sin_coef) {
    if (!(r0 > 0)) throw DomainError("fourier base radius must be positive");
    Curve c;
    c.kind_ = CurveKind::fourier;
    c.center_ = center;
    c.r0_ = r0;
    c.cos_ = std::move(cos_coef);
    c.sin_ = std::move(sin_coef);
    c.validate();
    return c;
}

void Curve::validate() const {
    for (int k = 0; k < 2048; ++k) {
        double t = two_pi * k / 2048;
        double r, dr, ddr;
        radial(t, r, dr, ddr);
        if (!(r > 0)) throw DomainError("radial function must stay positive");
    }
    double kmin = min_curvature(*this);
    if (!(kmin > 1e-8))
        throw DomainError("curve is not strictly convex (min curvature " + std::to_string(kmin) + ")");
}

void Curve::radial(double t, double& r, double& dr, double& ddr) const {
    r = r0_;
    dr = ddr = 0;
    for (std::size_t i = 0; i < cos_.size(); ++i) {
        double n = double(i + 1);
        r += cos_[i] * std::cos(n * t);
        dr -= n * cos_[i] * std::sin(n * t);
        ddr -= n * n * cos_[i] * std::cos(n * t);
    }
    for (std::size_t i = 0; i < sin_.size(); ++i) {
        double n = double(i + 1);
        r += sin_[i] * std::sin(n * t);
        dr += n * sin_[i] * std::cos(n * t);
        ddr -= n * n * sin_[i] * std::sin(n * t);
    }
}

Vec2 Curve::position(double t) const {
    double c = std::cos(t), s = std::sin(t);
    switch (kind_) {
    case CurveKind::circle: return center_ + r0_ * Vec2(c, s);
    case CurveKind::ellipse: {
        double ca = std::cos(angle_), sa = std::sin(angle_);
        Vec2 p(a_ * c, b_ * s);
        return center_ + Vec2(ca * p.x() - sa * p.y(), sa * p.x() + ca * p.y());
    }
    case CurveKind::fourier: {
        double r, dr, ddr;
        radial(t, r, dr, ddr);
        return center_ + r * Vec2(c, s);
    }
    }
    return center_;
}

Vec2 Curve::tangent(double t) const {
    double c = std::cos(t), s = std::sin(t);
    switch (kind_) {
    case CurveKind::circle: return r0_ * Vec2(-s, c);
    case CurveKind::ellipse: {
        double ca = std::cos(angle_), sa = std::sin(angle_);
        Vec2 p(-a_ * s, b_ * c);
        return Vec2(ca * p.x() - sa * p.y(), sa * p.x() + ca * p.y());
    }
    case CurveKind::fourier: {
        double r, dr, ddr;
        radial(t, r, dr, ddr);
        return dr * Vec2(c, s) + r * Vec2(-s, c);
    }
    }
    return Vec2::Zero();
}

Vec2 Curve::second(double t) const {
    double c = std::cos(t), s = std::sin(t);
    switch (kind_) {
    case CurveKind::circle: return -r0_ * Vec2(c, s);
    case CurveKind::ellipse: {
        double ca = std::cos(angle_), sa = std::sin(angle_);
        Vec2 p(-a_ * c, -b_ * s);
        return Vec2(ca * p.x() - sa * p.y(), sa * p.x() + ca * p.y());
    }
    case CurveKind::fourier: {
        double r, dr, ddr;
        radial(t, r, dr, ddr);
        return (ddr - r) * Vec2(c, s) + 2 * dr * Vec2(-s, c);
    }
    }
    return Vec2::Zero();
}

double Curve::curvature(double t) const {
    Vec2 d1 = tangent(t);
    double sp = d1.norm();
    if (sp < 1e-14) throw DomainError("degenerate parameterization: |x'(t)| vanishes");
    return cross(d1, second(t)) / (sp * sp * sp);
}

bool Curve::contains(const Vec2& x) const {
    Vec2 d = x - center_;
    switch (kind_) {
    case CurveKind::circle: return d.squaredNorm() < r0_ * r0_;
    case CurveKind::ellipse: {
        double ca = std::cos(angle_), sa = std::sin(angle_);
        double u = ca * d.x() + sa * d.y();
        double v = -sa * d.x() + ca * d.y();
        return (u / a_) * (u / a_) + (v / b_) * (v / b_) < 1.0;
    }
    case CurveKind::fourier: {
        double r, dr, ddr;
        radial(std::atan2(d.y(), d.x()), r, dr, ddr);
        return d.norm() < r;
    }
    }
    return false;
}

Curve Curve::translated(const Vec2& shift) const {
    Curve c = *this;
    c.center_ += shift;
    return c;
}

double Curve::diameter() const {
    constexpr int n = 256;
    std::vector<Vec2> pts(n);
    for (int k = 0; k < n; ++k) pts[k] = position(two_pi * k / n);
    double d = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) d = std::max(d, (pts[i] - pts[j]).norm());
    return d;
}

double Curve::support_parameter(const Vec2& dir) const {
    constexpr int n = 2048;
    int best = 0;
    double bv = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        double v = position(two_pi * k / n).dot(dir);
        if (v > bv) { bv = v; best = k; }
    }
    double h = two_pi / n;
    double lo = two_pi * best / n - h, hi = two_pi * best / n + h;
    double t = two_pi * best / n;
    // Newton on x'(t).dir = 0 with bisection safeguard; x'.dir decreases through the max.
    for (int it = 0; it < 100; ++it) {
        double g = tangent(t).dot(dir);
        double dg = second(t).dot(dir);
        if (g > 0) lo = t; else hi = t;
        double tn = (dg < 0) ? t - g / dg : 0.5 * (lo + hi);
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        double step = std::abs(tn - t);
        t = tn;
        if (step < 1e-15) break;
    }
    return wrap(t);
}

double curvature(const Curve& c, double t) { return c.curvature(t); }

double min_curvature(const Curve& c, int samples) {
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) m = std::min(m, c.curvature(two_pi * k / samples));
    return m;
}

namespace {

// Newton on the stationarity system of f(s,t) = |x1(s) - x2(t)|^2 / 2.
bool newton_closest(const Curve& c1, const Curve& c2, double& s, double& t) {
    auto f = [&](double a, double b) { return 0.5 * (c1.position(a) - c2.position(b)).squaredNorm(); };
    for (int it = 0; it < 200; ++it) {
        Vec2 d = c1.position(s) - c2.position(t);
        Vec2 a1 = c1.tangent(s), a2 = c2.tangent(t);
        Vec2 b1 = c1.second(s), b2 = c2.second(t);
        Eigen::Vector2d g(d.dot(a1), -d.dot(a2));
        Eigen::Matrix2d H;
        H << a1.dot(a1) + d.dot(b1), -a1.dot(a2), -a1.dot(a2), a2.dot(a2) - d.dot(b2);
        Eigen::Vector2d step = -H.ldlt().solve(g);
        if (!step.allFinite()) return false;
        double f0 = f(s, t), lam = 1.0;
        while (lam > 1e-6 && f(s + lam * step(0), t + lam * step(1)) > f0 + 1e-300) lam *= 0.5;
        if (lam <= 1e-6) {
            // Stalled at round-off level: accept if the gradient is already tiny.
            return g.norm() < 1e-13 * std::max(1.0, d.norm());
        }
        s += lam * step(0);
        t += lam * step(1);
        if (lam * step.norm() < 1e-12) return true;
    }
    return false;
}

}  // namespace

ClosestPoints closest_points(const Curve& c1, const Curve& c2) {
    constexpr int n = 512;
    std::vector<Vec2> p1(n), p2(n);
    for (int k = 0; k < n; ++k) {
        p1[k] = c1.position(two_pi * k / n);
        p2[k] = c2.position(two_pi * k / n);
    }
    for (int k = 0; k < n; ++k)
        if (c2.contains(p1[k]) || c1.contains(p2[k])) throw DomainError("curves overlap");
    int bi = 0, bj = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double d = (p1[i] - p2[j]).squaredNorm();
            if (d < bd) { bd = d; bi = i; bj = j; }
        }
    double s = two_pi * bi / n, t = two_pi * bj / n;
    bool ok = newton_closest(c1, c2, s, t);
    if (!ok) {
        // Fallback: zoom the seed grid around the best pair and retry.
        double hs = two_pi / n, ht = two_pi / n;
        double s0 = two_pi * bi / n, t0 = two_pi * bj / n;
        for (int level = 0; level < 6 && !ok; ++level) {
            double best = std::numeric_limits<double>::infinity();
            double sb = s0, tb = t0;
            for (int i = -32; i <= 32; ++i)
                for (int j = -32; j <= 32; ++j) {
                    double a = s0 + hs * i / 16, b = t0 + ht * j / 16;
                    double d = (c1.position(a) - c2.position(b)).squaredNorm();
                    if (d < best) { best = d; sb = a; tb = b; }
                }
            s0 = sb; t0 = tb; hs /= 16; ht /= 16;
            s = s0; t = t0;
            ok = newton_closest(c1, c2, s, t);
        }
        if (!ok) throw NumericalError("closest_points: Newton iteration did not converge");
    }
    ClosestPoints cp;
    cp.t1 = wrap(s);
    cp.t2 = wrap(t);
    cp.z1 = c1.position(cp.t1);
    cp.z2 = c2.position(cp.t2);
    cp.eps = (cp.z1 - cp.z2).norm();
    if (!(cp.eps > 0)) throw DomainError("curves touch");
    return cp;
}

double InclusionPair::gap_scale() const { return std::sqrt(2.0 * eps / (kappa1 + kappa2)); }

double InclusionPair::diameter() const {
    constexpr int n = 256;
    std::vector<Vec2> pts;
    pts.reserve(2 * n);
    for (int k = 0; k < n; ++k) {
        pts.push_back(curve1.position(two_pi * k / n));
        pts.push_back(curve2.position(two_pi * k / n));
    }
    double d = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
    return d;
}

InclusionPair place_at_gap(const Curve& shape1, const Curve& shape2, double eps) {
    if (!(eps > 0)) throw DomainError("requested gap must be positive");
    double kmin = std::min(min_curvature(shape1), min_curvature(shape2));
    if (!(kmin > 1e-8)) throw DomainError("shapes must be strictly convex");
    double s1 = shape1.support_parameter(Vec2(1, 0));
    double s2 = shape2.support_parameter(Vec2(-1, 0));
    Vec2 q1 = shape1.position(s1), q2 = shape2.position(s2);
    InclusionPair p{shape1.translated(Vec2(-0.5 * eps, 0) - q1), shape2.translated(Vec2(0.5 * eps, 0) - q2),
                    eps, Vec2(-0.5 * eps, 0), Vec2(0.5 * eps, 0), s1, s2, 0, 0, Vec2::Zero(), Vec2::Zero(), 0, 0};
    p.kappa1 = p.curve1.curvature(s1);
    p.kappa2 = p.curve2.curvature(s2);
    p.r1 = 1.0 / p.kappa1;
    p.r2 = 1.0 / p.kappa2;
    p.c1 = Vec2(-0.5 * eps - p.r1, 0);
    p.c2 = Vec2(0.5 * eps + p.r2, 0);
    return p;
}

std::pair<Curve, Curve> osculating_disks(const InclusionPair& pair) {
    return {Curve::circle(pair.c1, pair.r1), Curve::circle(pair.c2, pair.r2)};
}

}  // namespace npgap
