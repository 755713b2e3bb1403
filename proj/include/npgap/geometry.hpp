#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace npgap {

using Vec2 = Eigen::Vector2d;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

enum class CurveKind { circle, ellipse, fourier };

// Counterclockwise closed curve x(t), t in [0, 2pi).
class Curve {
public:
    Curve() = default;  // unit circle at the origin
    static Curve circle(Vec2 center, double radius);
    // Semi-axes a >= b > 0, rotated by angle (radians) about the center.
    static Curve ellipse(Vec2 center, double a, double b, double angle = 0.0);
    // r(t) = r0 + sum_n cos_coef[n-1] cos(n t) + sin_coef[n-1] sin(n t).
    static Curve fourier(Vec2 center, double r0, std::vector<double> cos_coef,
                         std::vector<double> sin_coef);

    CurveKind kind() const { return kind_; }
    const Vec2& center() const { return center_; }
    double radius() const { return r0_; }
    double semi_a() const { return a_; }
    double semi_b() const { return b_; }
    double angle() const { return angle_; }
    const std::vector<double>& cos_coef() const { return cos_; }
    const std::vector<double>& sin_coef() const { return sin_; }

    Vec2 position(double t) const;
    Vec2 tangent(double t) const;  // dx/dt
    Vec2 second(double t) const;   // d2x/dt2
    double curvature(double t) const;

    // Inside test, exact for the shipped star-shaped classes.
    bool contains(const Vec2& x) const;
    Curve translated(const Vec2& shift) const;
    // Max distance between two curve samples.
    double diameter() const;
    // Parameter of the support point in direction dir (maximizes x(t).dir).
    double support_parameter(const Vec2& dir) const;

private:
    void validate() const;
    // Radial function and derivatives for the fourier kind.
    void radial(double t, double& r, double& dr, double& ddr) const;

    CurveKind kind_ = CurveKind::circle;
    Vec2 center_ = Vec2::Zero();
    double r0_ = 1.0;
    double a_ = 1.0, b_ = 1.0, angle_ = 0.0;
    std::vector<double> cos_, sin_;
};

struct ClosestPoints {
    Vec2 z1, z2;
    double eps;
    double t1, t2;
};

ClosestPoints closest_points(const Curve& c1, const Curve& c2);

struct InclusionPair {
    Curve curve1, curve2;
    double eps;
    Vec2 z1, z2;
    double t1, t2;
    double kappa1, kappa2;
    Vec2 c1, c2;  // osculating disk centers
    double r1, r2;

    // Width of the near-gap structure, sqrt(2 eps / (kappa1 + kappa2)).
    double gap_scale() const;
    double diameter() const;
};

// Translates shape1 so its support point in +x sits at (-eps/2, 0) and shape2 so
// its support point in -x sits at (eps/2, 0). Orientations are kept.
InclusionPair place_at_gap(const Curve& shape1, const Curve& shape2, double eps);

double curvature(const Curve& c, double t);

std::pair<Curve, Curve> osculating_disks(const InclusionPair& pair);

// Minimum curvature over n equispaced samples.
double min_curvature(const Curve& c, int samples = 2048);

}  // namespace npgap
