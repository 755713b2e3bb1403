#include "npgap/discretization.hpp"

#include "npgap/errors.hpp"
#include "npgap/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace npgap {

namespace {

constexpr double pi = std::numbers::pi;

// Offset into (-pi, pi].
double centered(double u) {
    u = std::remainder(u, 2 * pi);
    return u <= -pi ? u + 2 * pi : u;
}

}  // namespace

double GradedMap::sigma(double t) const {
    if (uniform()) return t;
    double u = t - center;
    double turns = std::floor((u + pi) / (2 * pi));
    double v = u - 2 * pi * turns;  // in [-pi, pi)
    double psi = 2 * std::atan(std::tan(0.5 * v) / k);
    return center + 2 * pi * turns + (1 - f) * v + f * psi;
}

double GradedMap::dsigma(double t) const {
    if (uniform()) return 1.0;
    double u = 0.5 * (t - center);
    double c = std::cos(u), s = std::sin(u);
    return (1 - f) + f * k / (k * k * c * c + s * s);
}

double GradedMap::ddsigma(double t) const {
    if (uniform()) return 0.0;
    double u = 0.5 * (t - center);
    double c = std::cos(u), s = std::sin(u);
    double d = k * k * c * c + s * s;
    double dd = (1 - k * k) * s * c;  // derivative of d in t
    return -f * k * dd / (d * d);
}

double GradedMap::tau(double s, double guess) const {
    if (uniform()) return s;
    double v = centered(s - center);
    // sigma is increasing; solve sigma(center + u) = center + v for u in [-pi, pi].
    double lo = -pi, hi = pi;
    // Good start: invert the dominant clustered part.
    double u = (f > 0.5) ? 2 * std::atan(k * std::tan(0.5 * v)) : v;
    if (!std::isfinite(u)) u = v;
    if (std::isfinite(guess)) {
        double ug = centered(guess - center);
        if (std::abs(ug - v) < pi) u = ug;  // same sheet
    }
    double prev_step = hi - lo;
    for (int it = 0; it < 200; ++it) {
        double g = sigma(center + u) - center - v;
        if (g == 0) break;
        if (g > 0) hi = u; else lo = u;
        double un = u - g / dsigma(center + u);
        // Newton only while it stays bracketed and contracts; bisect otherwise.
        if (!(un > lo && un < hi) || std::abs(un - u) > 0.5 * prev_step) un = 0.5 * (lo + hi);
        prev_step = std::abs(un - u);
        u = un;
        if (prev_step < 1e-15 || hi - lo < 1e-15) break;
    }
    return center + (s - center - v) + u;
}

double BoundaryGrid::h() const { return 2 * pi / n; }

BoundaryGrid discretize(const Curve& curve, int n, const GradedMap& map) {
    return discretize(curve, n, map, {});
}

BoundaryGrid discretize(const Curve& curve, int n, const GradedMap& map, const std::vector<double>& guess) {
    if (n < 16 || n % 2) throw DomainError("discretize: N must be even and at least 16");
    BoundaryGrid g{curve, map, n, {}, {}, {}, {}, {}, {}, {}, Eigen::VectorXd(n)};
    g.s.resize(n);
    g.t.resize(n);
    g.x.resize(n);
    g.normal.resize(n);
    g.dx.resize(n);
    g.speed.resize(n);
    g.kappa.resize(n);
    double h = 2 * pi / n;
    for (int k = 0; k < n; ++k) {
        double s = map.center + h * k;
        double t = guess.empty() ? map.tau(s) : map.tau(s, guess[k]);
        double tp = 1.0 / map.dsigma(t);
        g.s[k] = s;
        g.t[k] = t;
        g.x[k] = curve.position(t);
        Vec2 d1 = curve.tangent(t) * tp;
        g.dx[k] = d1;
        g.speed[k] = d1.norm();
        if (g.speed[k] < 1e-14) throw DomainError("discretize: degenerate parameterization");
        g.normal[k] = Vec2(d1.y(), -d1.x()) / g.speed[k];
        g.kappa[k] = curve.curvature(t);
        g.w[k] = h * g.speed[k];
    }
    return g;
}

CurvePoint evaluate(const BoundaryGrid& grid, double s) {
    const GradedMap& m = grid.map;
    double t = m.tau(s);
    double sp = m.dsigma(t), spp = m.ddsigma(t);
    double tp = 1.0 / sp, tpp = -spp / (sp * sp * sp);
    Vec2 a1 = grid.curve.tangent(t), a2 = grid.curve.second(t);
    return {grid.curve.position(t), a1 * tp, a2 * tp * tp + a1 * tpp};
}

BoundaryGrid refine(const BoundaryGrid& grid, int factor) {
    if (factor < 1) throw DomainError("refine: factor must be positive");
    if (factor == 1) return grid;
    if (grid.map.uniform()) return discretize(grid.curve, grid.n * factor, grid.map);
    // Linear interpolation of the coarse parameters is a close start for Newton.
    const int m = grid.n * factor;
    std::vector<double> guess(m);
    for (int k = 0; k < grid.n; ++k) {
        double t0 = grid.t[k];
        double t1 = k + 1 < grid.n ? grid.t[k + 1] : grid.t[0] + 2 * pi;
        t1 = t0 + centered(t1 - t0);
        if (t1 <= t0) t1 += 2 * pi;
        for (int j = 0; j < factor; ++j) guess[k * factor + j] = t0 + (t1 - t0) * j / factor;
    }
    return discretize(grid.curve, m, grid.map, guess);
}

Eigen::VectorXd PairGrids::weights() const {
    Eigen::VectorXd w(total());
    w << g1.w, g2.w;
    return w;
}

GradedMap gap_map(const InclusionPair& pair, int which) {
    double t = which == 0 ? pair.t1 : pair.t2;
    const Curve& c = which == 0 ? pair.curve1 : pair.curve2;
    double width = pair.gap_scale() / c.tangent(t).norm();
    return {t, std::min(0.5, width), 0.5};
}

PairGrids discretize_pair(const InclusionPair& pair, int n, bool graded) {
    if (!graded) return {discretize(pair.curve1, n), discretize(pair.curve2, n)};
    return {discretize(pair.curve1, n, gap_map(pair, 0)), discretize(pair.curve2, n, gap_map(pair, 1))};
}

int default_resolution(double eps) { return eps >= 1e-4 ? 256 : 512; }

double trapezoid_integrate(const BoundaryGrid& grid, const Eigen::VectorXd& samples) {
    if (samples.size() != grid.n) throw DomainError("trapezoid_integrate: sample count does not match grid");
    return grid.w.dot(samples);
}

LogQuadratureRule log_rule(int n) {
    if (n < 2 || n % 2) throw DomainError("log_rule: N must be even");
    LogQuadratureRule rule{n, Eigen::VectorXd(n)};
    int half = n / 2;
    for (int d = 0; d < n; ++d) {
        double a = 2 * pi * d / n;
        double acc = 0;
        for (int m = 1; m < half; ++m) acc += std::cos(m * a) / m;
        rule.r[d] = -4 * pi / n * acc - 4 * pi / (double(n) * n) * std::cos(half * a);
    }
    return rule;
}

Eigen::MatrixXd LogQuadratureRule::matrix() const {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = (*this)(i, j);
    return m;
}

Eigen::VectorXd arclength_derivative(const BoundaryGrid& grid, const Eigen::VectorXd& v) {
    Eigen::VectorXd d = fourier::derivative(v);
    for (int k = 0; k < grid.n; ++k) d[k] /= grid.speed[k];
    return d;
}

}  // namespace npgap
