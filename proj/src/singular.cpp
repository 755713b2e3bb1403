#include "npgap/singular.hpp"

#include "npgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace npgap {

namespace {

constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

cplx to_c(const Vec2& v) { return {v.x(), v.y()}; }

}  // namespace

std::pair<double, double> weighted_mean_std(const BoundaryGrid& grid, const Eigen::VectorXd& v) {
    double p = grid.perimeter();
    double mean = grid.w.dot(v) / p;
    double var = grid.w.dot((v.array() - mean).square().matrix()) / p;
    return {mean, std::sqrt(std::max(var, 0.0))};
}

SingularFunctionQ build_q(const PairGrids& grids, const BlockOperator& K, const BlockOperator& S,
                          const EigenfunctionG& g, bool check) {
    Eigen::VectorXd gs = g.g.stacked();
    Eigen::VectorXd nodal = S.m * gs;
    Eigen::VectorXd dn = 0.5 * gs + K.m * gs;
    SingularFunctionQ q{g, PairLayer(grids, g.g), nodal, 0, 0, 0, 0, Eigen::Vector2d::Zero(),
                        DensityPair::split(dn, grids.n1())};
    std::tie(q.q1, q.std1) = weighted_mean_std(grids.g1, nodal.head(grids.n1()));
    std::tie(q.q2, q.std2) = weighted_mean_std(grids.g2, nodal.tail(grids.n2()));
    q.flux = q.normal_derivative.integrals(grids);
    if (check) {
        if (std::max(q.std1, q.std2) > 1e-6)
            throw AccuracyError("build_q: q is not constant on the boundaries (std " +
                                std::to_string(std::max(q.std1, q.std2)) + ")");
        if (std::abs(q.flux[0] - 1) > 1e-6 || std::abs(q.flux[1] + 1) > 1e-6)
            throw AccuracyError("build_q: fluxes deviate from (1, -1)");
    }
    return q;
}

Vec2 reflect(const Vec2& c, double r, const Vec2& x) {
    Vec2 d = x - c;
    return c + (r * r / d.squaredNorm()) * d;
}

std::pair<Vec2, Vec2> disk_fixed_points(const Curve& B1, const Curve& B2) {
    if (B1.kind() != CurveKind::circle || B2.kind() != CurveKind::circle)
        throw DomainError("disk_fixed_points: inputs must be circles");
    Vec2 c1 = B1.center(), c2 = B2.center();
    double r1 = B1.radius(), r2 = B2.radius();
    double dist = (c2 - c1).norm();
    double eps = dist - r1 - r2;
    if (!(eps > 0)) throw DomainError("disk_fixed_points: disks overlap");
    Vec2 e = (c2 - c1) / dist;
    Vec2 origin = c1 + (r1 + 0.5 * eps) * e;  // gap midpoint
    // Coordinates along the center line: disk j spans [a_j - r_j, a_j + r_j].
    double a1 = -(r1 + 0.5 * eps), a2 = r2 + 0.5 * eps;
    // p + p' = sum, p p' = prod from (p - a_j)(p' - a_j) = r_j^2. The powers of the
    // origin, a_j^2 - r_j^2 = eps r_j + eps^2 / 4, are formed without cancellation.
    double m1 = eps * r1 + 0.25 * eps * eps, m2 = eps * r2 + 0.25 * eps * eps;
    double sum = (m2 - m1) / (a2 - a1);
    double prod = a1 * sum - m1;
    double disc = std::sqrt(sum * sum - 4 * prod);
    double big = 0.5 * (sum + (sum >= 0 ? disc : -disc));
    double small = prod / big;
    double z1 = std::min(big, small), z2 = std::max(big, small);
    return {origin + z1 * e, origin + z2 * e};
}

DiskSingular disk_singular(const Curve& B1, const Curve& B2) {
    auto [p1, p2] = disk_fixed_points(B1, B2);
    return {B1.center(), B2.center(), B1.radius(), B2.radius(), p1, p2};
}

DiskSingular disk_singular(const InclusionPair& pair) {
    auto [b1, b2] = osculating_disks(pair);
    return disk_singular(b1, b2);
}

double DiskSingular::qB(const Vec2& x) const {
    double d1 = (x - p1).squaredNorm(), d2 = (x - p2).squaredNorm();
    if (d1 == 0 || d2 == 0) throw DomainError("qB: evaluation at a fixed point");
    return std::log(d1 / d2) / (4 * pi);
}

Vec2 DiskSingular::qB_grad(const Vec2& x) const {
    Vec2 a = x - p1, b = x - p2;
    if (a.squaredNorm() == 0 || b.squaredNorm() == 0) throw DomainError("qB: evaluation at a fixed point");
    return (a / a.squaredNorm() - b / b.squaredNorm()) / (2 * pi);
}

double DiskSingular::qB_perp(const Vec2& x) const {
    cplx z = to_c(x);
    if (z == to_c(p1) || z == to_c(p2)) throw DomainError("qB_perp: evaluation at a fixed point");
    // Pairing each fixed point with its disk center confines the cuts to the disks.
    return (std::arg((z - to_c(p1)) / (z - to_c(c1))) - std::arg((z - to_c(p2)) / (z - to_c(c2)))) / (2 * pi);
}

Vec2 DiskSingular::qB_perp_grad(const Vec2& x) const {
    cplx z = to_c(x);
    cplx f = (1.0 / (z - to_c(p1)) - 1.0 / (z - to_c(p2)) - 1.0 / (z - to_c(c1)) + 1.0 / (z - to_c(c2))) / (2 * pi);
    // Gradient of Im F is (Im F', Re F').
    return {f.imag(), f.real()};
}

double DiskSingular::gap() const {
    Vec2 e = (c2 - c1).normalized();
    return qB(c1 + r1 * e) - qB(c2 - r2 * e);
}

double qB_eval(const DiskSingular& ds, const Vec2& x) { return ds.qB(x); }
Vec2 qB_grad(const DiskSingular& ds, const Vec2& x) { return ds.qB_grad(x); }
double qBperp_eval(const DiskSingular& ds, const Vec2& x) { return ds.qB_perp(x); }

double gap_asymptotic_q(const InclusionPair& pair) {
    return -std::sqrt(pair.kappa1 + pair.kappa2) * std::sqrt(pair.eps) / (std::sqrt(2.0) * pi);
}

double fixed_point_asymptotic(const InclusionPair& pair) {
    return std::sqrt(2.0) * std::sqrt(pair.r1 * pair.r2 / (pair.r1 + pair.r2)) * std::sqrt(pair.eps);
}

double grad_qB_asymptotic(const InclusionPair& pair) {
    return std::sqrt(pair.kappa1 + pair.kappa2) / (std::sqrt(2.0) * pi * std::sqrt(pair.eps));
}

EnvelopeReport q_envelopes(const SingularFunctionQ& q, const PairGrids& grids, const InclusionPair& pair) {
    EnvelopeReport rep;
    double d1 = pair.curve1.diameter(), d2 = pair.curve2.diameter();
    rep.delta0 = std::min(0.5, 0.25 * std::min(d1, d2));
    DiskSingular ds = disk_singular(pair);
    double eps = pair.eps, se = std::sqrt(eps);
    double qz[2] = {ds.qB(pair.z1), ds.qB(pair.z2)};
    for (int j = 0; j < 2; ++j) {
        const BoundaryGrid& g = grids[j];
        const Eigen::VectorXd& dn = j == 0 ? q.normal_derivative.d1 : q.normal_derivative.d2;
        const Vec2& z = j == 0 ? pair.z1 : pair.z2;
        for (int k = 0; k < g.n; ++k) {
            double r = (g.x[k] - z).norm();
            double v = std::abs(dn[k]);
            rep.normal_ratio = std::max(rep.normal_ratio, v / (se / (r * r + eps)));
            if (r > rep.delta0) rep.far_ratio = std::max(rep.far_ratio, v / se);
            else if (r > 0) rep.qB_deviation = std::max(rep.qB_deviation, std::abs(ds.qB(g.x[k]) - qz[j]) / (se * r));
            rep.comparability = std::max(rep.comparability, v / ds.qB_grad(g.x[k]).norm());
        }
    }
    return rep;
}

}  // namespace npgap
