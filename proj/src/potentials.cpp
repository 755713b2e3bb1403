#include "npgap/potentials.hpp"

#include "npgap/errors.hpp"
#include "npgap/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace npgap {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inv2pi = 1.0 / (2 * pi);
// Trapezoid error for a kernel pole at distance d is about exp(-2 pi d / spacing);
// this factor keeps it near machine precision.
constexpr double oversampling = 8.0;
constexpr double near_zone = 5.0;

enum class Kernel { single, normal_derivative };

int nearest_node(const BoundaryGrid& g, const Vec2& x) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int k = 0; k < g.n; ++k) {
        double d = (g.x[k] - x).squaredNorm();
        if (d < bd) { bd = d; best = k; }
    }
    return best;
}

Eigen::MatrixXd cross_matrix(const BoundaryGrid& target, const BoundaryGrid& source, Kernel kind) {
    const int nt = target.n, ns = source.n;
    Eigen::MatrixXd m(nt, ns);
    std::vector<int> factor(nt, 1);
    for (int i = 0; i < nt; ++i) {
        const Vec2& x = target.x[i];
        int k = nearest_node(source, x);
        double d0 = (source.x[k] - x).norm();
        if (source.curve.contains(x)) throw DomainError("cross block: target node lies inside the source curve");
        if (d0 < 2 * oversampling * source.w[k]) {
            Foot f = foot_point(source, x);
            if (!(f.dist > 0)) throw DomainError("cross block: curves touch");
            factor[i] = upsample_factor(f.spacing, f.dist);
        }
        if (long(factor[i]) * ns > LayerEvaluator::max_points)
            throw NumericalError("cross block: required upsampling exceeds the point cap");
    }
    std::map<int, BoundaryGrid> fine;
    for (int i = 0; i < nt; ++i) {
        int F = factor[i];
        if (F > 1 && !fine.count(F)) fine.emplace(F, refine(source, F));
        const BoundaryGrid& src = F == 1 ? source : fine.at(F);
        const Vec2& x = target.x[i];
        const Vec2& nu = target.normal[i];
        Eigen::VectorXd a(src.n);
        for (int j = 0; j < src.n; ++j) {
            Vec2 r = x - src.x[j];
            double r2 = r.squaredNorm();
            double kv = kind == Kernel::single ? 0.5 * inv2pi * std::log(r2) : inv2pi * r.dot(nu) / r2;
            a[j] = kv * src.w[j];
        }
        m.row(i) = F == 1 ? a : fourier::resample_adjoint(a, ns);
    }
    return m;
}

}  // namespace

DensityPair DensityPair::split(const Eigen::VectorXd& stacked, int n1) {
    return {stacked.head(n1), stacked.tail(stacked.size() - n1)};
}

Eigen::VectorXd DensityPair::stacked() const {
    Eigen::VectorXd v(d1.size() + d2.size());
    v << d1, d2;
    return v;
}

Eigen::Vector2d DensityPair::integrals(const PairGrids& grids) const {
    return {trapezoid_integrate(grids.g1, d1), trapezoid_integrate(grids.g2, d2)};
}

bool DensityPair::mean_zero(const PairGrids& grids, double tol) const {
    Eigen::Vector2d in = integrals(grids);
    return std::abs(in[0]) / grids.g1.perimeter() <= tol && std::abs(in[1]) / grids.g2.perimeter() <= tol;
}

Eigen::Block<const Eigen::MatrixXd> BlockOperator::block(int i, int j) const {
    int r0 = i == 0 ? 0 : n1, c0 = j == 0 ? 0 : n1;
    return m.block(r0, c0, i == 0 ? n1 : n2, j == 0 ? n1 : n2);
}

DensityPair BlockOperator::apply(const DensityPair& p) const {
    return DensityPair::split(m * p.stacked(), n1);
}

Foot foot_point(const BoundaryGrid& grid, const Vec2& x) {
    int k = nearest_node(grid, x);
    double h = grid.h();
    double lo = grid.s[k] - h, hi = grid.s[k] + h, s = grid.s[k];
    CurvePoint cp = evaluate(grid, s);
    for (int it = 0; it < 60; ++it) {
        Vec2 r = cp.x - x;
        double g = r.dot(cp.d1);
        double dg = cp.d1.squaredNorm() + r.dot(cp.d2);
        if (g < 0) lo = s; else hi = s;
        double sn = dg > 0 ? s - g / dg : 0.5 * (lo + hi);
        if (!(sn > lo && sn < hi)) sn = 0.5 * (lo + hi);
        double step = std::abs(sn - s);
        s = sn;
        cp = evaluate(grid, s);
        if (step < 1e-15 * (1 + std::abs(s))) break;
    }
    double sp = cp.d1.norm();
    Vec2 nu(cp.d1.y() / sp, -cp.d1.x() / sp);
    return {s, cp.x, (x - cp.x).dot(nu), h * sp};
}

int upsample_factor(double spacing, double dist) {
    double need = oversampling * spacing / std::max(dist, 1e-300);
    int f = 1;
    while (f < need && f < (1 << 30)) f *= 2;
    return f;
}

double slp_eval(const BoundaryGrid& grid, const Eigen::VectorXd& phi, const Vec2& x) {
    if (phi.size() != grid.n) throw DomainError("slp_eval: density length does not match grid");
    double acc = 0;
    for (int k = 0; k < grid.n; ++k) {
        double r2 = (x - grid.x[k]).squaredNorm();
        if (r2 < near_zone * near_zone * grid.w[k] * grid.w[k])
            throw NearZoneError("slp_eval: point is in the near zone of the boundary; use near_eval");
        acc += std::log(r2) * phi[k] * grid.w[k];
    }
    return 0.5 * inv2pi * acc;
}

Vec2 slp_grad(const BoundaryGrid& grid, const Eigen::VectorXd& phi, const Vec2& x) {
    if (phi.size() != grid.n) throw DomainError("slp_grad: density length does not match grid");
    Vec2 acc = Vec2::Zero();
    for (int k = 0; k < grid.n; ++k) {
        Vec2 r = x - grid.x[k];
        double r2 = r.squaredNorm();
        if (r2 < near_zone * near_zone * grid.w[k] * grid.w[k])
            throw NearZoneError("slp_grad: point is in the near zone of the boundary; use near_grad");
        acc += r * (phi[k] * grid.w[k] / r2);
    }
    return inv2pi * acc;
}

Eigen::MatrixXd slp_matrix_on(const BoundaryGrid& grid, const LogQuadratureRule& rule) {
    if (rule.n != grid.n) throw DomainError("slp_matrix_on: rule size does not match grid");
    const int n = grid.n;
    const double h = grid.h();
    Eigen::MatrixXd m(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double l2;
            if (i == j) {
                l2 = std::log(grid.speed[i] * grid.speed[i]);
            } else {
                double sn = std::sin(0.5 * (grid.s[i] - grid.s[j]));
                l2 = std::log((grid.x[i] - grid.x[j]).squaredNorm() / (4 * sn * sn));
            }
            m(i, j) = inv2pi * (0.5 * rule(i, j) + 0.5 * h * l2) * grid.speed[j];
        }
    }
    return m;
}

Eigen::MatrixXd npstar_self(const BoundaryGrid& grid) {
    const int n = grid.n;
    Eigen::MatrixXd m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (i == j) {
                m(i, i) = 0.5 * inv2pi * grid.kappa[i] * grid.w[i];
            } else {
                Vec2 r = grid.x[i] - grid.x[j];
                m(i, j) = inv2pi * r.dot(grid.normal[i]) / r.squaredNorm() * grid.w[j];
            }
        }
    return m;
}

Eigen::MatrixXd npstar_cross(const BoundaryGrid& target, const BoundaryGrid& source) {
    return cross_matrix(target, source, Kernel::normal_derivative);
}

Eigen::MatrixXd slp_cross(const BoundaryGrid& target, const BoundaryGrid& source) {
    return cross_matrix(target, source, Kernel::single);
}

BlockOperator assemble_K(const PairGrids& grids) {
    const int n1 = grids.n1(), n2 = grids.n2();
    BlockOperator op{Eigen::MatrixXd(n1 + n2, n1 + n2), n1, n2};
    op.m.topLeftCorner(n1, n1) = npstar_self(grids.g1);
    op.m.bottomRightCorner(n2, n2) = npstar_self(grids.g2);
    op.m.topRightCorner(n1, n2) = npstar_cross(grids.g1, grids.g2);
    op.m.bottomLeftCorner(n2, n1) = npstar_cross(grids.g2, grids.g1);
    return op;
}

BlockOperator assemble_S(const PairGrids& grids) {
    const int n1 = grids.n1(), n2 = grids.n2();
    BlockOperator op{Eigen::MatrixXd(n1 + n2, n1 + n2), n1, n2};
    op.m.topLeftCorner(n1, n1) = slp_matrix_on(grids.g1, log_rule(n1));
    op.m.bottomRightCorner(n2, n2) = slp_matrix_on(grids.g2, log_rule(n2));
    op.m.topRightCorner(n1, n2) = slp_cross(grids.g1, grids.g2);
    op.m.bottomLeftCorner(n2, n1) = slp_cross(grids.g2, grids.g1);
    return op;
}

// ---------------------------------------------------------------------------

struct LayerEvaluator::Boundary {
    fourier::Interpolant trace;  // S[phi] on the curve
    fourier::Interpolant kphi;   // K*[phi]
    fourier::Interpolant phi;
};

LayerEvaluator::LayerEvaluator(const BoundaryGrid& grid, Eigen::VectorXd phi) : state_(std::make_shared<State>()) {
    if (phi.size() != grid.n) throw DomainError("LayerEvaluator: density length does not match grid");
    state_->grid = grid;
    state_->phi = std::move(phi);
}

const LayerEvaluator::Level& LayerEvaluator::level(int factor) const {
    std::lock_guard<std::mutex> lock(state_->mutex);
    auto it = state_->levels.find(factor);
    if (it != state_->levels.end()) return *it->second;
    const BoundaryGrid& g = state_->grid;
    auto lv = std::make_shared<Level>(Level{refine(g, factor), fourier::resample(state_->phi, g.n * factor)});
    return *state_->levels.emplace(factor, std::move(lv)).first->second;
}

const LayerEvaluator::Boundary& LayerEvaluator::boundary() const {
    std::lock_guard<std::mutex> lock(state_->mutex);
    if (!state_->boundary) {
        const BoundaryGrid& g = state_->grid;
        Eigen::VectorXd tr = slp_matrix_on(g, log_rule(g.n)) * state_->phi;
        Eigen::VectorXd kp = npstar_self(g) * state_->phi;
        state_->boundary = std::make_shared<Boundary>(
            Boundary{fourier::Interpolant(tr), fourier::Interpolant(kp), fourier::Interpolant(state_->phi)});
    }
    return *state_->boundary;
}

void LayerEvaluator::check_side(const Foot& f, Side side) const {
    double tol = 1e-14 * (1 + f.x.norm());
    if (side == Side::exterior && f.dist < -tol) throw DomainError("near_eval: point lies inside the curve");
    if (side == Side::interior && f.dist > tol) throw DomainError("near_eval: point lies outside the curve");
}

double LayerEvaluator::value_at_level(const Vec2& x, int factor) const {
    const Level& lv = level(factor);
    double acc = 0;
    for (int k = 0; k < lv.grid.n; ++k) acc += std::log((x - lv.grid.x[k]).squaredNorm()) * lv.phi[k] * lv.grid.w[k];
    return 0.5 * inv2pi * acc;
}

double LayerEvaluator::conjugate_value(const Vec2& x, const Vec2& c) const {
    Foot f = foot_point(grid(), x);
    check_side(f, Side::exterior);
    int F = upsample_factor(f.spacing, std::abs(f.dist));
    if (long(F) * grid().n > max_points) throw NumericalError("conjugate_value: point too close to the boundary");
    const Level& lv = level(F);
    std::complex<double> zc(x.x() - c.x(), x.y() - c.y());
    double acc = 0;
    for (int k = 0; k < lv.grid.n; ++k) {
        std::complex<double> zy(x.x() - lv.grid.x[k].x(), x.y() - lv.grid.x[k].y());
        acc += std::arg(zy / zc) * lv.phi[k] * lv.grid.w[k];
    }
    return inv2pi * acc;
}

double LayerEvaluator::value(const Vec2& x, Side side) const {
    Foot f = foot_point(grid(), x);
    check_side(f, side);
    int F = upsample_factor(f.spacing, std::abs(f.dist));
    if (long(F) * grid().n > max_points) return taylor_value(f, side);
    return value_at_level(x, F);
}

Vec2 LayerEvaluator::grad(const Vec2& x, Side side) const {
    Foot f = foot_point(grid(), x);
    check_side(f, side);
    int F = upsample_factor(f.spacing, std::abs(f.dist));
    if (long(F) * grid().n > max_points) return taylor_grad(f, side);
    const Level& lv = level(F);
    Vec2 acc = Vec2::Zero();
    for (int k = 0; k < lv.grid.n; ++k) {
        Vec2 r = x - lv.grid.x[k];
        acc += r * (lv.phi[k] * lv.grid.w[k] / r.squaredNorm());
    }
    return inv2pi * acc;
}

namespace {

// Local frame data of the curve at computational parameter s.
struct Frame {
    Vec2 tau, nu;
    double sp, dsp, kappa;
};

Frame frame_at(const BoundaryGrid& g, double s) {
    CurvePoint cp = evaluate(g, s);
    Frame fr;
    fr.sp = cp.d1.norm();
    fr.dsp = cp.d1.dot(cp.d2) / fr.sp;
    fr.tau = cp.d1 / fr.sp;
    fr.nu = Vec2(fr.tau.y(), -fr.tau.x());
    fr.kappa = cross(cp.d1, cp.d2) / (fr.sp * fr.sp * fr.sp);
    return fr;
}

}  // namespace

// Taylor expansion along the normal from the foot point, using the jump
// relation for the normal derivative and harmonicity for the second one.
double LayerEvaluator::taylor_value(const Foot& f, Side side) const {
    const Boundary& b = boundary();
    Frame fr = frame_at(grid(), f.s);
    double s = f.s - grid().s[0];
    double sign = side == Side::exterior ? 0.5 : -0.5;
    double v = b.trace.value(s), vs = b.trace.deriv(s, 1), vss = b.trace.deriv(s, 2);
    double uss = vss / (fr.sp * fr.sp) - fr.dsp * vs / (fr.sp * fr.sp * fr.sp);
    double un = sign * b.phi.value(s) + b.kphi.value(s);
    double unn = -fr.kappa * un - uss;
    double d = f.dist;
    return v + d * un + 0.5 * d * d * unn;
}

Vec2 LayerEvaluator::taylor_grad(const Foot& f, Side side) const {
    const Boundary& b = boundary();
    Frame fr = frame_at(grid(), f.s);
    double s = f.s - grid().s[0];
    double sign = side == Side::exterior ? 0.5 : -0.5;
    double vs = b.trace.deriv(s, 1), vss = b.trace.deriv(s, 2);
    double us = vs / fr.sp;
    double uss = vss / (fr.sp * fr.sp) - fr.dsp * vs / (fr.sp * fr.sp * fr.sp);
    double un = sign * b.phi.value(s) + b.kphi.value(s);
    double uns = (sign * b.phi.deriv(s, 1) + b.kphi.deriv(s, 1)) / fr.sp;
    double unn = -fr.kappa * un - uss;
    Vec2 g0 = un * fr.nu + us * fr.tau;
    Vec2 g1 = unn * fr.nu + (uns - fr.kappa * us) * fr.tau;
    return g0 + f.dist * g1;
}

PairLayer::PairLayer(const PairGrids& grids, const DensityPair& phi) : e1_(grids.g1, phi.d1), e2_(grids.g2, phi.d2) {}

double PairLayer::value(const Vec2& x) const { return e1_.value(x) + e2_.value(x); }

Vec2 PairLayer::grad(const Vec2& x) const { return e1_.grad(x) + e2_.grad(x); }

}  // namespace npgap
