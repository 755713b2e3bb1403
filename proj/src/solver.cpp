#include "npgap/solver.hpp"

#include "npgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace npgap {

namespace {

constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

cplx coefficient(const HarmonicBackground& h, std::size_t m) {
    double a = m <= h.re.size() ? h.re[m - 1] : 0.0;
    double b = m <= h.im.size() ? h.im[m - 1] : 0.0;
    return {a, -b};
}

std::size_t degree(const HarmonicBackground& h) { return std::max(h.re.size(), h.im.size()); }

// F and F' at z.
std::pair<cplx, cplx> analytic(const HarmonicBackground& h, const Vec2& p) {
    cplx z(p.x(), p.y()), f = h.constant, df = 0, zm = 1;  // zm = z^(m-1)
    for (std::size_t m = 1; m <= degree(h); ++m) {
        cplx c = coefficient(h, m);
        df += double(m) * c * zm;
        zm *= z;
        f += c * zm;
    }
    return {f, df};
}

}  // namespace

double HarmonicBackground::value(const Vec2& p) const { return analytic(*this, p).first.real(); }

Vec2 HarmonicBackground::grad(const Vec2& p) const {
    cplx d = analytic(*this, p).second;
    return {d.real(), -d.imag()};
}

double HarmonicBackground::conjugate(const Vec2& p) const { return analytic(*this, p).first.imag(); }

Vec2 HarmonicBackground::conjugate_grad(const Vec2& p) const {
    cplx d = analytic(*this, p).second;
    return {d.imag(), d.real()};
}

HarmonicBackground HarmonicBackground::conjugate_background() const {
    // Im((a - i b) z^m) = a Im z^m - b Re z^m.
    HarmonicBackground c;
    std::size_t n = degree(*this);
    c.re.assign(n, 0.0);
    c.im.assign(n, 0.0);
    for (std::size_t m = 1; m <= n; ++m) {
        cplx k = coefficient(*this, m);
        c.re[m - 1] = k.imag();
        c.im[m - 1] = k.real();
    }
    return c;
}

HarmonicBackground HarmonicBackground::operator-(const HarmonicBackground& o) const {
    HarmonicBackground r;
    r.constant = constant - o.constant;
    std::size_t n = std::max(degree(*this), degree(o));
    r.re.assign(n, 0.0);
    r.im.assign(n, 0.0);
    for (std::size_t m = 1; m <= n; ++m) {
        cplx k = coefficient(*this, m) - coefficient(o, m);
        r.re[m - 1] = k.real();
        r.im[m - 1] = -k.imag();
    }
    return r;
}

HarmonicBackground HarmonicBackground::operator*(double s) const {
    HarmonicBackground r = *this;
    r.constant *= s;
    for (double& v : r.re) v *= s;
    for (double& v : r.im) v *= s;
    return r;
}

bool HarmonicBackground::is_constant() const {
    return std::all_of(re.begin(), re.end(), [](double v) { return v == 0; }) &&
           std::all_of(im.begin(), im.end(), [](double v) { return v == 0; });
}

Eigen::VectorXd HarmonicBackground::trace(const PairGrids& grids) const {
    Eigen::VectorXd v(grids.total());
    for (int k = 0; k < grids.n1(); ++k) v[k] = value(grids.g1.x[k]);
    for (int k = 0; k < grids.n2(); ++k) v[grids.n1() + k] = value(grids.g2.x[k]);
    return v;
}

Eigen::VectorXd HarmonicBackground::normal_trace(const PairGrids& grids) const {
    Eigen::VectorXd v(grids.total());
    for (int k = 0; k < grids.n1(); ++k) v[k] = grad(grids.g1.x[k]).dot(grids.g1.normal[k]);
    for (int k = 0; k < grids.n2(); ++k) v[grids.n1() + k] = grad(grids.g2.x[k]).dot(grids.g2.normal[k]);
    return v;
}

std::vector<Vec2> boundary_gradient(const PairGrids& grids, const Eigen::VectorXd& nodal,
                                    const Eigen::VectorXd& normal_derivative) {
    std::vector<Vec2> out(grids.total());
    int off = 0;
    for (int j = 0; j < 2; ++j) {
        const BoundaryGrid& g = grids[j];
        Eigen::VectorXd dt = arclength_derivative(g, nodal.segment(off, g.n));
        for (int k = 0; k < g.n; ++k) {
            const Vec2& nu = g.normal[k];
            Vec2 tau(-nu.y(), nu.x());
            out[off + k] = normal_derivative[off + k] * nu + dt[k] * tau;
        }
        off += g.n;
    }
    return out;
}

SolveResult solve_perfect(const PairGrids& grids, const BlockOperator& K, const BlockOperator& S,
                          const MeanZeroSolver& solver, const HarmonicBackground& h, bool check) {
    Eigen::VectorXd dh = h.normal_trace(grids);
    DensityPair phi = solver.solve(DensityPair::split(dh, grids.n1()));
    Eigen::VectorXd ps = phi.stacked();
    Eigen::VectorXd ht = h.trace(grids);
    Eigen::VectorXd nodal = ht + S.m * ps;
    Eigen::VectorXd dn = dh + 0.5 * ps + K.m * ps;
    SolveResult r{h, phi, PairLayer(grids, phi), nodal, 0, 0, 0, 0, Eigen::Vector2d::Zero(),
                  boundary_gradient(grids, nodal, dn)};
    std::tie(r.lambda1, r.std1) = weighted_mean_std(grids.g1, nodal.head(grids.n1()));
    std::tie(r.lambda2, r.std2) = weighted_mean_std(grids.g2, nodal.tail(grids.n2()));
    r.flux = DensityPair::split(dn, grids.n1()).integrals(grids);
    if (check) {
        double scale = std::max(ht.cwiseAbs().maxCoeff(), 1e-300);
        double dev = std::max(r.std1, r.std2);
        if (dev > 1e-6 * scale)
            throw AccuracyError("solve_perfect: u is not constant on the boundaries (std " + std::to_string(dev) +
                                ", scale " + std::to_string(scale) + ")");
        double fscale = std::max(1.0, dh.cwiseAbs().maxCoeff());
        if (r.flux.cwiseAbs().maxCoeff() > 1e-8 * fscale)
            throw AccuracyError("solve_perfect: boundary fluxes do not vanish");
    }
    return r;
}

SolveResult solve_perfect(const PairGrids& grids, const BlockOperator& K, const BlockOperator& S,
                          const HarmonicBackground& h, bool check) {
    return solve_perfect(grids, K, S, MeanZeroSolver(grids, K), h, check);
}

double inner_product_hg(const PairGrids& grids, const HarmonicBackground& h, const EigenfunctionG& g) {
    return h.trace(grids).dot(grids.weights().cwiseProduct(g.g.stacked()));
}

CEpsilon c_epsilon(const PairGrids& grids, const SolveResult& u, const SingularFunctionQ& q) {
    double qg = q.gap();
    if (std::abs(qg) < 1e-14) throw NumericalError("c_epsilon: degenerate q gap");
    CEpsilon c;
    c.value = u.gap() / qg;
    Eigen::VectorXd dq = q.normal_derivative.stacked();
    c.alternative = u.h.trace(grids).dot(grids.weights().cwiseProduct(dq)) / qg;
    double scale = std::max(std::abs(c.value), std::abs(c.alternative));
    c.discrepancy = scale > 0 ? std::abs(c.value - c.alternative) / scale : 0.0;
    return c;
}

std::vector<Vec2> RemainderB::boundary_grad(const PairGrids& grids) const {
    std::vector<Vec2> out = u.boundary_grad;
    Eigen::VectorXd dq = q.normal_derivative.stacked();
    std::vector<Vec2> gq = boundary_gradient(grids, q.nodal, dq);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= c * gq[k];
    return out;
}

double RemainderB::gap() const { return u.gap() - c * q.gap(); }

RemainderB decompose_remainder(const SolveResult& u, const SingularFunctionQ& q, double c_eps) {
    return {u, q, c_eps};
}

double leading_coefficient(const InclusionPair& pair, double hg) {
    return -std::sqrt(2.0) * pi * hg / std::sqrt(pair.eps * (pair.kappa1 + pair.kappa2));
}

LeadingDecomposition decompose_leading(const InclusionPair& pair, const SolveResult& u, const SingularFunctionQ& q,
                          const DiskSingular& ds, double hg, double c_eps) {
    double coef = leading_coefficient(pair, hg);
    double a = q.gap() / ds.gap();
    return {coef, a, coef != 0 ? c_eps * a / coef : 0.0, u, ds};
}

double InsulatingResult::value(const Vec2& x) const {
    double v = h.value(x);
    for (int j = 0; j < 2; ++j) v -= conj.layer.part(j).conjugate_value(x, centers[j]);
    return v;
}

Vec2 InsulatingResult::grad(const Vec2& x) const {
    Vec2 g = conj.grad(x);
    return {g.y(), -g.x()};
}

std::vector<Vec2> InsulatingResult::boundary_grad() const {
    std::vector<Vec2> out(conj.boundary_grad.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = Vec2(conj.boundary_grad[k].y(), -conj.boundary_grad[k].x());
    return out;
}

InsulatingResult solve_insulating(const PairGrids& grids, const BlockOperator& K, const BlockOperator& S,
                                  const MeanZeroSolver& solver, const HarmonicBackground& h,
                                  const Vec2& c1, const Vec2& c2) {
    InsulatingResult r{h, solve_perfect(grids, K, S, solver, h.conjugate_background()), {c1, c2}, 0};
    std::vector<Vec2> g = r.boundary_grad();
    double gmax = 0, nmax = 0;
    for (int k = 0; k < grids.total(); ++k) {
        const Vec2& nu = k < grids.n1() ? grids.g1.normal[k] : grids.g2.normal[k - grids.n1()];
        gmax = std::max(gmax, g[k].norm());
        nmax = std::max(nmax, std::abs(g[k].dot(nu)));
    }
    r.neumann_residual = gmax > 0 ? nmax / gmax : 0.0;
    return r;
}

InsulatingDecomposition decompose_insulating(const InclusionPair& pair, const InsulatingResult& u, const SingularFunctionQ& q,
                          const DiskSingular& ds, double hperp_g, double c_perp) {
    double coef = leading_coefficient(pair, hperp_g);
    double a = q.gap() / ds.gap();
    return {coef, coef != 0 ? c_perp * a / coef : 0.0, u, ds};
}

GapProbe gap_probe(const InclusionPair& pair, const PairGrids& grids, int segment_samples) {
    GapProbe p;
    for (int j = 1; j <= segment_samples; ++j) {
        double f = double(j) / (segment_samples + 1);
        p.segment.push_back(pair.z1 + f * (pair.z2 - pair.z1));
    }
    p.radius = 3 * pair.gap_scale();
    for (int k = 0; k < grids.n1(); ++k)
        if ((grids.g1.x[k] - pair.z1).norm() <= p.radius) p.nodes.push_back(k);
    for (int k = 0; k < grids.n2(); ++k)
        if ((grids.g2.x[k] - pair.z2).norm() <= p.radius) p.nodes.push_back(grids.n1() + k);
    return p;
}

GapMax max_gap_gradient(const SolveResult& u, const InclusionPair& pair, const PairGrids& grids) {
    GapProbe probe = gap_probe(pair, grids);
    return max_over_probe(probe, grids, u.boundary_grad, [&](const Vec2& x) { return u.grad(x); });
}

}  // namespace npgap
