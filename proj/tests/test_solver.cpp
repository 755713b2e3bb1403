#include "npgap/errors.hpp"
#include "npgap/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace npgap;
using cplx = std::complex<double>;

namespace {

struct Setup {
    InclusionPair pair;
    PairGrids grids;
    BlockOperator K, S;
    MeanZeroSolver solver;
    Setup(const Curve& a, const Curve& b, double eps, int n)
        : pair(place_at_gap(a, b, eps)), grids(discretize_pair(pair, n)), K(assemble_K(grids)),
          S(assemble_S(grids)), solver(grids, K) {}
};

Vec2 grad_of(cplx fprime) { return {fprime.real(), -fprime.imag()}; }

}  // namespace

TEST_CASE("harmonic background") {
    HarmonicBackground h{0.5, {1, 0, 2}, {0, -1}};  // 0.5 + x - 2 xy + 2 Re z^3
    Vec2 p(0.3, -0.7);
    double x = p.x(), y = p.y();
    CHECK(h.value(p) == doctest::Approx(0.5 + x - 2 * x * y + 2 * (x * x * x - 3 * x * y * y)).epsilon(1e-14));
    double d = 1e-6;
    Vec2 fd((h.value(p + Vec2(d, 0)) - h.value(p - Vec2(d, 0))) / (2 * d),
            (h.value(p + Vec2(0, d)) - h.value(p - Vec2(0, d))) / (2 * d));
    CHECK((h.grad(p) - fd).norm() < 1e-8);
    // Cauchy-Riemann with the conjugate.
    Vec2 cg = h.conjugate_grad(p), g = h.grad(p);
    CHECK(cg.x() == doctest::Approx(-g.y()).epsilon(1e-13));
    CHECK(cg.y() == doctest::Approx(g.x()).epsilon(1e-13));
    CHECK(h.conjugate_background().value(p) == doctest::Approx(h.conjugate(p) - h.conjugate({0, 0})).epsilon(1e-13));
    CHECK(HarmonicBackground{3, {}, {}}.is_constant());
    CHECK_FALSE(HarmonicBackground::y().is_constant());
    CHECK((h - h * 1.0).value(p) == doctest::Approx(0));
}

TEST_CASE("constant background leaves the field unchanged") {
    Setup s(Curve(), Curve::circle({0, 0}, 0.5), 0.05, 128);
    SolveResult u = solve_perfect(s.grids, s.K, s.S, s.solver, HarmonicBackground{2.0, {}, {}});
    CHECK(u.phi.stacked().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(u.lambda1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(u.gap()) < 1e-12);
}

TEST_CASE("conducting solution on identical disks") {
    Setup s(Curve(), Curve(), 0.01, 256);
    SolveResult u = solve_perfect(s.grids, s.K, s.S, s.solver, HarmonicBackground::x());
    CHECK(u.lambda1 == doctest::Approx(-u.lambda2).epsilon(1e-10));
    CHECK(u.std1 < 1e-8 * std::abs(u.lambda1));
    CHECK(u.flux.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(u.value({0, 0})) < 1e-10);
    CHECK(std::abs(u.value({0.5, 2}) + u.value({-0.5, -2})) < 1e-10);
    // The perturbation decays at infinity.
    CHECK(std::abs(u.value({1e4, 3}) - 1e4) < 1e-3);

    EigenfunctionG g = eigenfunction_g(s.grids, s.K);
    CHECK(std::abs(inner_product_hg(s.grids, HarmonicBackground::y(), g)) < 1e-12);
    CHECK(std::abs(inner_product_hg(s.grids, HarmonicBackground::x(), g)) > 0.1);

    SolveResult uy = solve_perfect(s.grids, s.K, s.S, s.solver, HarmonicBackground::y());
    CHECK(std::abs(uy.gap()) < 1e-10);

    // Linearity.
    HarmonicBackground mix{0, {2}, {-1}};
    SolveResult um = solve_perfect(s.grids, s.K, s.S, s.solver, mix);
    CHECK((um.phi.stacked() - 2 * u.phi.stacked() + uy.phi.stacked()).cwiseAbs().maxCoeff() <
          1e-9 * u.phi.stacked().cwiseAbs().maxCoeff());
}

TEST_CASE("distant disks behave like isolated ones") {
    // Field of one conducting unit disk in h = x: Re(w - 1/w), w = z - c.
    Setup s(Curve(), Curve(), 40, 128);
    SolveResult u = solve_perfect(s.grids, s.K, s.S, s.solver, HarmonicBackground::x());
    InsulatingResult v = solve_insulating(s.grids, s.K, s.S, s.solver, HarmonicBackground::x(), s.pair.c1, s.pair.c2);
    for (Vec2 off : {Vec2(0, 1.5), Vec2(-2, 0.5), Vec2(0.7, -0.9)}) {
        cplx w(off.x(), off.y());
        Vec2 x = s.pair.c1 + off;
        CHECK((u.grad(x) - grad_of(1.0 + 1.0 / (w * w))).norm() < 5e-3);
        CHECK((v.grad(x) - grad_of(1.0 - 1.0 / (w * w))).norm() < 5e-3);
    }
}

TEST_CASE("insulating solution") {
    Setup s(Curve::ellipse({0, 0}, 2, 1, 0.3), Curve(), 0.01, 256);
    InsulatingResult u = solve_insulating(s.grids, s.K, s.S, s.solver, HarmonicBackground::y(), s.pair.c1, s.pair.c2);
    CHECK(u.neumann_residual < 1e-9);
    auto bg = u.boundary_grad();
    for (int k = 0; k < s.grids.n1(); k += 9) CHECK(std::abs(bg[k].dot(s.grids.g1.normal[k])) < 1e-8 * bg[k].norm() + 1e-9);
    // Values and gradients agree.
    Vec2 x(0.2, 0.9);
    double d = 1e-5;
    Vec2 fd((u.value(x + Vec2(d, 0)) - u.value(x - Vec2(d, 0))) / (2 * d),
            (u.value(x + Vec2(0, d)) - u.value(x - Vec2(0, d))) / (2 * d));
    CHECK((u.grad(x) - fd).norm() < 1e-7 * u.grad(x).norm());
}

TEST_CASE("decompositions") {
    Setup s(Curve(), Curve(), 1e-3, 256);
    SolveResult u = solve_perfect(s.grids, s.K, s.S, s.solver, HarmonicBackground::x());
    EigenfunctionG g = eigenfunction_g(s.grids, s.K);
    SingularFunctionQ q = build_q(s.grids, s.K, s.S, g);
    CEpsilon c = c_epsilon(s.grids, u, q);
    CHECK(c.discrepancy < 1e-8);
    CHECK(c.value == doctest::Approx(u.gap() / q.gap()).epsilon(1e-14));
    RemainderB b = decompose_remainder(u, q, c.value);
    CHECK(std::abs(b.gap()) < 1e-10 * std::abs(u.gap()));
    double hg = inner_product_hg(s.grids, HarmonicBackground::x(), g);
    DiskSingular ds = disk_singular(s.pair);
    LeadingDecomposition t = decompose_leading(s.pair, u, q, ds, hg, c.value);
    CHECK(t.a_eps == doctest::Approx(1).epsilon(1e-8));
    CHECK(std::abs(t.alpha - 1) < 0.2);
    Vec2 m = 0.5 * (s.pair.z1 + s.pair.z2);
    CHECK(t.r_grad(m).norm() < 0.05 * u.grad(m).norm());

    GapMax gm = max_gap_gradient(u, s.pair, s.grids);
    CHECK(gm.value >= u.grad(m).norm());
    CHECK(gm.where.norm() < 3 * s.pair.gap_scale());
    GapProbe probe = gap_probe(s.pair, s.grids);
    CHECK(probe.segment.size() == 7);
    CHECK(!probe.nodes.empty());
    for (const Vec2& x : probe.segment) CHECK(std::abs(x.y()) < 1e-15);
}
