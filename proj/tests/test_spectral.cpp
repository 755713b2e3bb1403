#include "npgap/errors.hpp"
#include "npgap/spectral.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace npgap;

namespace {

struct Setup {
    InclusionPair pair;
    PairGrids grids;
    BlockOperator K, S;
    Setup(const Curve& a, const Curve& b, double eps, int n)
        : pair(place_at_gap(a, b, eps)), grids(discretize_pair(pair, n)), K(assemble_K(grids)),
          S(assemble_S(grids)) {}
};

Eigen::VectorXd residual(const BlockOperator& K, const DensityPair& p) {
    Eigen::VectorXd v = p.stacked();
    return 0.5 * v - K.m * v;
}

}  // namespace

TEST_CASE("bordered solve on mean-zero data") {
    Setup s(Curve(), Curve::ellipse({0, 0}, 1.5, 1, 0.4), 0.05, 256);
    MeanZeroSolver solver(s.grids, s.K);
    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    Eigen::VectorXd f(s.grids.total());
    for (auto& v : f) v = nd(rng);
    Eigen::VectorXd w = s.grids.weights();
    // Range of (1/2 - K*) is the mean-zero space on each curve.
    DensityPair rhs = DensityPair::split(f, s.grids.n1());
    rhs.d1.array() -= s.grids.g1.w.dot(rhs.d1) / s.grids.g1.perimeter();
    rhs.d2.array() -= s.grids.g2.w.dot(rhs.d2) / s.grids.g2.perimeter();
    DensityPair psi = solver.solve(rhs);
    CHECK((residual(s.K, psi) - rhs.stacked()).cwiseAbs().maxCoeff() < 1e-9 * rhs.stacked().cwiseAbs().maxCoeff());
    CHECK(std::abs(w.dot(psi.stacked())) < 1e-10);
    CHECK(solver.multipliers().cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("phi and g on identical disks") {
    Setup s(Curve(), Curve(), 0.01, 256);
    EigenfunctionG eg = eigenfunction_g(s.grids, s.K);
    const PhiPair& ph = eg.phi;
    CHECK(ph.residual < 1e-9);
    CHECK(eg.residual < 1e-9);
    CHECK(ph.moments(0, 0) == doctest::Approx(2 * M_PI).epsilon(1e-8));
    CHECK(ph.moments(1, 1) == doctest::Approx(2 * M_PI).epsilon(1e-8));
    CHECK(std::abs(ph.moments(0, 1)) < 1e-8);
    CHECK(std::abs(ph.moments(1, 0)) < 1e-8);
    // Half-turn symmetry: phi_1 on curve 1 matches phi_2 on curve 2, g flips sign.
    CHECK((ph.phi1.d1 - ph.phi2.d2).cwiseAbs().maxCoeff() < 1e-9 * ph.phi1.d1.cwiseAbs().maxCoeff());
    CHECK((eg.g.d1 + eg.g.d2).cwiseAbs().maxCoeff() < 1e-9 * eg.g.d1.cwiseAbs().maxCoeff());
    CHECK(eg.flux[0] == doctest::Approx(-eg.flux[1]).epsilon(1e-10));
    CHECK(eg.flux[0] == doctest::Approx(1).epsilon(1e-8));
    // g concentrates at the gap.
    CHECK(std::abs(eg.g.d1[0]) == doctest::Approx(eg.g.d1.cwiseAbs().maxCoeff()).epsilon(1e-3));
}

TEST_CASE("phi and g on an unequal pair") {
    Setup s(Curve::ellipse({0, 0}, 2, 1, 0.3), Curve::fourier({0, 0}, 1, {0.1, 0.05}, {0, 0.05}), 0.02, 256);
    EigenfunctionG eg = eigenfunction_g(s.grids, s.K);
    CHECK(eg.phi.residual < 1e-8);
    CHECK(eg.residual < 1e-8);
    CHECK(eg.phi.moments(0, 0) == doctest::Approx(s.grids.g1.perimeter()).epsilon(1e-8));
    CHECK(eg.phi.moments(1, 1) == doctest::Approx(s.grids.g2.perimeter()).epsilon(1e-8));
    CHECK(eg.flux[0] == doctest::Approx(1).epsilon(1e-8));
    CHECK(std::abs(s.grids.weights().dot(eg.g.stacked())) < 1e-9);
    CHECK(eg.flux[0] == doctest::Approx(-eg.flux[1]).epsilon(1e-9));
}

TEST_CASE("spectrum of the discrete operator") {
    for (double eps : {0.1, 0.001}) {
        Setup s(Curve(), Curve::circle({0, 0}, 0.5), eps, 128);
        SpectrumReport r = spectrum(s.grids, s.K, s.S);
        CHECK(r.eigenvalues.size() == 256);
        CHECK(r.multiplicity == 2);
        CHECK(r.contained);
        CHECK(r.gap_below_half > 1e-3);
        CHECK(r.min_eig_minus_s > 0);
        CHECK(multiplicity_near_half(s.K) == 2);
        for (std::size_t i = 1; i < r.eigenvalues.size(); ++i)
            CHECK(r.eigenvalues[i - 1].real() >= r.eigenvalues[i].real());
    }
    // Far apart, each disk alone has the spectrum {1/2, 0, 0, ...}.
    Setup far(Curve(), Curve(), 50, 64);
    SpectrumReport r = spectrum(far.grids, far.K, far.S);
    CHECK(r.multiplicity == 2);
    for (std::size_t i = 2; i < r.eigenvalues.size(); ++i) CHECK(std::abs(r.eigenvalues[i]) < 1e-3);
}
