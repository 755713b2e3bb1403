#include "npgap/spectral.hpp"

#include "npgap/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

namespace npgap {

namespace {

Eigen::MatrixXd half_minus(const BlockOperator& K) {
    Eigen::MatrixXd a = -K.m;
    a.diagonal().array() += 0.5;
    return a;
}

DensityPair indicator(const PairGrids& grids, int j) {
    DensityPair d{Eigen::VectorXd::Zero(grids.n1()), Eigen::VectorXd::Zero(grids.n2())};
    (j == 0 ? d.d1 : d.d2).setOnes();
    return d;
}

double relative_residual(const BlockOperator& K, const DensityPair& p) {
    Eigen::VectorXd v = p.stacked();
    Eigen::VectorXd r = 0.5 * v - K.m * v;
    double scale = v.lpNorm<Eigen::Infinity>();
    return scale > 0 ? r.lpNorm<Eigen::Infinity>() / scale : r.lpNorm<Eigen::Infinity>();
}

}  // namespace

MeanZeroSolver::MeanZeroSolver(const PairGrids& grids, const BlockOperator& K)
    : grids_(&grids), n1_(grids.n1()), n_(grids.total()) {
    if (K.m.rows() != n_ || K.m.cols() != n_) throw DomainError("MeanZeroSolver: operator size does not match grids");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_ + 2, n_ + 2);
    a.topLeftCorner(n_, n_) = half_minus(K);
    a.block(0, n_, n1_, 1).setOnes();
    a.block(n1_, n_ + 1, n_ - n1_, 1).setOnes();
    a.block(n_, 0, 1, n1_) = grids.g1.w.transpose() / grids.g1.perimeter();
    a.block(n_ + 1, n1_, 1, n_ - n1_) = grids.g2.w.transpose() / grids.g2.perimeter();
    lu_.compute(a);
    double rc = lu_.rcond();
    if (!(rc > 1e-14)) throw NumericalError("MeanZeroSolver: bordered system is singular (assembly fault)");
}

DensityPair MeanZeroSolver::solve(const DensityPair& rhs_in) const {
    DensityPair rhs = rhs_in;
    Eigen::Vector2d in = rhs.integrals(*grids_);
    double p1 = grids_->g1.perimeter(), p2 = grids_->g2.perimeter();
    double scale = std::max(1.0, rhs.stacked().lpNorm<Eigen::Infinity>());
    if (std::abs(in[0]) / p1 > 1e-10 * scale || std::abs(in[1]) / p2 > 1e-10 * scale)
        std::clog << "warning: right-hand side is not mean-zero (" << in[0] / p1 << ", " << in[1] / p2
                  << "); projecting\n";
    rhs.d1.array() -= in[0] / p1;
    rhs.d2.array() -= in[1] / p2;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n_ + 2);
    b.head(n_) = rhs.stacked();
    Eigen::VectorXd x = lu_.solve(b);
    mu_ = x.tail(2);
    return DensityPair::split(x.head(n_), n1_);
}

DensityPair solve_mean_zero(const PairGrids& grids, const BlockOperator& K, const DensityPair& rhs) {
    return MeanZeroSolver(grids, K).solve(rhs);
}

PhiPair build_phi(const PairGrids& grids, const BlockOperator& K, const MeanZeroSolver& solver) {
    PhiPair out;
    for (int i = 0; i < 2; ++i) {
        DensityPair delta = indicator(grids, i);
        Eigen::VectorXd d = delta.stacked();
        // Normal derivative of S_{D_i}[1] from inside on curve i and across on the other curve.
        DensityPair rhs = DensityPair::split(K.m * d - 0.5 * d, grids.n1());
        DensityPair psi = solver.solve(rhs);
        DensityPair phi{psi.d1 + delta.d1, psi.d2 + delta.d2};
        Eigen::Vector2d mom = phi.integrals(grids);
        out.moments.col(i) = mom;
        out.residual = std::max(out.residual, relative_residual(K, phi));
        (i == 0 ? out.psi1 : out.psi2) = psi;
        (i == 0 ? out.phi1 : out.phi2) = phi;
    }
    if (!(out.residual <= 1e-6))
        throw AccuracyError("build_phi: eigen-residual " + std::to_string(out.residual) + " exceeds 1e-6");
    return out;
}

EigenfunctionG build_g(const PairGrids& grids, const BlockOperator& K, const PhiPair& phi) {
    EigenfunctionG e;
    e.perimeter1 = grids.g1.perimeter();
    e.perimeter2 = grids.g2.perimeter();
    e.g.d1 = phi.phi1.d1 / e.perimeter1 - phi.phi2.d1 / e.perimeter2;
    e.g.d2 = phi.phi1.d2 / e.perimeter1 - phi.phi2.d2 / e.perimeter2;
    e.phi = phi;
    e.flux = e.g.integrals(grids);
    e.residual = relative_residual(K, e.g);
    return e;
}

EigenfunctionG eigenfunction_g(const PairGrids& grids, const BlockOperator& K) {
    MeanZeroSolver solver(grids, K);
    return build_g(grids, K, build_phi(grids, K, solver));
}

SpectrumReport spectrum(const PairGrids& grids, const BlockOperator& K, const BlockOperator& S, double tol) {
    const int n = grids.total();
    SpectrumReport rep;
    rep.tolerance = tol;

    Eigen::MatrixXd a = K.m;
    std::vector<double> wr(n), wi(n);
    lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(), wi.data(), nullptr, 1,
                                    nullptr, 1);
    if (info != 0) throw NumericalError("spectrum: dgeev failed with info " + std::to_string(info));
    rep.eigenvalues.resize(n);
    for (int i = 0; i < n; ++i) rep.eigenvalues[i] = {wr[i], wi[i]};
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
              [](auto x, auto y) { return x.real() > y.real(); });
    rep.max_real = rep.eigenvalues.front().real();
    rep.min_real = rep.eigenvalues.back().real();
    rep.gap_below_half = 0.5 - rep.min_real;
    for (auto& z : rep.eigenvalues) {
        rep.max_imag = std::max(rep.max_imag, std::abs(z.imag()));
        if (std::abs(z - 0.5) <= tol) ++rep.multiplicity;
        else rep.gap_below_half = std::min(rep.gap_below_half, 0.5 - z.real());
    }
    rep.contained = rep.max_real <= 0.5 + tol && rep.min_real > -0.5 - tol;

    // Plemelj symmetrization: W S K is symmetric when S K* = K S.
    Eigen::VectorXd w = grids.weights();
    Eigen::MatrixXd wsk = w.asDiagonal() * (S.m * K.m);
    rep.symmetrization_residual = (wsk - wsk.transpose()).norm() / wsk.norm();

    // Positivity of -S after shrinking the configuration to diameter <= 1.
    double diam = std::max({grids.g1.curve.diameter(), grids.g2.curve.diameter(),
                            [&] {
                                double d = 0;
                                for (int i = 0; i < grids.n1(); i += 4)
                                    for (int j = 0; j < grids.n2(); j += 4)
                                        d = std::max(d, (grids.g1.x[i] - grids.g2.x[j]).norm());
                                return d;
                            }()});
    double lam = diam > 1 ? 1.0 / diam : 1.0;
    rep.rescale = lam;
    Eigen::MatrixXd sl = lam * S.m;
    sl += (lam * std::log(lam) / (2 * std::numbers::pi)) * Eigen::VectorXd::Ones(n) * w.transpose();
    Eigen::VectorXd rw = (lam * w).cwiseSqrt();
    Eigen::MatrixXd b = -(rw.asDiagonal() * sl * rw.cwiseInverse().asDiagonal());
    Eigen::MatrixXd bs = 0.5 * (b + b.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bs, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("spectrum: symmetric eigensolver failed");
    rep.min_eig_minus_s = es.eigenvalues().minCoeff();
    return rep;
}

int multiplicity_near_half(const BlockOperator& K, double tol, int subspace) {
    const int n = int(K.m.rows());
    const double shift = 0.5 + 1e-3;
    Eigen::MatrixXd a = K.m;
    a.diagonal().array() -= shift;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    // Deterministic start block.
    Eigen::MatrixXd q(n, subspace);
    for (int j = 0; j < subspace; ++j)
        for (int i = 0; i < n; ++i) q(i, j) = std::cos(0.37 * (i + 1) * (j + 1) + 0.11 * j);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(n, subspace);
    Eigen::VectorXcd prev = Eigen::VectorXcd::Zero(subspace);
    Eigen::VectorXcd ritz;
    for (int it = 0; it < 60; ++it) {
        Eigen::MatrixXd z = lu.solve(q);
        qr.compute(z);
        q = qr.householderQ() * Eigen::MatrixXd::Identity(n, subspace);
        Eigen::MatrixXd h = q.transpose() * K.m * q;
        Eigen::EigenSolver<Eigen::MatrixXd> es(h, false);
        ritz = es.eigenvalues();
        std::sort(ritz.data(), ritz.data() + subspace, [](auto x, auto y) { return x.real() > y.real(); });
        if (it > 2 && (ritz - prev).cwiseAbs().maxCoeff() < 1e-13) break;
        prev = ritz;
    }
    int count = 0;
    for (int j = 0; j < subspace; ++j)
        if (std::abs(ritz[j] - 0.5) <= tol) ++count;
    return count;
}

}  // namespace npgap
