#pragma once

#include "npgap/potentials.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace npgap {

// Solves (1/2 I - K*) psi = rhs on mean-zero densities through the bordered system
//   [1/2 I - K*   E] [psi]   [rhs]
//   [ W^T / |dD|  0] [mu ] = [ 0 ]
// where E holds the two boundary indicators. Factorized once, reused per rhs.
class MeanZeroSolver {
public:
    MeanZeroSolver(const PairGrids& grids, const BlockOperator& K);
    DensityPair solve(const DensityPair& rhs) const;
    // Multipliers of the last solve; they vanish for consistent data.
    const Eigen::Vector2d& multipliers() const { return mu_; }

private:
    const PairGrids* grids_;
    int n1_, n_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    mutable Eigen::Vector2d mu_ = Eigen::Vector2d::Zero();
};

DensityPair solve_mean_zero(const PairGrids& grids, const BlockOperator& K, const DensityPair& rhs);

struct PhiPair {
    DensityPair psi1, psi2;  // mean-zero corrections
    DensityPair phi1, phi2;  // psi_i plus the indicator of curve i
    Eigen::Matrix2d moments; // moments(i, j) = integral over curve i of phi_j
    double residual = 0;     // max_i ||(1/2 - K*) phi_i||_inf / ||phi_i||_inf
};

PhiPair build_phi(const PairGrids& grids, const BlockOperator& K, const MeanZeroSolver& solver);

struct EigenfunctionG {
    DensityPair g;
    PhiPair phi;
    double perimeter1 = 0, perimeter2 = 0;
    Eigen::Vector2d flux = Eigen::Vector2d::Zero();  // integrals of g over each curve
    double residual = 0;                             // ||(1/2 - K*) g||_inf / ||g||_inf
};

EigenfunctionG build_g(const PairGrids& grids, const BlockOperator& K, const PhiPair& phi);

// Convenience: factorize, build phi and g in one call.
EigenfunctionG eigenfunction_g(const PairGrids& grids, const BlockOperator& K);

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;  // sorted by real part, descending
    double tolerance = 1e-6;
    int multiplicity = 0;       // eigenvalues within tolerance of 1/2
    bool contained = false;     // all real parts in (-1/2 - tol, 1/2 + tol]
    double max_real = 0, min_real = 0, max_imag = 0;
    double gap_below_half = 0;  // 1/2 minus the largest eigenvalue outside the cluster
    double symmetrization_residual = 0;  // ||W S K - (W S K)^T|| / ||W S K||
    double min_eig_minus_s = 0;          // smallest eigenvalue of -W^{1/2} S W^{1/2}, diameter <= 1
    double rescale = 1;                  // factor applied before the positivity check
};

// Full eigenvalue decomposition of the discrete K* (LAPACK dgeev).
SpectrumReport spectrum(const PairGrids& grids, const BlockOperator& K, const BlockOperator& S,
                        double tol = 1e-6);

// Number of eigenvalues within tol of 1/2, via shift-invert subspace iteration.
// Cheap enough to run on every sweep row.
int multiplicity_near_half(const BlockOperator& K, double tol = 1e-6, int subspace = 5);

}  // namespace npgap
