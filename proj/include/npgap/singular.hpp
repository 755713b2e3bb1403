#pragma once

#include "npgap/spectral.hpp"

namespace npgap {

// q = S[g]: constant on each boundary, fluxes +1 / -1, decaying at infinity.
struct SingularFunctionQ {
    EigenfunctionG g;
    PairLayer layer;
    Eigen::VectorXd nodal;   // q at the stacked nodes
    double q1 = 0, q2 = 0;   // weighted boundary means
    double std1 = 0, std2 = 0;
    Eigen::Vector2d flux = Eigen::Vector2d::Zero();  // integrals of (1/2 + K*) g
    DensityPair normal_derivative;                   // (1/2 + K*) g, exterior trace

    double gap() const { return q1 - q2; }
    double value(const Vec2& x) const { return layer.value(x); }
    Vec2 grad(const Vec2& x) const { return layer.grad(x); }
};

// Throws AccuracyError if constancy (1e-6) or flux (1e-6) is violated and check is set.
SingularFunctionQ build_q(const PairGrids& grids, const BlockOperator& K, const BlockOperator& S,
                          const EigenfunctionG& g, bool check = true);

// Weighted mean and standard deviation of nodal values on one curve.
std::pair<double, double> weighted_mean_std(const BoundaryGrid& grid, const Eigen::VectorXd& v);

// Closed-form singular functions of two disjoint disks.
struct DiskSingular {
    Vec2 c1, c2;
    double r1 = 1, r2 = 1;
    Vec2 p1, p2;  // common inverse points, p_j inside disk j

    double qB(const Vec2& x) const;
    Vec2 qB_grad(const Vec2& x) const;
    // Conjugate-type function; continuous outside both disks.
    double qB_perp(const Vec2& x) const;
    Vec2 qB_perp_grad(const Vec2& x) const;
    // qB on circle 1 minus qB on circle 2.
    double gap() const;
};

std::pair<Vec2, Vec2> disk_fixed_points(const Curve& B1, const Curve& B2);
DiskSingular disk_singular(const Curve& B1, const Curve& B2);
DiskSingular disk_singular(const InclusionPair& pair);

double qB_eval(const DiskSingular& ds, const Vec2& x);
Vec2 qB_grad(const DiskSingular& ds, const Vec2& x);
double qBperp_eval(const DiskSingular& ds, const Vec2& x);

// Reflection in the circle with center c and radius r.
Vec2 reflect(const Vec2& c, double r, const Vec2& x);

// Leading-order predictors in the gap.
double gap_asymptotic_q(const InclusionPair& pair);
double fixed_point_asymptotic(const InclusionPair& pair);  // |p_j| to leading order
double grad_qB_asymptotic(const InclusionPair& pair);      // |grad qB(z_j)| to leading order

struct EnvelopeReport {
    double delta0 = 0;
    double normal_ratio = 0;    // max |dq/dnu| / (sqrt(eps) / (|x - z_j|^2 + eps))
    double far_ratio = 0;       // max over |x - z_j| > delta0 of |dq/dnu| / sqrt(eps)
    double qB_deviation = 0;    // max |qB - qB(z_j)| / (sqrt(eps) |x - z_j|) on dD_j near z_j
    double comparability = 0;   // max |dq/dnu| / |grad qB| on both boundaries
};

EnvelopeReport q_envelopes(const SingularFunctionQ& q, const PairGrids& grids, const InclusionPair& pair);

}  // namespace npgap
