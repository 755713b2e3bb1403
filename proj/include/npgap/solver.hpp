#pragma once

#include "npgap/singular.hpp"

#include <vector>

namespace npgap {

// h = constant + sum_m re[m-1] Re z^m + im[m-1] Im z^m, i.e. h = Re F with
// F(z) = constant + sum_m (re - i im) z^m. The conjugate is Im F.
struct HarmonicBackground {
    double constant = 0;
    std::vector<double> re, im;

    static HarmonicBackground x() { return {0, {1}, {}}; }
    static HarmonicBackground y() { return {0, {}, {1}}; }

    double value(const Vec2& p) const;
    Vec2 grad(const Vec2& p) const;
    double conjugate(const Vec2& p) const;
    Vec2 conjugate_grad(const Vec2& p) const;
    // h_perp = Im F as a background of its own.
    HarmonicBackground conjugate_background() const;
    HarmonicBackground operator-(const HarmonicBackground& o) const;
    HarmonicBackground operator*(double s) const;
    bool is_constant() const;

    Eigen::VectorXd trace(const PairGrids& grids) const;
    Eigen::VectorXd normal_trace(const PairGrids& grids) const;
};

// Perfectly conducting solution u = h + S[phi].
struct SolveResult {
    HarmonicBackground h;
    DensityPair phi;
    PairLayer layer;
    Eigen::VectorXd nodal;        // u at the stacked nodes
    double lambda1 = 0, lambda2 = 0;
    double std1 = 0, std2 = 0;
    Eigen::Vector2d flux = Eigen::Vector2d::Zero();
    std::vector<Vec2> boundary_grad;  // exterior gradient at the stacked nodes

    double gap() const { return lambda1 - lambda2; }
    double value(const Vec2& x) const { return h.value(x) + layer.value(x); }
    Vec2 grad(const Vec2& x) const { return h.grad(x) + layer.grad(x); }
};

// check enables the constancy (1e-6 relative) and zero-flux (1e-8) invariants.
SolveResult solve_perfect(const PairGrids& grids, const BlockOperator& K, const BlockOperator& S,
                          const MeanZeroSolver& solver, const HarmonicBackground& h, bool check = true);
SolveResult solve_perfect(const PairGrids& grids, const BlockOperator& K, const BlockOperator& S,
                          const HarmonicBackground& h, bool check = true);

// Exterior gradient at the nodes from nodal values and exterior normal derivatives.
std::vector<Vec2> boundary_gradient(const PairGrids& grids, const Eigen::VectorXd& nodal,
                                    const Eigen::VectorXd& normal_derivative);

double inner_product_hg(const PairGrids& grids, const HarmonicBackground& h, const EigenfunctionG& g);

struct CEpsilon {
    double value = 0;        // (u gap) / (q gap)
    double alternative = 0;  // sum of integrals of h dq/dnu over (q gap)
    double discrepancy = 0;  // relative difference of the two
};

CEpsilon c_epsilon(const PairGrids& grids, const SolveResult& u, const SingularFunctionQ& q);

// b = u - c q.
struct RemainderB {
    SolveResult u;
    SingularFunctionQ q;
    double c = 0;

    double value(const Vec2& x) const { return u.value(x) - c * q.value(x); }
    Vec2 grad(const Vec2& x) const { return u.grad(x) - c * q.grad(x); }
    std::vector<Vec2> boundary_grad(const PairGrids& grids) const;
    // b on curve 1 minus b on curve 2, from weighted means.
    double gap() const;
};

RemainderB decompose_remainder(const SolveResult& u, const SingularFunctionQ& q, double c_eps);

// u = coefficient * alpha * qB + r.
struct LeadingDecomposition {
    double coefficient = 0;  // -sqrt(2) pi <h, g> / sqrt(eps (kappa1 + kappa2))
    double a_eps = 0;        // q gap / qB gap
    double alpha = 0;        // c_eps a_eps / coefficient
    SolveResult u;
    DiskSingular ds;

    double r_value(const Vec2& x) const { return u.value(x) - coefficient * alpha * ds.qB(x); }
    Vec2 r_grad(const Vec2& x) const { return u.grad(x) - coefficient * alpha * ds.qB_grad(x); }
};

LeadingDecomposition decompose_leading(const InclusionPair& pair, const SolveResult& u, const SingularFunctionQ& q,
                          const DiskSingular& ds, double hg, double c_eps);

// Leading coefficient of the disk singular function for a given <h, g>.
double leading_coefficient(const InclusionPair& pair, double hg);

// Insulating solution: the conjugate of the conducting solution for h_perp.
// grad u = (w_y, -w_x) with w the conducting solution for h_perp, and
// u = h - sum_j (1/2pi) int arg((x - y)/(x - c_j)) phi_j(y) dsigma(y).
struct InsulatingResult {
    HarmonicBackground h;
    SolveResult conj;    // conducting solution for h_perp
    Vec2 centers[2];     // interior reference points for the conjugate
    double neumann_residual = 0;  // max |du/dnu| / max |grad u| over the nodes

    double value(const Vec2& x) const;
    Vec2 grad(const Vec2& x) const;
    std::vector<Vec2> boundary_grad() const;
};

InsulatingResult solve_insulating(const PairGrids& grids, const BlockOperator& K, const BlockOperator& S,
                                  const MeanZeroSolver& solver, const HarmonicBackground& h,
                                  const Vec2& c1, const Vec2& c2);

// u = -coefficient * beta * qB_perp + r, coefficient built from <h_perp, g>.
struct InsulatingDecomposition {
    double coefficient = 0;
    double beta = 0;
    InsulatingResult u;
    DiskSingular ds;

    Vec2 r_grad(const Vec2& x) const { return u.grad(x) + coefficient * beta * ds.qB_perp_grad(x); }
};

InsulatingDecomposition decompose_insulating(const InclusionPair& pair, const InsulatingResult& u, const SingularFunctionQ& q,
                          const DiskSingular& ds, double hperp_g, double c_perp);

// Points where gap gradients are sampled: interior of the segment [z1, z2] and
// boundary nodes within a few gap scales of the closest points.
struct GapProbe {
    std::vector<Vec2> segment;
    std::vector<int> nodes;  // stacked node indices
    double radius = 0;
};

GapProbe gap_probe(const InclusionPair& pair, const PairGrids& grids, int segment_samples = 7);

struct GapMax {
    double value = 0;
    Vec2 where = Vec2::Zero();
};

// Max of |grad| over a probe; node gradients are given, segment ones evaluated.
template <class GradFn>
GapMax max_over_probe(const GapProbe& probe, const PairGrids& grids, const std::vector<Vec2>& node_grad, GradFn fn) {
    GapMax m;
    for (const Vec2& x : probe.segment) {
        double v = fn(x).norm();
        if (v > m.value) m = {v, x};
    }
    for (int k : probe.nodes) {
        double v = node_grad[k].norm();
        const Vec2& x = k < grids.n1() ? grids.g1.x[k] : grids.g2.x[k - grids.n1()];
        if (v > m.value) m = {v, x};
    }
    return m;
}

GapMax max_gap_gradient(const SolveResult& u, const InclusionPair& pair, const PairGrids& grids);

}  // namespace npgap
