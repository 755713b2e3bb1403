#pragma once

#include "npgap/discretization.hpp"

#include <Eigen/Core>

#include <map>
#include <memory>
#include <mutex>

namespace npgap {

struct DensityPair {
    Eigen::VectorXd d1, d2;

    static DensityPair split(const Eigen::VectorXd& stacked, int n1);
    Eigen::VectorXd stacked() const;
    // Weighted integral of each component.
    Eigen::Vector2d integrals(const PairGrids& grids) const;
    bool mean_zero(const PairGrids& grids, double tol = 1e-10) const;
};

// Dense 2x2 block matrix acting on stacked nodal values, weights folded in.
struct BlockOperator {
    Eigen::MatrixXd m;
    int n1 = 0, n2 = 0;

    Eigen::Block<const Eigen::MatrixXd> block(int i, int j) const;
    DensityPair apply(const DensityPair& p) const;
};

enum class Side { exterior, interior };

// Nearest boundary point of a grid's curve to x.
struct Foot {
    double s;        // computational parameter
    Vec2 x;          // boundary point
    double dist;     // signed, positive outside
    double spacing;  // local node spacing in arclength
};
Foot foot_point(const BoundaryGrid& grid, const Vec2& x);

// Direct trapezoid evaluation; throws NearZoneError within 5 local spacings.
double slp_eval(const BoundaryGrid& grid, const Eigen::VectorXd& phi, const Vec2& x);
Vec2 slp_grad(const BoundaryGrid& grid, const Eigen::VectorXd& phi, const Vec2& x);

// On-boundary single-layer matrix (log product rule plus smooth remainder).
Eigen::MatrixXd slp_matrix_on(const BoundaryGrid& grid, const LogQuadratureRule& rule);
// Adjoint double-layer (Neumann-Poincare) matrix of a curve on itself.
Eigen::MatrixXd npstar_self(const BoundaryGrid& grid);
// Normal derivative on the target of the single layer on the source. Rows whose
// targets are close to the source are integrated on an upsampled source grid.
Eigen::MatrixXd npstar_cross(const BoundaryGrid& target, const BoundaryGrid& source);
// Single layer on the source evaluated at the target nodes, same upsampling.
Eigen::MatrixXd slp_cross(const BoundaryGrid& target, const BoundaryGrid& source);

BlockOperator assemble_K(const PairGrids& grids);
BlockOperator assemble_S(const PairGrids& grids);

// Smallest power of two f with f >= oversampling * spacing / dist.
int upsample_factor(double spacing, double dist);

// Accurate single-layer evaluation of one density anywhere off its curve.
// Upsampled densities are cached per level; the cache is internally locked so
// one evaluator can be shared between threads.
class LayerEvaluator {
public:
    LayerEvaluator(const BoundaryGrid& grid, Eigen::VectorXd phi);

    double value(const Vec2& x, Side side = Side::exterior) const;
    Vec2 grad(const Vec2& x, Side side = Side::exterior) const;
    // (1/2pi) * integral of arg((x - y) / (x - c)) phi(y) dsigma(y) for c inside the
    // curve: the harmonic conjugate of the single layer when phi has zero mean.
    double conjugate_value(const Vec2& x, const Vec2& c) const;
    // Value at a fixed upsampling level (no Taylor fallback); for convergence studies.
    double value_at_level(const Vec2& x, int factor) const;

    const BoundaryGrid& grid() const { return state_->grid; }
    const Eigen::VectorXd& density() const { return state_->phi; }

    static constexpr int max_points = 1 << 18;

private:
    struct Level {
        BoundaryGrid grid;
        Eigen::VectorXd phi;
    };
    struct Boundary;  // on-curve traces for the Taylor fallback
    struct State {
        BoundaryGrid grid;
        Eigen::VectorXd phi;
        std::mutex mutex;
        std::map<int, std::shared_ptr<const Level>> levels;
        std::shared_ptr<const Boundary> boundary;
    };

    const Level& level(int factor) const;
    const Boundary& boundary() const;
    void check_side(const Foot& f, Side side) const;
    double taylor_value(const Foot& f, Side side) const;
    Vec2 taylor_grad(const Foot& f, Side side) const;

    std::shared_ptr<State> state_;
};

// Sum of the single layers of a density pair, evaluated outside both curves.
class PairLayer {
public:
    PairLayer(const PairGrids& grids, const DensityPair& phi);
    double value(const Vec2& x) const;
    Vec2 grad(const Vec2& x) const;
    const LayerEvaluator& part(int j) const { return j == 0 ? e1_ : e2_; }

private:
    LayerEvaluator e1_, e2_;
};

}  // namespace npgap
