#pragma once

#include "npgap/geometry.hpp"

#include <Eigen/Core>

#include <limits>
#include <vector>

namespace npgap {

// Periodic reparameterization t = tau(s) that clusters nodes near t = center.
// s(t) = center + (1 - f) u + f * 2 atan(tan(u / 2) / k), u = t - center.
// Node density near the center grows by about f / k; far from it the spacing
// is at most 1 / (1 - f) times the uniform one. f = 0 is the identity.
struct GradedMap {
    double center = 0.0;
    double k = 1.0;
    double f = 0.0;

    bool uniform() const { return f == 0.0; }
    double sigma(double t) const;
    double dsigma(double t) const;
    double ddsigma(double t) const;
    // guess, if finite, is a nearby value of tau(s) used to start Newton.
    double tau(double s, double guess = std::numeric_limits<double>::quiet_NaN()) const;
};

struct BoundaryGrid {
    Curve curve;
    GradedMap map;
    int n = 0;
    std::vector<double> s;       // computational parameter, s_k = center + 2 pi k / n
    std::vector<double> t;       // curve parameter tau(s_k)
    std::vector<Vec2> x;         // positions
    std::vector<Vec2> normal;    // unit outward normals
    std::vector<Vec2> dx;        // dx/ds
    std::vector<double> speed;   // |dx/ds|
    std::vector<double> kappa;   // curvature
    Eigen::VectorXd w;           // arclength weights 2 pi speed / n

    int size() const { return n; }
    double perimeter() const { return w.sum(); }
    double h() const;            // parameter spacing 2 pi / n
};

BoundaryGrid discretize(const Curve& curve, int n, const GradedMap& map = {});
// Same, with start values for tau at every node.
BoundaryGrid discretize(const Curve& curve, int n, const GradedMap& map, const std::vector<double>& guess);

// Position and s-derivatives at an arbitrary computational parameter.
struct CurvePoint {
    Vec2 x, d1, d2;
};
CurvePoint evaluate(const BoundaryGrid& grid, double s);

// Same curve and map with n * factor nodes; node k of the input is node k * factor.
BoundaryGrid refine(const BoundaryGrid& grid, int factor);

// Two grids seen as one product space; unknowns are stacked (curve 1, curve 2).
struct PairGrids {
    BoundaryGrid g1, g2;

    int n1() const { return g1.n; }
    int n2() const { return g2.n; }
    int total() const { return g1.n + g2.n; }
    const BoundaryGrid& operator[](int j) const { return j == 0 ? g1 : g2; }
    Eigen::VectorXd weights() const;
};

// Graded grids on both curves of a placed pair, clustered at the closest points
// over a width set by the gap scale.
GradedMap gap_map(const InclusionPair& pair, int which);
PairGrids discretize_pair(const InclusionPair& pair, int n, bool graded = true);

// Default nodes per curve for a given gap.
int default_resolution(double eps);

double trapezoid_integrate(const BoundaryGrid& grid, const Eigen::VectorXd& samples);

// Product rule for integrals of ln(4 sin^2((s_i - s)/2)) f(s) over a period:
// sum_j R_{ij} f(s_j). The matrix is circulant, R_{ij} = r[(i - j) mod n].
struct LogQuadratureRule {
    int n = 0;
    Eigen::VectorXd r;

    double operator()(int i, int j) const { return r[((i - j) % n + n) % n]; }
    Eigen::MatrixXd matrix() const;
};

LogQuadratureRule log_rule(int n);

// Tangential derivative d/dsigma (arclength) of nodal values.
Eigen::VectorXd arclength_derivative(const BoundaryGrid& grid, const Eigen::VectorXd& v);

}  // namespace npgap
