#pragma once

#include "npgap/harness/sweep.hpp"

#include <functional>
#include <string>
#include <vector>

namespace npgap {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

// "[PASS] 3 title: detail (0.42 s)"
std::string format_line(const CriterionResult& r);

// Runs criteria 1..13 in order; on_result is called as each one finishes.
std::vector<CriterionResult> run_acceptance(unsigned seed = 1,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// Exterior sample points: a quarter packed around the gap, the rest spread over
// a box around both curves, none inside a curve or within margin of it.
std::vector<Vec2> exterior_probes(const InclusionPair& pair, const PairGrids& grids, int count, unsigned seed,
                                  double margin = 1e-4);

// BIE against the image series for two disks and a degree-one background.
struct OracleCheck {
    int probes = 0;
    double u_error = 0;     // max |u - u_oracle| / max |u_oracle|
    double grad_error = 0;  // same for the gradient
    double midpoint_u_error = 0, midpoint_grad_error = 0;
    long max_terms = 0;
};

// Throws DomainError unless both curves are circles and h has degree <= 1.
OracleCheck oracle_check(const Curve& shape1, const Curve& shape2, double eps, const HarmonicBackground& h,
                         int n, int probes, unsigned seed);

// Sweep settings used by the acceptance suite.
ExperimentConfig disk_config(double r1 = 1, double r2 = 1);
ExperimentConfig ellipse_config();

}  // namespace npgap
