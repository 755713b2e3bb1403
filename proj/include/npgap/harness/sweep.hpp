#pragma once

#include "npgap/harness/config.hpp"

#include <string>
#include <vector>

namespace npgap {

// One epsilon of a sweep. For the insulating problem hg holds <h_perp, g>,
// alpha_eps holds beta and u_gap, c_eps, max_grad_b refer to the conducting
// solution for h_perp.
struct SweepRow {
    double eps = 0;
    double n = 0;  // nodes per curve
    double q_gap = 0;
    double q_gap_predicted = 0;
    double qb_gap = 0;
    double u_gap = 0;
    double hg = 0;
    double c_eps = 0;
    double c_eps_discrepancy = 0;
    double a_eps = 0;
    double alpha_eps = 0;
    double max_grad_u = 0;
    double predicted_grad_u = 0;
    double max_grad_b = 0;
    double max_grad_r = 0;
    double max_grad_v = 0;
    // Sups over every boundary node plus the gap segment.
    double sup_grad_u = 0;
    double sup_grad_b = 0;
    double sup_grad_r = 0;
    double sup_grad_v = 0;
    double multiplicity = 0;
    double eigen_residual = 0;
    double constancy_dev = 0;
    double flux_error = 0;
    double neumann_residual = 0;  // insulating only, 0 otherwise
};

struct SweepColumn {
    const char* name;
    double SweepRow::*field;
};

const std::vector<SweepColumn>& sweep_columns();
// Throws ConfigError for an unknown name.
double column_value(const SweepRow& row, const std::string& name);

struct RowFailure {
    double eps;
    std::string kind;  // accuracy | numerical | domain | other
    std::string message;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // eps descending
    std::vector<RowFailure> failures;
};

// Full pipeline for one epsilon; throws on any module error.
SweepRow compute_row(const ExperimentConfig& config, double eps, int n_override = 0);

// Failed rows are recorded and skipped.
SweepResult run_sweep(const ExperimentConfig& config, int n_override = 0);

struct RateFit {
    double slope = 0, intercept = 0, r2 = 0;
    int points = 0;
};

// Least squares on (ln x, ln |y|). Needs at least 3 points; throws DomainError
// for non-positive x or zero y.
RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y);
RateFit fit_rate(const std::vector<SweepRow>& rows, const std::string& xcol, const std::string& ycol,
                 bool exclude_largest = false);

// max/min of |column| over rows.
double variation(const std::vector<SweepRow>& rows, const std::string& col);

}  // namespace npgap
