#pragma once

#include "npgap/solver.hpp"

#include <string>
#include <vector>

namespace npgap {

struct ShapeSpec {
    std::string kind = "circle";  // circle | ellipse | fourier
    Vec2 center = Vec2::Zero();
    double radius = 1;            // circle
    double a = 1, b = 1, angle = 0;  // ellipse
    double r0 = 1;                // fourier
    std::vector<double> cos, sin;

    Curve build() const;
};

enum class Problem { conducting, insulating };

struct ExperimentConfig {
    std::string name = "experiment";
    Problem problem = Problem::conducting;
    ShapeSpec first, second;
    std::vector<double> eps;  // positive, descending
    HarmonicBackground background = HarmonicBackground::x();
    bool orthogonalize = false;
    HarmonicBackground partner{0, {0, 0, 1}, {}};  // Re z^3
    int n = 0;            // nodes per curve; 0 selects the default policy
    bool graded = true;
    int gap_samples = 7;
    int exterior_probes = 200;
    unsigned seed = 1;
    std::string out_dir = "out";
    std::string format = "both";
    std::vector<std::string> plots;
    bool exclude_largest = true;
    std::string raw;      // the file text, echoed into reports

    int resolution(double e) const { return n > 0 ? n : default_resolution(e); }
};

// Throws ConfigError on syntax errors, unknown keys and invalid values.
ExperimentConfig parse_config(const std::string& text);
// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::string& path);

// Geometric sequence from hi down to lo with count points.
std::vector<double> geometric_eps(double lo, double hi, int count);

}  // namespace npgap
