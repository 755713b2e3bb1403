#include "npgap/errors.hpp"
#include "npgap/harness/acceptance.hpp"
#include "npgap/harness/config.hpp"
#include "npgap/harness/emit.hpp"
#include "npgap/harness/oracle.hpp"
#include "npgap/harness/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

using namespace npgap;
using cplx = std::complex<double>;

namespace {

const char* full_config = R"(name: demo
problem: conducting
shapes:
  first: {kind: ellipse, center: [0, 0], a: 2, b: 1, angle: 0.3}
  second: {kind: fourier, r0: 1, cos: [0.1], sin: [0, 0.05]}
eps:
  values: [0.001, 0.1, 0.01]
background: {constant: 1, re: [0, 1], im: [2]}
resolution: {n: 128, graded: false}
probes: {gap_samples: 5, exterior: 10}
seed: 9
output: {dir: results, format: csv, plots: ["eps:hg"]}
fit: {exclude_largest: false}
)";

std::string disk_yaml(const std::string& eps) {
    return "shapes:\n  first: {kind: circle, radius: 1}\n  second: {kind: circle, radius: 1}\neps: " + eps + "\n";
}

}  // namespace

TEST_CASE("config parsing") {
    ExperimentConfig c = parse_config(full_config);
    CHECK(c.name == "demo");
    CHECK(c.first.kind == "ellipse");
    CHECK(c.first.angle == 0.3);
    CHECK(c.second.sin.size() == 2);
    REQUIRE(c.eps.size() == 3);
    CHECK(c.eps[0] == 0.1);
    CHECK(c.eps[2] == 0.001);
    CHECK(c.background.constant == 1);
    CHECK(c.background.re[1] == 1);
    CHECK(c.background.im[0] == 2);
    CHECK(c.n == 128);
    CHECK_FALSE(c.graded);
    CHECK(c.gap_samples == 5);
    CHECK(c.exterior_probes == 10);
    CHECK(c.seed == 9);
    CHECK(c.out_dir == "results");
    CHECK(c.format == "csv");
    CHECK(c.plots.size() == 1);
    CHECK_FALSE(c.exclude_largest);
    CHECK(c.raw == full_config);
    CHECK(c.resolution(0.5) == 128);

    ExperimentConfig d = parse_config(disk_yaml("{range: {min: 1e-4, max: 1e-1, count: 4}}"));
    REQUIRE(d.eps.size() == 4);
    CHECK(d.eps[0] == doctest::Approx(0.1));
    CHECK(d.eps[1] == doctest::Approx(0.01));
    CHECK(d.eps[3] == doctest::Approx(1e-4));
    CHECK(d.background.re == std::vector<double>{1});
    CHECK(parse_config(disk_yaml("{values: []}")).eps.empty());

    auto geo = geometric_eps(1e-3, 1, 4);
    CHECK(geo[1] == doctest::Approx(0.1));
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("shapes: [1"), ConfigError);
    CHECK_THROWS_AS(parse_config("name: x\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(disk_yaml("{values: [0.1]}") + "colour: red\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(disk_yaml("{values: [-0.1]}")), ConfigError);
    CHECK_THROWS_AS(parse_config(disk_yaml("{values: [0.1], range: {min: 1, max: 2, count: 2}}")), ConfigError);
    CHECK_THROWS_AS(parse_config(disk_yaml("{values: [0.1]}") + "resolution: {n: 33}\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(disk_yaml("{values: [0.1]}") + "output: {format: xml}\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(disk_yaml("{values: [0.1]}") + "problem: elastic\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("shapes:\n  first: {kind: square}\n  second: {kind: circle}\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("shapes:\n  first: {kind: ellipse, a: 1, b: 2}\n  second: {kind: circle}\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(disk_yaml("{values: [0.1]}") + "problem: insulating\northogonalize: true\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/dir/config.yaml"), IoError);
}

TEST_CASE("rate fits") {
    std::vector<double> x, y;
    for (int k = 0; k < 6; ++k) {
        x.push_back(std::pow(10.0, -k));
        y.push_back(3.0 * std::pow(x.back(), -0.5));
    }
    RateFit f = fit_rate(x, y);
    CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(3).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1).epsilon(1e-12));
    CHECK(f.points == 6);

    // Multiplicative noise of a few percent keeps the slope close.
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> un(0.97, 1.03);
    std::vector<double> xn, yn;
    for (int k = 0; k < 20; ++k) {
        xn.push_back(std::pow(10.0, -0.2 * k));
        yn.push_back(-std::pow(xn.back(), 1.5) * un(rng));
    }
    CHECK(fit_rate(xn, yn).slope == doctest::Approx(1.5).epsilon(0.02));
    CHECK_THROWS_AS(fit_rate({1, 2}, {1, 2}), DomainError);
    CHECK_THROWS_AS(fit_rate({1, 2, 0}, {1, 2, 3}), DomainError);

    std::vector<SweepRow> rows(4);
    for (int k = 0; k < 4; ++k) {
        rows[k].eps = std::pow(10.0, -k - 1);
        rows[k].hg = 2 * std::sqrt(rows[k].eps);
        rows[k].c_eps = k == 0 ? 100 : 1;  // outlier at the largest eps
    }
    CHECK(fit_rate(rows, "eps", "hg", true).points == 3);
    CHECK(fit_rate(rows, "eps", "hg", false).slope == doctest::Approx(0.5));
    CHECK(fit_rate(rows, "eps", "c_eps", true).slope == doctest::Approx(0).epsilon(1e-12));
    CHECK(variation(rows, "c_eps") == doctest::Approx(100));
    CHECK_THROWS_AS(column_value(rows[0], "nope"), ConfigError);
}

TEST_CASE("emitters") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(M_PI)) == M_PI);
    std::vector<SweepRow> rows(2);
    rows[0].eps = 0.1;
    rows[1].eps = 0.01;
    rows[0].hg = 1.5;
    std::string csv = to_csv(rows);
    std::istringstream in(csv);
    std::string header, line;
    std::getline(in, header);
    CHECK(header.rfind("eps,n,q_gap,", 0) == 0);
    int cols = 1;
    for (char ch : header) cols += ch == ',';
    CHECK(cols == int(sweep_columns().size()));
    int lines = 0;
    while (std::getline(in, line)) {
        int c = 1;
        for (char ch : line) c += ch == ',';
        CHECK(c == cols);
        ++lines;
    }
    CHECK(lines == 2);
    CHECK(to_csv(std::vector<SweepRow>{}).find('\n') == header.size());

    auto j = row_json(rows[0]);
    CHECK(j["hg"].get<double>() == 1.5);
    CHECK(fit_json(rows, "eps", "hg", false).contains("error"));

    CHECK(parse_plot("eps:hg").y == "hg");
    CHECK_THROWS_AS(parse_plot("eps"), ConfigError);
    CHECK_THROWS_AS(parse_plot("eps:bogus"), ConfigError);
    std::string svg = svg_plot(rows, {parse_plot("eps:hg"), parse_plot("eps:eps")}, "t");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK_THROWS_AS(svg_plot({}, {}, "t"), DomainError);
    CHECK_THROWS_AS(write_file("/proc/nope/out.csv", "x"), IoError);
}

TEST_CASE("image series oracle") {
    // An isolated conducting unit disk in h = x: grad Re(w - 1/w), w = z - c.
    Curve a = Curve::circle({0, 0}, 1), b = Curve::circle({1e4, 0}, 1);
    for (Vec2 x : {Vec2(0, 1.5), Vec2(-2, 0.3)}) {
        OracleValue v = image_series_oracle(a, b, 1.0, x);
        cplx w(x.x(), x.y());
        cplx fp = 1.0 + 1.0 / (w * w);
        CHECK((v.grad - Vec2(fp.real(), -fp.imag())).norm() < 1e-7);
    }
    // Identical disks: u is odd under the half turn.
    Curve c1 = Curve::circle({-1.05, 0}, 1), c2 = Curve::circle({1.05, 0}, 1);
    OracleValue p = image_series_oracle(c1, c2, 1.0, {0.02, 0.5});
    OracleValue m = image_series_oracle(c1, c2, 1.0, {-0.02, -0.5});
    CHECK(p.u == doctest::Approx(-m.u).epsilon(1e-12));
    CHECK(p.terms > 2);
    // h = y sees no interaction along the center line.
    CHECK(std::abs(image_series_oracle(c1, c2, cplx(0, -1), {0, 0}).u) < 1e-13);
}

TEST_CASE("integral equation against the oracle") {
    OracleCheck r = oracle_check(Curve(), Curve::circle({0, 0}, 0.5), 0.02, HarmonicBackground::x(), 256, 30, 4);
    CHECK(r.probes >= 30);
    CHECK(r.u_error < 1e-8);
    CHECK(r.grad_error < 1e-8);
    OracleCheck y = oracle_check(Curve(), Curve(), 0.05, HarmonicBackground::y(), 256, 20, 4);
    CHECK(y.grad_error < 1e-8);
    CHECK_THROWS_AS(oracle_check(Curve::ellipse({0, 0}, 2, 1), Curve(), 0.1, HarmonicBackground::x(), 64, 5, 1),
                    DomainError);
    CHECK_THROWS_AS(oracle_check(Curve(), Curve(), 0.1, HarmonicBackground{0, {0, 1}, {}}, 64, 5, 1), DomainError);
}

TEST_CASE("exterior probes") {
    InclusionPair p = place_at_gap(Curve(), Curve::ellipse({0, 0}, 2, 1, 0.3), 0.01);
    PairGrids g = discretize_pair(p, 128);
    auto pts = exterior_probes(p, g, 100, 7);
    CHECK(pts.size() == 100);
    for (const Vec2& x : pts) {
        CHECK_FALSE(p.curve1.contains(x));
        CHECK_FALSE(p.curve2.contains(x));
    }
    auto again = exterior_probes(p, g, 100, 7);
    CHECK(again == pts);
    CHECK(exterior_probes(p, g, 100, 8) != pts);
}

TEST_CASE("sweep rows") {
    ExperimentConfig c = disk_config();
    c.eps = geometric_eps(1e-3, 1e-1, 3);
    SweepResult r = run_sweep(c);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.failures.empty());
    for (const SweepRow& row : r.rows) {
        CHECK(row.multiplicity == 2);
        CHECK(row.flux_error < 1e-8);
        CHECK(row.constancy_dev < 1e-6);
        CHECK(row.q_gap == doctest::Approx(row.qb_gap).epsilon(1e-6));
        CHECK(row.q_gap == doctest::Approx(row.q_gap_predicted).epsilon(0.1));
    }
    // Deterministic under reruns.
    SweepRow again = compute_row(c, c.eps[1]);
    CHECK(again.max_grad_u == r.rows[1].max_grad_u);
    CHECK(again.hg == r.rows[1].hg);

    ExperimentConfig e = c;
    e.eps.clear();
    CHECK(run_sweep(e).rows.empty());

    // A bad row is recorded and the sweep continues.
    ExperimentConfig bad = c;
    bad.first.radius = 1;
    bad.eps = {0.1, -1.0};
    SweepResult rb = run_sweep(bad);
    CHECK(rb.rows.size() == 1);
    CHECK(rb.failures.size() == 1);
}
