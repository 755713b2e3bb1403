#include "npgap/harness/acceptance.hpp"

#include "npgap/errors.hpp"
#include "npgap/harness/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <sstream>

namespace npgap {

namespace {

// Pinned tolerances.
constexpr double jump_tol = 1e-6;
constexpr double jump_delta = 1e-3;
constexpr double eig_tol = 1e-6;
constexpr double flux_tol = 1e-8;
constexpr double residual_tol = 1e-6;
constexpr double uniqueness_tol = 1e-6;
constexpr double fixed_point_slope = 0.95;
constexpr double q_ratio_lo = 0.9, q_ratio_hi = 1.1;
constexpr double q_residual_slope = 0.9;
constexpr double hg_variation = 2.0;
constexpr double hg_slope = 0.45;
constexpr double c_variation = 3.0;
constexpr double blowup_ratio_tol = 0.10;
constexpr double blowup_slope = -0.5, blowup_slope_tol = 0.05;
constexpr double remainder_variation = 3.0;
constexpr double u_growth = 8.0;
constexpr double neumann_tol = 1e-5;
constexpr double branch_tol = 1e-10;
constexpr double oracle_tol = 1e-6;
constexpr double orthogonal_variation = 3.0;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string g3(double v) { return fmt("%.3g", v); }

const Vec2& node(const PairGrids& grids, int k) {
    return k < grids.n1() ? grids.g1.x[k] : grids.g2.x[k - grids.n1()];
}

// Largest value over the rows divided by the value at the largest eps.
double growth(const std::vector<SweepRow>& rows, const std::string& col) {
    double first = std::abs(column_value(rows.front(), col)), hi = 0;
    for (const auto& r : rows) hi = std::max(hi, std::abs(column_value(r, col)));
    return first > 0 ? hi / first : INFINITY;
}

std::vector<SweepRow> subset(const std::vector<SweepRow>& rows, double lo, double hi) {
    std::vector<SweepRow> out;
    for (const auto& r : rows)
        if (r.eps >= lo * (1 - 1e-9) && r.eps <= hi * (1 + 1e-9)) out.push_back(r);
    return out;
}

const SweepRow& nearest(const std::vector<SweepRow>& rows, double eps) {
    return *std::min_element(rows.begin(), rows.end(), [&](const SweepRow& a, const SweepRow& b) {
        return std::abs(std::log(a.eps / eps)) < std::abs(std::log(b.eps / eps));
    });
}

// Sweep that must produce every row.
std::vector<SweepRow> full_sweep(const ExperimentConfig& c, std::string& why) {
    SweepResult res = run_sweep(c);
    for (const auto& f : res.failures) why += "row eps=" + g3(f.eps) + " failed: " + f.message + "; ";
    return res.rows;
}

// Criterion 1: one-sided normal derivatives of S[phi] by fourth-order
// differences from the boundary trace and four off-curve values.
CriterionResult jump_relation(unsigned seed) {
    CriterionResult r{1, "jump relation on an ellipse", false, "", 0};
    ExperimentConfig ec = ellipse_config();
    InclusionPair pair = place_at_gap(ec.first.build(), ec.second.build(), 0.1);
    const int n = 256;
    BoundaryGrid g = discretize(pair.curve1, n);
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> a(9), b(9);
    for (int m = 0; m <= 8; ++m) {
        a[m] = nd(rng) / (1 + m * m);
        b[m] = nd(rng) / (1 + m * m);
    }
    Eigen::VectorXd phi(n);
    for (int k = 0; k < n; ++k) {
        double v = 0;
        for (int m = 0; m <= 8; ++m) v += a[m] * std::cos(m * g.t[k]) + b[m] * std::sin(m * g.t[k]);
        phi[k] = v;
    }
    Eigen::VectorXd u0 = slp_matrix_on(g, log_rule(n)) * phi;
    Eigen::VectorXd kphi = npstar_self(g) * phi;
    LayerEvaluator ev(g, phi);
    const double c[5] = {-25, 48, -36, 16, -3};
    double err_out = 0, err_in = 0, scale = phi.cwiseAbs().maxCoeff();
    for (int k = 0; k < n; ++k) {
        double dout = c[0] * u0[k], din = c[0] * u0[k];
        for (int j = 1; j <= 4; ++j) {
            dout += c[j] * ev.value(g.x[k] + j * jump_delta * g.normal[k], Side::exterior);
            din += c[j] * ev.value(g.x[k] - j * jump_delta * g.normal[k], Side::interior);
        }
        dout /= 12 * jump_delta;
        din /= -12 * jump_delta;  // derivative along +normal from the inside
        err_out = std::max(err_out, std::abs(dout - (0.5 * phi[k] + kphi[k])));
        err_in = std::max(err_in, std::abs(din - (-0.5 * phi[k] + kphi[k])));
    }
    double err = std::max(err_out, err_in) / scale;
    r.pass = err <= jump_tol;
    r.detail = "max error exterior " + g3(err_out / scale) + ", interior " + g3(err_in / scale) +
               " (relative to max|phi|, delta " + g3(jump_delta) + ", tol " + g3(jump_tol) + ")";
    return r;
}

CriterionResult spectrum_check() {
    CriterionResult r{2, "discrete spectrum: multiplicity two at 1/2, contained in (-1/2, 1/2]", true, "", 0};
    ExperimentConfig cfgs[2] = {disk_config(), ellipse_config()};
    const char* names[2] = {"disks", "ellipses"};
    std::ostringstream d;
    for (int i = 0; i < 2; ++i) {
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            InclusionPair pair = place_at_gap(cfgs[i].first.build(), cfgs[i].second.build(), eps);
            PairGrids grids = discretize_pair(pair, 256);
            SpectrumReport s = spectrum(grids, assemble_K(grids), assemble_S(grids), eig_tol);
            bool ok = s.multiplicity == 2 && s.max_real <= 0.5 + eig_tol && s.min_real > -0.5;
            r.pass = r.pass && ok;
            d << names[i] << " eps=" << g3(eps) << ": mult " << s.multiplicity << ", range ["
              << fmt("%.6f", s.min_real) << ", " << fmt("%.9f", s.max_real) << "]" << (ok ? "" : " FAIL") << "; ";
        }
    }
    r.detail = d.str();
    return r;
}

CriterionResult normalization_check() {
    CriterionResult r{3, "eigenfunction g: fluxes (1, -1) and eigen-residual", true, "", 0};
    std::ostringstream d;
    ExperimentConfig cfgs[2] = {disk_config(), ellipse_config()};
    const char* names[2] = {"disks", "ellipses"};
    for (int i = 0; i < 2; ++i) {
        for (double eps : {1e-1, 1e-3}) {
            InclusionPair pair = place_at_gap(cfgs[i].first.build(), cfgs[i].second.build(), eps);
            PairGrids grids = discretize_pair(pair, default_resolution(eps));
            EigenfunctionG g = eigenfunction_g(grids, assemble_K(grids));
            double ferr = std::max(std::abs(g.flux[0] - 1), std::abs(g.flux[1] + 1));
            bool ok = ferr <= flux_tol && g.residual <= residual_tol;
            r.pass = r.pass && ok;
            d << names[i] << " eps=" << g3(eps) << ": flux error " << g3(ferr) << ", residual " << g3(g.residual)
              << (ok ? "" : " FAIL") << "; ";
        }
    }
    r.detail = d.str();
    return r;
}

CriterionResult uniqueness_check(unsigned seed) {
    CriterionResult r{4, "numeric q equals closed-form qB for two unit disks", false, "", 0};
    Curve unit = Curve::circle({0, 0}, 1);
    InclusionPair pair = place_at_gap(unit, unit, 0.05);
    PairGrids grids = discretize_pair(pair, 512);
    BlockOperator K = assemble_K(grids), S = assemble_S(grids);
    SingularFunctionQ q = build_q(grids, K, S, eigenfunction_g(grids, K));
    DiskSingular ds = disk_singular(pair.curve1, pair.curve2);
    double err = 0;
    for (const Vec2& x : exterior_probes(pair, grids, 200, seed)) err = std::max(err, std::abs(q.value(x) - ds.qB(x)));
    r.pass = err <= uniqueness_tol;
    r.detail = "max |q - qB| over 200 probes " + g3(err) + " (tol " + g3(uniqueness_tol) + ")";
    return r;
}

CriterionResult fixed_point_check() {
    CriterionResult r{5, "fixed points against their square-root predictor", true, "", 0};
    std::ostringstream d;
    std::vector<double> eps = geometric_eps(1e-4, 1e-1, 7);
    for (auto radii : {std::pair{1.0, 1.0}, std::pair{1.0, 0.5}}) {
        std::vector<double> res;
        for (double e : eps) {
            InclusionPair pair =
                place_at_gap(Curve::circle({0, 0}, radii.first), Curve::circle({0, 0}, radii.second), e);
            auto [p1, p2] = disk_fixed_points(pair.curve1, pair.curve2);
            double pred = fixed_point_asymptotic(pair);
            res.push_back(std::max(std::abs(p1.x() + pred), std::abs(p2.x() - pred)) +
                          std::abs(p1.y()) + std::abs(p2.y()));
        }
        RateFit f = fit_rate(eps, res);
        bool ok = f.slope >= fixed_point_slope;
        r.pass = r.pass && ok;
        d << "radii (" << radii.first << ", " << radii.second << "): residual slope " << fmt("%.4f", f.slope)
          << (ok ? "" : " FAIL") << "; ";
    }
    r.detail = d.str() + "need >= " + g3(fixed_point_slope);
    return r;
}

CriterionResult q_gap_check(const std::vector<SweepRow>& rows, const std::string& why) {
    CriterionResult r{6, "q gap against its square-root predictor, ellipse pair", false, why, 0};
    if (rows.size() < 4) return r;
    const SweepRow& last = nearest(rows, 1e-4);
    double ratio = last.q_gap / last.q_gap_predicted;
    std::vector<double> x, y;
    for (size_t i = 1; i < rows.size(); ++i) {  // largest eps excluded
        x.push_back(rows[i].eps);
        y.push_back(rows[i].q_gap - rows[i].q_gap_predicted);
    }
    RateFit f = fit_rate(x, y);
    r.pass = ratio >= q_ratio_lo && ratio <= q_ratio_hi && f.slope >= q_residual_slope && std::abs(last.eps - 1e-4) < 1e-10;
    r.detail += "ratio at eps=1e-4 " + fmt("%.5f", ratio) + " (need [" + g3(q_ratio_lo) + ", " + g3(q_ratio_hi) +
                "]), residual slope " + fmt("%.4f", f.slope) + " (need >= " + g3(q_residual_slope) + ")";
    return r;
}

CriterionResult hg_check(const std::vector<SweepRow>& rows, const std::string& why) {
    CriterionResult r{7, "<h, g> scales like sqrt(eps), ellipse pair, h = x", false, why, 0};
    if (rows.size() < 4) return r;
    double lo = INFINITY, hi = 0;
    for (const auto& row : rows) {
        double v = std::abs(row.hg) / std::sqrt(row.eps);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    RateFit f = fit_rate(rows, "eps", "hg", true);
    r.pass = hi / lo <= hg_variation && f.slope >= hg_slope;
    r.detail += "|<h,g>|/sqrt(eps) in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "], variation " +
                fmt("%.4f", hi / lo) + " (need <= " + g3(hg_variation) + "), slope " + fmt("%.4f", f.slope) +
                " (need >= " + g3(hg_slope) + ")";
    return r;
}

CriterionResult c_check(const std::vector<SweepRow>& rows, const std::string& why) {
    CriterionResult r{8, "c_eps bounded, ellipse pair, h = x", false, why, 0};
    if (rows.size() < 4) return r;
    double v = variation(rows, "c_eps");
    double disc = 0;
    for (const auto& row : rows) disc = std::max(disc, row.c_eps_discrepancy);
    r.pass = v <= c_variation;
    r.detail += "c_eps from " + fmt("%.5f", rows.front().c_eps) + " to " + fmt("%.5f", rows.back().c_eps) +
                ", variation " + fmt("%.4f", v) + " (need <= " + g3(c_variation) +
                "); two formulas agree to " + g3(disc);
    return r;
}

CriterionResult blowup_check(const std::vector<SweepRow>& rows, const std::string& why) {
    CriterionResult r{9, "gap gradient blow-up, disk pair, h = x", false, why, 0};
    if (rows.size() < 4) return r;
    const SweepRow& m = nearest(rows, 1e-3);
    double ratio = m.max_grad_u / m.predicted_grad_u;
    RateFit f = fit_rate(rows, "eps", "max_grad_u", true);
    r.pass = std::abs(ratio - 1) <= blowup_ratio_tol && std::abs(f.slope - blowup_slope) <= blowup_slope_tol &&
             std::abs(m.eps - 1e-3) < 1e-12;
    r.detail += "max|grad u| / (alpha |<h,g>| / eps) at eps=1e-3 " + fmt("%.5f", ratio) + " (need within " +
                g3(blowup_ratio_tol) + "), slope " + fmt("%.4f", f.slope) + " (need -0.5 +- " +
                g3(blowup_slope_tol) + ")";
    return r;
}

// Boundedness of b, r and v. The sup over the exterior must stay within the
// factor, and the gap-local max must not grow by more than the factor. The
// gap-local |grad b| decays exponentially, so its two-sided variation is only
// reported.
CriterionResult remainder_check(const std::vector<SweepRow>& all, const std::string& why) {
    CriterionResult r{10, "remainders b, r, v stay bounded while grad u blows up, ellipse pair", false, why, 0};
    std::vector<SweepRow> rows = subset(all, 1e-4, 1e-2);
    if (rows.size() < 3) return r;
    std::ostringstream d;
    bool ok = true;
    for (const char* name : {"b", "r", "v"}) {
        std::string gap = std::string("max_grad_") + name, sup = std::string("sup_grad_") + name;
        double vs = variation(rows, sup), gg = growth(rows, gap), vg = variation(rows, gap);
        bool good = vs <= remainder_variation && gg <= remainder_variation;
        ok = ok && good;
        d << name << ": sup variation " << fmt("%.4f", vs) << ", gap growth " << fmt("%.4f", gg)
          << ", gap variation " << g3(vg) << (good ? "" : " FAIL") << "; ";
    }
    double grow = rows.back().max_grad_u / rows.front().max_grad_u;
    ok = ok && grow >= u_growth;
    d << "max|grad u| grows " << fmt("%.3f", grow) << "x (need >= " << u_growth << ")";
    r.pass = ok;
    r.detail += d.str();
    return r;
}

CriterionResult insulating_check(const std::vector<SweepRow>& rows, const std::string& why) {
    CriterionResult r{11, "insulating disks, h = y: Neumann residual, blow-up rate, conjugate continuity", false, why, 0};
    if (rows.size() < 4) return r;
    double neu = 0;
    for (const auto& row : rows) neu = std::max(neu, row.neumann_residual);
    RateFit f = fit_rate(rows, "eps", "max_grad_u", true);
    // Branch spot check on the center line outside the disks.
    double jump = 0;
    Curve unit = Curve::circle({0, 0}, 1);
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        DiskSingular ds = disk_singular(place_at_gap(unit, unit, eps));
        const double eta = 1e-13;
        std::vector<double> xs;
        for (int i = 0; i <= 40; ++i) {
            xs.push_back(-2 - eps / 2 - 1e-3 - 8.0 * i / 40);  // left of disk 1
            xs.push_back(2 + eps / 2 + 1e-3 + 8.0 * i / 40);   // right of disk 2
            xs.push_back(eps * (i - 20) / 41.0);                // inside the gap
        }
        for (double x : xs) jump = std::max(jump, std::abs(ds.qB_perp({x, eta}) - ds.qB_perp({x, -eta})));
    }
    r.pass = neu <= neumann_tol && std::abs(f.slope - blowup_slope) <= blowup_slope_tol && jump <= branch_tol;
    r.detail += "Neumann residual " + g3(neu) + " (need <= " + g3(neumann_tol) + "), slope " + fmt("%.4f", f.slope) +
                " (need -0.5 +- " + g3(blowup_slope_tol) + "), conjugate jump across the axis " + g3(jump) +
                " (need <= " + g3(branch_tol) + ")";
    return r;
}

CriterionResult oracle_equivalence(unsigned seed) {
    CriterionResult r{12, "BIE against the image series, unit disks, h = x, eps = 0.05", false, "", 0};
    Curve unit = Curve::circle({0, 0}, 1);
    OracleCheck c = oracle_check(unit, unit, 0.05, HarmonicBackground::x(), 256, 50, seed);
    r.pass = c.u_error <= oracle_tol && c.grad_error <= oracle_tol;
    r.detail = "relative error u " + g3(c.u_error) + ", grad u " + g3(c.grad_error) + " at " +
               std::to_string(c.probes) + " probes; gap midpoint " + g3(c.midpoint_u_error) + " / " +
               g3(c.midpoint_grad_error) + "; up to " + std::to_string(c.max_terms) + " image terms (tol " +
               g3(oracle_tol) + ")";
    return r;
}

CriterionResult orthogonal_check(const std::vector<SweepRow>& rows, const std::string& why) {
    CriterionResult r{13, "background orthogonal to g: no blow-up, disk pair", false, why, 0};
    if (rows.size() < 4) return r;
    double vs = variation(rows, "sup_grad_u"), gg = growth(rows, "max_grad_u"), vg = variation(rows, "max_grad_u");
    double hg = 0;
    for (const auto& row : rows) hg = std::max(hg, std::abs(row.hg));
    r.pass = vs <= orthogonal_variation && gg <= orthogonal_variation;
    r.detail += "sup|grad u| variation " + fmt("%.4f", vs) + ", gap max growth " + fmt("%.4f", gg) +
                " (need <= " + g3(orthogonal_variation) + "); gap max variation " + g3(vg) + ", max |<h',g>| " +
                g3(hg);
    return r;
}

template <class F>
CriterionResult timed(F f) {
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = f();
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace

std::string format_line(const CriterionResult& r) {
    char head[64];
    std::snprintf(head, sizeof head, "[%s] %2d ", r.pass ? "PASS" : "FAIL", r.id);
    return head + r.title + ": " + r.detail + fmt(" (%.2f s)", r.seconds);
}

ExperimentConfig disk_config(double r1, double r2) {
    ExperimentConfig c;
    c.name = "disks";
    c.first.kind = c.second.kind = "circle";
    c.first.radius = r1;
    c.second.radius = r2;
    c.eps = geometric_eps(1e-4, 1e-1, 7);
    return c;
}

ExperimentConfig ellipse_config() {
    ExperimentConfig c;
    c.name = "ellipses";
    c.first.kind = c.second.kind = "ellipse";
    c.first.a = 2;
    c.first.b = 1;
    c.first.angle = 0.3;
    c.second.a = 1.5;
    c.second.b = 1;
    c.second.angle = -0.5;
    c.eps = geometric_eps(1e-4, 1e-1, 7);
    return c;
}

std::vector<Vec2> exterior_probes(const InclusionPair& pair, const PairGrids& grids, int count, unsigned seed,
                                  double margin) {
    std::mt19937 rng(seed);
    Vec2 lo = grids.g1.x[0], hi = lo;
    for (int k = 0; k < grids.total(); ++k) {
        lo = lo.cwiseMin(node(grids, k));
        hi = hi.cwiseMax(node(grids, k));
    }
    lo -= Vec2(1, 1);
    hi += Vec2(1, 1);
    double l = 3 * pair.gap_scale();
    auto outside = [&](const Vec2& x) {
        for (int j = 0; j < 2; ++j) {
            Foot f = foot_point(grids[j], x);
            if (f.dist < margin) return false;
        }
        return true;
    };
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Vec2> out;
    int near = count / 4, tries = 0;
    while (int(out.size()) < count) {
        if (++tries > 1000 * count) throw NumericalError("exterior_probes: cannot place probes");
        bool gap = int(out.size()) < near;
        Vec2 x = gap ? Vec2((2 * u(rng) - 1) * l, (2 * u(rng) - 1) * l)
                     : Vec2(lo.x() + (hi.x() - lo.x()) * u(rng), lo.y() + (hi.y() - lo.y()) * u(rng));
        if (gap) x += 0.5 * (pair.z1 + pair.z2);
        if (outside(x)) out.push_back(x);
    }
    return out;
}

OracleCheck oracle_check(const Curve& shape1, const Curve& shape2, double eps, const HarmonicBackground& h, int n,
                         int probes, unsigned seed) {
    if (shape1.kind() != CurveKind::circle || shape2.kind() != CurveKind::circle)
        throw DomainError("oracle: both shapes must be circles");
    for (std::size_t m = 1; m < std::max(h.re.size(), h.im.size()); ++m)
        if ((m < h.re.size() && h.re[m] != 0) || (m < h.im.size() && h.im[m] != 0))
            throw DomainError("oracle: background must have degree at most one");
    double re = h.re.empty() ? 0.0 : h.re[0], im = h.im.empty() ? 0.0 : h.im[0];
    std::complex<double> A(re, -im);

    InclusionPair pair = place_at_gap(shape1, shape2, eps);
    PairGrids grids = discretize_pair(pair, n);
    SolveResult u = solve_perfect(grids, assemble_K(grids), assemble_S(grids), h);
    Vec2 mid = 0.5 * (pair.z1 + pair.z2);
    std::vector<Vec2> pts{mid};
    for (int j = 1; j <= 4; ++j) pts.push_back(pair.z1 + (j / 5.0) * (pair.z2 - pair.z1));
    for (const Vec2& x : exterior_probes(pair, grids, std::max(0, probes - int(pts.size())), seed)) pts.push_back(x);
    pts.resize(std::min<std::size_t>(pts.size(), std::size_t(std::max(probes, 1))));

    OracleCheck c;
    c.probes = int(pts.size());
    double du = 0, dg = 0, su = 0, sg = 0;
    std::vector<double> eu, eg;
    for (const Vec2& x : pts) {
        OracleValue o = image_series_oracle(pair.curve1, pair.curve2, A, x);
        double uo = o.u + h.constant;
        eu.push_back(std::abs(u.value(x) - uo));
        eg.push_back((u.grad(x) - o.grad).norm());
        su = std::max(su, std::abs(uo));
        sg = std::max(sg, o.grad.norm());
        c.max_terms = std::max(c.max_terms, o.terms);
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        du = std::max(du, eu[i]);
        dg = std::max(dg, eg[i]);
    }
    c.u_error = su > 0 ? du / su : du;
    c.grad_error = sg > 0 ? dg / sg : dg;
    c.midpoint_u_error = su > 0 ? eu[0] / su : eu[0];
    c.midpoint_grad_error = sg > 0 ? eg[0] / sg : eg[0];
    return c;
}

std::vector<CriterionResult> run_acceptance(unsigned seed, const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> out;
    auto add = [&](CriterionResult r) {
        out.push_back(r);
        if (on_result) on_result(out.back());
    };
    add(timed([&] { return jump_relation(seed); }));
    add(timed([] { return spectrum_check(); }));
    add(timed([] { return normalization_check(); }));
    add(timed([&] { return uniqueness_check(seed); }));
    add(timed([] { return fixed_point_check(); }));

    // Shared sweeps; their cost is charged to the first criterion that uses them.
    auto t0 = std::chrono::steady_clock::now();
    std::string ell_why;
    std::vector<SweepRow> ell = full_sweep(ellipse_config(), ell_why);
    double ell_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto with_time = [](CriterionResult r, double s) {
        r.seconds += s;
        return r;
    };
    add(with_time(timed([&] { return q_gap_check(ell, ell_why); }), ell_time));
    add(timed([&] { return hg_check(ell, ell_why); }));
    add(timed([&] { return c_check(ell, ell_why); }));

    t0 = std::chrono::steady_clock::now();
    std::string disk_why;
    std::vector<SweepRow> disk = full_sweep(disk_config(), disk_why);
    double disk_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    add(with_time(timed([&] { return blowup_check(disk, disk_why); }), disk_time));
    add(timed([&] { return remainder_check(ell, ell_why); }));

    t0 = std::chrono::steady_clock::now();
    ExperimentConfig ins = disk_config();
    ins.problem = Problem::insulating;
    ins.background = HarmonicBackground::y();
    std::string ins_why;
    std::vector<SweepRow> ins_rows = full_sweep(ins, ins_why);
    double ins_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    add(with_time(timed([&] { return insulating_check(ins_rows, ins_why); }), ins_time));

    add(timed([&] { return oracle_equivalence(seed); }));

    t0 = std::chrono::steady_clock::now();
    ExperimentConfig orth = disk_config();
    orth.orthogonalize = true;
    std::string orth_why;
    std::vector<SweepRow> orth_rows = full_sweep(orth, orth_why);
    double orth_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    add(with_time(timed([&] { return orthogonal_check(orth_rows, orth_why); }), orth_time));
    return out;
}

}  // namespace npgap
