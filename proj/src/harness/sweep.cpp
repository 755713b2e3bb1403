#include "npgap/harness/sweep.hpp"

#include "npgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace npgap {

const std::vector<SweepColumn>& sweep_columns() {
    static const std::vector<SweepColumn> cols = {
        {"eps", &SweepRow::eps},
        {"n", &SweepRow::n},
        {"q_gap", &SweepRow::q_gap},
        {"q_gap_predicted", &SweepRow::q_gap_predicted},
        {"qb_gap", &SweepRow::qb_gap},
        {"u_gap", &SweepRow::u_gap},
        {"hg", &SweepRow::hg},
        {"c_eps", &SweepRow::c_eps},
        {"c_eps_discrepancy", &SweepRow::c_eps_discrepancy},
        {"a_eps", &SweepRow::a_eps},
        {"alpha_eps", &SweepRow::alpha_eps},
        {"max_grad_u", &SweepRow::max_grad_u},
        {"predicted_grad_u", &SweepRow::predicted_grad_u},
        {"max_grad_b", &SweepRow::max_grad_b},
        {"max_grad_r", &SweepRow::max_grad_r},
        {"max_grad_v", &SweepRow::max_grad_v},
        {"sup_grad_u", &SweepRow::sup_grad_u},
        {"sup_grad_b", &SweepRow::sup_grad_b},
        {"sup_grad_r", &SweepRow::sup_grad_r},
        {"sup_grad_v", &SweepRow::sup_grad_v},
        {"multiplicity", &SweepRow::multiplicity},
        {"eigen_residual", &SweepRow::eigen_residual},
        {"constancy_dev", &SweepRow::constancy_dev},
        {"flux_error", &SweepRow::flux_error},
        {"neumann_residual", &SweepRow::neumann_residual},
    };
    return cols;
}

double column_value(const SweepRow& row, const std::string& name) {
    for (const auto& c : sweep_columns())
        if (name == c.name) return row.*(c.field);
    throw ConfigError("unknown column '" + name + "'");
}

namespace {

std::vector<Vec2> minus_scaled(std::vector<Vec2> a, const std::vector<Vec2>& b, double s) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= s * b[k];
    return a;
}

}  // namespace

SweepRow compute_row(const ExperimentConfig& config, double eps, int n_override) {
    InclusionPair pair = place_at_gap(config.first.build(), config.second.build(), eps);
    int n = n_override > 0 ? n_override : config.resolution(eps);
    PairGrids grids = discretize_pair(pair, n, config.graded);
    BlockOperator K = assemble_K(grids), S = assemble_S(grids);
    MeanZeroSolver solver(grids, K);
    EigenfunctionG g = build_g(grids, K, build_phi(grids, K, solver));
    SingularFunctionQ q = build_q(grids, K, S, g);
    DiskSingular ds = disk_singular(pair);
    GapProbe probe = gap_probe(pair, grids, config.gap_samples);
    GapProbe all = probe;
    all.nodes.resize(grids.total());
    for (int k = 0; k < grids.total(); ++k) all.nodes[k] = k;

    SweepRow row;
    row.eps = eps;
    row.n = n;
    row.q_gap = q.gap();
    row.q_gap_predicted = gap_asymptotic_q(pair);
    row.qb_gap = ds.gap();
    row.a_eps = q.gap() / ds.gap();
    row.eigen_residual = g.residual;
    row.multiplicity = multiplicity_near_half(K);

    // v = q - a qB
    std::vector<Vec2> q_node = boundary_gradient(grids, q.nodal, q.normal_derivative.stacked());
    std::vector<Vec2> v_node = q_node;
    for (int k = 0; k < grids.total(); ++k) {
        const Vec2& x = k < grids.n1() ? grids.g1.x[k] : grids.g2.x[k - grids.n1()];
        v_node[k] -= row.a_eps * ds.qB_grad(x);
    }
    auto v_grad = [&](const Vec2& x) { return Vec2(q.grad(x) - row.a_eps * ds.qB_grad(x)); };
    row.max_grad_v = max_over_probe(probe, grids, v_node, v_grad).value;
    row.sup_grad_v = max_over_probe(all, grids, v_node, v_grad).value;

    HarmonicBackground h = config.background;
    if (config.problem == Problem::conducting && config.orthogonalize) {
        double hp = inner_product_hg(grids, config.partner, g);
        if (std::abs(hp) < 1e-14) throw NumericalError("orthogonal partner is itself orthogonal to g");
        // Unit coefficient vector keeps h' of size one as the partner weight grows.
        double t = inner_product_hg(grids, h, g) / hp;
        h = (h - config.partner * t) * (1.0 / std::sqrt(1 + t * t));
    }
    // The conducting problem whose singular part is measured.
    HarmonicBackground hc = config.problem == Problem::conducting ? h : h.conjugate_background();
    SolveResult u = solve_perfect(grids, K, S, solver, hc);
    double scale = std::max(hc.trace(grids).cwiseAbs().maxCoeff(), 1e-300);
    row.constancy_dev = std::max(u.std1, u.std2) / scale;
    row.flux_error = u.flux.cwiseAbs().maxCoeff();
    row.hg = inner_product_hg(grids, hc, g);
    row.u_gap = u.gap();
    CEpsilon c = c_epsilon(grids, u, q);
    row.c_eps = c.value;
    row.c_eps_discrepancy = c.discrepancy;

    RemainderB b = decompose_remainder(u, q, c.value);
    std::vector<Vec2> b_node = b.boundary_grad(grids);
    auto b_grad = [&](const Vec2& x) { return b.grad(x); };
    row.max_grad_b = max_over_probe(probe, grids, b_node, b_grad).value;
    row.sup_grad_b = max_over_probe(all, grids, b_node, b_grad).value;

    std::vector<Vec2> qb_node(grids.total());
    for (int k = 0; k < grids.total(); ++k) {
        const Vec2& x = k < grids.n1() ? grids.g1.x[k] : grids.g2.x[k - grids.n1()];
        qb_node[k] = config.problem == Problem::conducting ? ds.qB_grad(x) : ds.qB_perp_grad(x);
    }

    if (config.problem == Problem::conducting) {
        LeadingDecomposition t = decompose_leading(pair, u, q, ds, row.hg, c.value);
        row.alpha_eps = t.alpha;
        auto u_grad = [&](const Vec2& x) { return u.grad(x); };
        row.max_grad_u = max_over_probe(probe, grids, u.boundary_grad, u_grad).value;
        row.sup_grad_u = max_over_probe(all, grids, u.boundary_grad, u_grad).value;
        std::vector<Vec2> r_node = minus_scaled(u.boundary_grad, qb_node, t.coefficient * t.alpha);
        auto r_grad = [&](const Vec2& x) { return t.r_grad(x); };
        row.max_grad_r = max_over_probe(probe, grids, r_node, r_grad).value;
        row.sup_grad_r = max_over_probe(all, grids, r_node, r_grad).value;
    } else {
        InsulatingResult ins =
            solve_insulating(grids, K, S, solver, h, pair.curve1.center(), pair.curve2.center());
        InsulatingDecomposition t = decompose_insulating(pair, ins, q, ds, row.hg, c.value);
        row.alpha_eps = t.beta;
        row.neumann_residual = ins.neumann_residual;
        std::vector<Vec2> ui = ins.boundary_grad();
        auto u_grad = [&](const Vec2& x) { return ins.grad(x); };
        row.max_grad_u = max_over_probe(probe, grids, ui, u_grad).value;
        row.sup_grad_u = max_over_probe(all, grids, ui, u_grad).value;
        std::vector<Vec2> r_node = minus_scaled(ui, qb_node, -t.coefficient * t.beta);
        auto r_grad = [&](const Vec2& x) { return t.r_grad(x); };
        row.max_grad_r = max_over_probe(probe, grids, r_node, r_grad).value;
        row.sup_grad_r = max_over_probe(all, grids, r_node, r_grad).value;
    }
    row.predicted_grad_u = std::abs(row.alpha_eps * row.hg) / eps;

    for (const auto& col : sweep_columns())
        if (!std::isfinite(row.*(col.field)))
            throw NumericalError(std::string("non-finite value in column ") + col.name);
    return row;
}

SweepResult run_sweep(const ExperimentConfig& config, int n_override) {
    SweepResult out;
    std::vector<double> eps = config.eps;
    std::sort(eps.begin(), eps.end(), std::greater<>());
    for (double e : eps) {
        try {
            out.rows.push_back(compute_row(config, e, n_override));
        } catch (const AccuracyError& ex) {
            out.failures.push_back({e, "accuracy", ex.what()});
        } catch (const NumericalError& ex) {
            out.failures.push_back({e, "numerical", ex.what()});
        } catch (const DomainError& ex) {
            out.failures.push_back({e, "domain", ex.what()});
        } catch (const std::exception& ex) {
            out.failures.push_back({e, "other", ex.what()});
        }
    }
    return out;
}

RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("fit_rate: size mismatch");
    if (x.size() < 3) throw DomainError("fit_rate: need at least 3 points");
    int n = int(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        if (!(x[i] > 0) || !(std::abs(y[i]) > 0) || !std::isfinite(y[i]))
            throw DomainError("fit_rate: values must be positive");
        double a = std::log(x[i]), b = std::log(std::abs(y[i]));
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
        syy += b * b;
    }
    double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
    if (vx <= 0) throw DomainError("fit_rate: x values are all equal");
    RateFit f;
    f.points = n;
    f.slope = cxy / vx;
    f.intercept = (sy - f.slope * sx) / n;
    f.r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
    return f;
}

RateFit fit_rate(const std::vector<SweepRow>& rows, const std::string& xcol, const std::string& ycol,
                 bool exclude_largest) {
    std::vector<const SweepRow*> use;
    for (const auto& r : rows) use.push_back(&r);
    if (exclude_largest && !use.empty()) {
        auto it = std::max_element(use.begin(), use.end(), [](auto a, auto b) { return a->eps < b->eps; });
        use.erase(it);
    }
    std::vector<double> x, y;
    for (auto* r : use) {
        x.push_back(column_value(*r, xcol));
        y.push_back(column_value(*r, ycol));
    }
    return fit_rate(x, y);
}

double variation(const std::vector<SweepRow>& rows, const std::string& col) {
    if (rows.empty()) return 1.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& r : rows) {
        double v = std::abs(column_value(r, col));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace npgap
