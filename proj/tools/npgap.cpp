// Command line front end: spectrum, qfun, solve, sweep, oracle, verify.
#include "npgap/errors.hpp"
#include "npgap/harness/acceptance.hpp"
#include "npgap/harness/emit.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>

using namespace npgap;
using nlohmann::json;

namespace {

enum Exit { ok = 0, config_error = 2, accuracy_error = 3, io_error = 4 };

struct Options {
    std::string config;
    std::string out;
    std::string format;
    std::vector<std::string> plots;
    int n_override = 0;
    long seed = -1;
};

ExperimentConfig load(const Options& o) {
    ExperimentConfig c = load_config(o.config);
    if (!o.out.empty()) c.out_dir = o.out;
    if (!o.format.empty()) c.format = o.format;
    if (o.seed >= 0) c.seed = unsigned(o.seed);
    for (const auto& p : o.plots) c.plots.push_back(p);
    for (const auto& p : c.plots) (void)parse_plot(p);
    if (o.n_override != 0 && (o.n_override < 16 || o.n_override % 2))
        throw ConfigError("--n-override: must be an even number >= 16");
    return c;
}

bool want_csv(const ExperimentConfig& c) { return c.format != "json"; }
bool want_json(const ExperimentConfig& c) { return c.format != "csv"; }
std::string path(const ExperimentConfig& c, const std::string& file) { return (std::filesystem::path(c.out_dir) / file).string(); }

void emit(const ExperimentConfig& c, const std::string& stem, const std::string& csv, json j) {
    j["config"] = c.raw;
    if (want_csv(c)) write_file(path(c, stem + ".csv"), csv);
    if (want_json(c)) write_file(path(c, stem + ".json"), j.dump(2) + "\n");
}

int resolution(const ExperimentConfig& c, const Options& o, double eps) {
    return o.n_override > 0 ? o.n_override : c.resolution(eps);
}

struct Setup {
    InclusionPair pair;
    PairGrids grids;
    BlockOperator K, S;
};

Setup setup(const ExperimentConfig& c, const Options& o, double eps) {
    InclusionPair pair = place_at_gap(c.first.build(), c.second.build(), eps);
    PairGrids grids = discretize_pair(pair, resolution(c, o, eps), c.graded);
    BlockOperator K = assemble_K(grids), S = assemble_S(grids);
    return {pair, grids, K, S};
}

int cmd_spectrum(const Options& o) {
    ExperimentConfig c = load(o);
    std::vector<std::vector<double>> rows;
    json j;
    j["name"] = c.name;
    j["reports"] = json::array();
    bool good = true;
    for (double eps : c.eps) {
        Setup s = setup(c, o, eps);
        SpectrumReport r = spectrum(s.grids, s.K, s.S);
        good = good && r.multiplicity == 2 && r.contained;
        rows.push_back({eps, double(s.grids.n1()), double(r.multiplicity), r.contained ? 1.0 : 0.0, r.max_real,
                        r.min_real, r.max_imag, r.gap_below_half, r.symmetrization_residual, r.min_eig_minus_s});
        json e = {{"eps", eps}, {"n", s.grids.n1()}, {"multiplicity", r.multiplicity}, {"contained", r.contained},
                  {"max_real", r.max_real}, {"min_real", r.min_real}, {"max_imag", r.max_imag},
                  {"gap_below_half", r.gap_below_half}, {"symmetrization_residual", r.symmetrization_residual},
                  {"min_eig_minus_s", r.min_eig_minus_s}, {"rescale", r.rescale}};
        json re = json::array(), im = json::array();
        for (auto z : r.eigenvalues) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        e["eigenvalues_real"] = re;
        e["eigenvalues_imag"] = im;
        j["reports"].push_back(e);
        std::cout << "eps " << format_double(eps) << ": multiplicity " << r.multiplicity << ", spectrum in ["
                  << r.min_real << ", " << r.max_real << "]\n";
    }
    emit(c, "spectrum",
         to_csv({"eps", "n", "multiplicity", "contained", "max_real", "min_real", "max_imag", "gap_below_half",
                 "symmetrization_residual", "min_eig_minus_s"},
                rows),
         j);
    return good ? ok : accuracy_error;
}

int cmd_qfun(const Options& o) {
    ExperimentConfig c = load(o);
    std::vector<std::vector<double>> rows;
    json j;
    j["name"] = c.name;
    j["rows"] = json::array();
    for (double eps : c.eps) {
        Setup s = setup(c, o, eps);
        SingularFunctionQ q = build_q(s.grids, s.K, s.S, eigenfunction_g(s.grids, s.K));
        EnvelopeReport env = q_envelopes(q, s.grids, s.pair);
        double pred = gap_asymptotic_q(s.pair);
        DiskSingular ds = disk_singular(s.pair);
        std::vector<double> v{eps, double(s.grids.n1()), q.gap(), pred, q.gap() / pred, ds.gap(),
                              std::max(q.std1, q.std2), q.flux[0], q.flux[1], q.g.residual, env.delta0,
                              env.normal_ratio, env.far_ratio, env.qB_deviation, env.comparability};
        rows.push_back(v);
        j["rows"].push_back({{"eps", eps}, {"n", s.grids.n1()}, {"q_gap", q.gap()}, {"q_gap_predicted", pred},
                             {"ratio", q.gap() / pred}, {"qb_gap", ds.gap()}, {"constancy_dev", v[6]},
                             {"flux1", q.flux[0]}, {"flux2", q.flux[1]}, {"eigen_residual", q.g.residual},
                             {"delta0", env.delta0}, {"normal_ratio", env.normal_ratio},
                             {"far_ratio", env.far_ratio}, {"qb_deviation", env.qB_deviation},
                             {"comparability", env.comparability}});
        std::cout << "eps " << format_double(eps) << ": q gap " << q.gap() << ", predicted " << pred << ", ratio "
                  << q.gap() / pred << "\n";
    }
    emit(c, "qfun",
         to_csv({"eps", "n", "q_gap", "q_gap_predicted", "ratio", "qb_gap", "constancy_dev", "flux1", "flux2",
                 "eigen_residual", "delta0", "normal_ratio", "far_ratio", "qb_deviation", "comparability"},
                rows),
         j);
    return ok;
}

int cmd_solve(const Options& o) {
    ExperimentConfig c = load(o);
    if (c.eps.empty()) throw ConfigError("solve: the config lists no eps");
    double eps = c.eps.front();
    SweepRow row = compute_row(c, eps, o.n_override);
    json j = {{"name", c.name}, {"eps", eps}, {"row", row_json(row)}};
    emit(c, "solve", to_csv(std::vector<SweepRow>{row}), j);
    for (const auto& col : sweep_columns()) std::cout << col.name << " = " << format_double(row.*(col.field)) << "\n";
    return ok;
}

// Disk cross-validation gate run before any sweep report is written.
OracleCheck gate() {
    Curve unit = Curve::circle({0, 0}, 1);
    return oracle_check(unit, unit, 0.05, HarmonicBackground::x(), 256, 50, 1);
}

int cmd_sweep(const Options& o) {
    ExperimentConfig c = load(o);
    OracleCheck g = gate();
    bool gate_ok = g.u_error <= 1e-6 && g.grad_error <= 1e-6;
    if (!gate_ok) {
        std::cerr << "oracle gate failed (u " << g.u_error << ", grad " << g.grad_error << "); no report written\n";
        return accuracy_error;
    }
    SweepResult res = run_sweep(c, o.n_override);
    json j = sweep_report(c, res);
    j["oracle_gate"] = {{"passed", gate_ok}, {"u_error", g.u_error}, {"grad_error", g.grad_error}};
    if (want_csv(c)) write_file(path(c, "sweep.csv"), to_csv(res.rows));
    if (want_json(c)) write_file(path(c, "report.json"), j.dump(2) + "\n");
    if (!c.plots.empty() && !res.rows.empty()) {
        std::vector<PlotSeries> series;
        for (const auto& p : c.plots) series.push_back(parse_plot(p));
        write_file(path(c, "plot.svg"), svg_plot(res.rows, series, c.name));
    }
    for (const auto& r : res.rows)
        std::cout << "eps " << format_double(r.eps) << ": max|grad u| " << r.max_grad_u << ", q gap " << r.q_gap
                  << ", c_eps " << r.c_eps << "\n";
    for (const auto& f : res.failures) std::cerr << "eps " << format_double(f.eps) << " failed (" << f.kind << "): " << f.message << "\n";
    return res.failures.empty() ? ok : accuracy_error;
}

int cmd_oracle(const Options& o) {
    ExperimentConfig c = load(o);
    double eps = c.eps.empty() ? 0.05 : c.eps.front();
    OracleCheck r = oracle_check(c.first.build(), c.second.build(), eps, c.background,
                                 resolution(c, o, eps), std::max(c.exterior_probes, 1), c.seed);
    json j = {{"name", c.name}, {"eps", eps}, {"probes", r.probes}, {"u_error", r.u_error},
              {"grad_error", r.grad_error}, {"midpoint_u_error", r.midpoint_u_error},
              {"midpoint_grad_error", r.midpoint_grad_error}, {"max_terms", r.max_terms}};
    emit(c, "oracle",
         to_csv({"eps", "probes", "u_error", "grad_error", "midpoint_u_error", "midpoint_grad_error", "max_terms"},
                {{eps, double(r.probes), r.u_error, r.grad_error, r.midpoint_u_error, r.midpoint_grad_error,
                  double(r.max_terms)}}),
         j);
    std::cout << "oracle: relative error u " << r.u_error << ", grad u " << r.grad_error << " at " << r.probes << " probes\n";
    return r.u_error <= 1e-6 && r.grad_error <= 1e-6 ? ok : accuracy_error;
}

int cmd_verify(const Options& o) {
    unsigned seed = o.seed >= 0 ? unsigned(o.seed) : 1;
    std::string out = o.out;
    if (!o.config.empty()) {
        ExperimentConfig c = load(o);
        seed = c.seed;
        if (out.empty()) out = c.out_dir;
    }
    int failed = 0;
    json j = json::array();
    run_acceptance(seed, [&](const CriterionResult& r) {
        std::cout << format_line(r) << std::endl;
        failed += !r.pass;
        j.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    });
    if (!out.empty()) write_file((std::filesystem::path(out) / "acceptance.json").string(), j.dump(2) + "\n");
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << "\n";
    return failed ? accuracy_error : ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient blow-up between close-to-touching inclusions: boundary integral solver and sweeps"};
    app.require_subcommand(1);
    Options o;
    auto add = [&](const char* name, const char* help, bool config_required) {
        CLI::App* s = app.add_subcommand(name, help);
        auto* opt = s->add_option("--config", o.config, "YAML experiment file");
        if (config_required) opt->required();
        s->add_option("--out", o.out, "output directory (overrides output.dir)");
        s->add_option("--format", o.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
        s->add_option("--plot", o.plots, "COLX:COLY, log-log series for plot.svg (repeatable)");
        s->add_option("--n-override", o.n_override, "nodes per curve, replacing the resolution policy");
        s->add_option("--seed", o.seed, "random seed for probes and test densities");
        return s;
    };
    auto* spec = add("spectrum", "eigenvalues of the discrete Neumann-Poincare operator per eps", true);
    auto* qfun = add("qfun", "singular function q: gap, predictor and envelope checks per eps", true);
    auto* solve = add("solve", "full decomposition at the first eps", true);
    auto* sweep = add("sweep", "sweep table, rate fits and plots", true);
    auto* oracle = add("oracle", "cross-check against the image series for two disks", true);
    auto* verify = add("verify", "run the acceptance suite", false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }
    try {
        if (*spec) return cmd_spectrum(o);
        if (*qfun) return cmd_qfun(o);
        if (*solve) return cmd_solve(o);
        if (*sweep) return cmd_sweep(o);
        if (*oracle) return cmd_oracle(o);
        if (*verify) return cmd_verify(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return io_error;
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy failure: " << e.what() << "\n";
        return accuracy_error;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return accuracy_error;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return accuracy_error;
    }
    return ok;
}
