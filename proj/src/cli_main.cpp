// cproj-lab: batch driver over the chart laboratory. Subcommands parse a
// JSON construct tree, run a verification suite, and emit a versioned JSON
// report; the process exits 0 exactly when every check passes. Module
// errors are recorded as failed checks, never as crashes.
#include "cprojlab/batch.hpp"
#include "cprojlab/catalog.hpp"
#include "cprojlab/chart.hpp"
#include "cprojlab/conify.hpp"
#include "cprojlab/cproj.hpp"
#include "cprojlab/holonomy.hpp"
#include "cprojlab/jplanar.hpp"
#include "cprojlab/kahler.hpp"
#include "cprojlab/mobility.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace cpl;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* k_schema = "cproj-lab/1";

struct check_row {
    std::string name;
    double tol = 0.0;
    bool above = false; // pass when the residual exceeds tol instead
    std::function<double()> body;
    // filled by the runner
    double residual = 0.0;
    bool has_residual = false;
    bool pass = false;
    std::string err;
};

void run_rows(std::vector<check_row>& rows) {
    parallel_for((int)rows.size(), [&](int i) {
        check_row& r = rows[i];
        try {
            r.residual = r.body();
            r.has_residual = true;
            r.pass = r.above ? r.residual > r.tol : r.residual <= r.tol;
        } catch (const error& e) {
            r.err = e.what();
        } catch (const std::exception& e) {
            r.err = e.what();
        }
    });
}

ordered_json rows_to_json(const std::vector<check_row>& rows) {
    ordered_json arr = ordered_json::array();
    for (const check_row& r : rows) {
        ordered_json c;
        c["name"] = r.name;
        if (r.has_residual)
            c["max_residual"] = r.residual;
        else
            c["max_residual"] = nullptr;
        c["tolerance"] = r.tol;
        if (r.above) c["require"] = "above";
        if (!r.err.empty()) c["error"] = r.err;
        c["pass"] = r.pass;
        arr.push_back(c);
    }
    return arr;
}

bool all_pass(const std::vector<check_row>& rows) {
    for (const check_row& r : rows)
        if (!r.pass) return false;
    return true;
}

int emit(const ordered_json& report, const std::string& out_path) {
    std::string text = report.dump(2);
    text += "\n";
    std::fputs(text.c_str(), stdout);
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        f << text;
    }
    return report.value("pass", false) ? 0 : 1;
}

ordered_json load_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw error(errc::schema_error, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    ordered_json j = ordered_json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) throw error(errc::schema_error, "'" + path + "' is not valid JSON");
    return j;
}

// shared verify options
struct run_options {
    std::string file;
    std::string suite = "all";
    int points = 12;
    int seed = 1;
    int loops = 6;
    int trials = 4;
    int jobs = 0;
    double tol_scale = 1.0;
    std::string out;
};

double max_abs_vals(const std::vector<double>& v) {
    double r = 0.0;
    for (double x : v) r = std::max(r, std::abs(x));
    return r;
}

double max_field_diff(const tensor_field& a, const tensor_field& b, const std::vector<point>& pts) {
    double worst = 0.0;
    for (const point& p : pts) {
        std::vector<double> va = values_of(a.at(p, 0)), vb = values_of(b.at(p, 0));
        for (size_t i = 0; i < va.size(); i++) worst = std::max(worst, std::abs(va[i] - vb[i]));
    }
    return worst;
}

double ricci_max_abs(const tensor_field& g, const point& p) {
    int m = g.dim;
    std::vector<double> R = riemann_vals(g.at(p, 2), m);
    double worst = 0.0;
    for (int a = 0; a < m; a++)
        for (int b = 0; b < m; b++) {
            double s = 0.0;
            for (int i = 0; i < m; i++) s += R[((i * m + b) * m + i) * m + a];
            worst = std::max(worst, std::abs(s));
        }
    return worst;
}

// deterministic non geodesic probe curve inside the domain
jplanar_curve wiggle_curve(const example& e, int steps = 240) {
    int m = e.dim;
    jplanar_curve c;
    c.dt = 2.0 / steps;
    for (int s = 0; s <= steps; s++) {
        double t = s * c.dt;
        point x(m), v(m);
        for (int i = 0; i < m; i++) {
            double mid = 0.5 * (e.domain.lo[i] + e.domain.hi[i]);
            double amp = 0.35 * 0.5 * (e.domain.hi[i] - e.domain.lo[i]);
            double f = 1.0 + (i % 3), ph = 0.3 * i;
            x[i] = mid + amp * std::sin(f * t + ph);
            v[i] = amp * f * std::cos(f * t + ph);
        }
        c.samples.push_back(x);
        c.velocities.push_back(v);
    }
    return c;
}

// rescale an Einstein base so the cone construction turns Ricci flat
example normalized_base(const example& e) {
    double target = 4.0 * e.n * (e.n + 1);
    if (e.einstein && std::isfinite(e.scal) && e.scal > 1e-12 &&
        std::abs(e.scal - target) > 1e-9)
        return rescale_example(e, e.scal / target);
    return e;
}

void add_kahler_checks(std::vector<check_row>& rows, const std::shared_ptr<example>& e,
                       const std::shared_ptr<std::vector<point>>& pts, double ts) {
    rows.push_back({"kahler identities", 1e-7 * ts, false, [e, pts] {
                        double worst = 0.0;
                        for (const point& p : *pts)
                            worst = std::max(worst, kahler_residuals(e->K, p).worst());
                        return worst;
                    }});
    if (e->einstein)
        rows.push_back({"einstein constant", 1e-6 * ts, false, [e, pts] {
                            int m = e->dim;
                            double worst = 0.0;
                            for (const point& p : *pts)
                                worst = std::max(
                                    worst, einstein_residual(e->K.g.at(p, 2), m).residual);
                            return worst;
                        }});
    if (std::isfinite(e->hol_c))
        rows.push_back({"holomorphic curvature", 1e-6 * ts, false, [e, pts] {
                            int m = e->dim;
                            double worst = 0.0;
                            for (const point& p : *pts) {
                                hol_curv_fit fit = holomorphic_curvature_residual(
                                    e->K.g.at(p, 2), e->K.J.at(p, 0), m);
                                worst = std::max(worst, fit.residual);
                                worst = std::max(worst, std::abs(fit.c - e->hol_c));
                            }
                            return worst;
                        }});
    rows.push_back({"geodesic energy drift", 1e-7 * ts, false, [e] {
                        int m = e->dim;
                        point c = e->domain.center(), v(m, 0.0);
                        v[0] = 0.2 * (e->domain.hi[0] - e->domain.lo[0]);
                        return geodesic_shoot(e->K.g, c, v, 0.5, 2000).energy_drift;
                    }});
}

void add_cproj_checks(std::vector<check_row>& rows, const std::shared_ptr<example>& e,
                      const std::shared_ptr<std::vector<point>>& pts, double ts) {
    for (size_t si = 0; si < e->solutions.size(); si++) {
        const std::string tag = e->solutions[si].tag;
        rows.push_back({"solution " + tag + " system", 1e-6 * ts, false, [e, pts, si] {
                            const csolution& s = e->solutions[si];
                            return mobility_residual(e->K, s.A, s.lambda, *pts);
                        }});
        rows.push_back({"solution " + tag + " trace identity", 1e-6 * ts, false, [e, pts, si] {
                            const csolution& s = e->solutions[si];
                            return max_field_diff(lambda_from_A(e->K, s.A), s.lambda, *pts);
                        }});
        if (std::isfinite(e->solutions[si].B) && e->solutions[si].mu.eval)
            rows.push_back({"solution " + tag + " triple", 1e-6 * ts, false, [e, pts, si] {
                                return triple_residual(e->K, e->solutions[si], *pts).worst();
                            }});
    }
}

void add_conify_checks(std::vector<check_row>& rows, const std::shared_ptr<example>& e,
                       const run_options& opt, double ts) {
    auto base = std::make_shared<example>(normalized_base(*e));
    rows.push_back({"cone kahler identities", 1e-7 * ts, false, [base, opt] {
                        example cone = conify_example(*base);
                        double worst = 0.0;
                        for (const point& p :
                             halton_points(cone.domain, opt.points, opt.seed))
                            worst = std::max(worst, kahler_residuals(cone.K, p).worst());
                        return worst;
                    }});
    rows.push_back({"cone closed forms", 1e-6 * ts, false, [base, opt] {
                        example cone = conify_example(*base);
                        double worst = 0.0;
                        for (const point& p : halton_points(cone.domain, 3, opt.seed))
                            worst = std::max(worst,
                                             cone_curvature_closed_form(*base, p).worst());
                        return worst;
                    }});
    double target = 4.0 * base->n * (base->n + 1);
    if (base->einstein && std::isfinite(base->scal) && std::abs(base->scal - target) < 1e-9)
        rows.push_back({"ricci flat cone", 1e-6 * ts, false, [base, opt] {
                            example cone = conify_example(*base);
                            double worst = 0.0;
                            for (const point& p : halton_points(cone.domain, 3, opt.seed))
                                worst = std::max(worst, ricci_max_abs(cone.K.g, p));
                            return worst;
                        }});
    int lifted = 0;
    for (size_t si = 0; si < base->solutions.size() && lifted < 2; si++) {
        const csolution& s = base->solutions[si];
        if (!std::isfinite(s.B) || std::abs(s.B + 1.0) > 1e-9 || !s.mu.eval) continue;
        lifted++;
        rows.push_back({"sasaki system " + s.tag, 1e-6 * ts, false, [base, opt, si] {
                            double worst = 0.0;
                            for (const point& p :
                                 halton_points(base->domain.shrunk(0.8), 3, opt.seed))
                                worst = std::max(
                                    worst,
                                    sasaki_system_residual(*base, base->solutions[si], p)
                                        .worst());
                            return worst;
                        }});
        rows.push_back({"parallel lift " + s.tag, 1e-6 * ts, false, [base, opt, si] {
                            example cone = conify_example(*base);
                            kahler_structure Kc = conify_structure(base->K);
                            tensor_field Ahat = lift_solution(*base, base->solutions[si]);
                            tensor_field nab = covd(Ahat, Kc.g);
                            double worst = 0.0;
                            for (const point& p : halton_points(cone.domain, 3, opt.seed))
                                worst = std::max(worst, max_abs_vals(values_of(nab.at(p, 0))));
                            return worst;
                        }});
    }
}

void add_holonomy_checks(std::vector<check_row>& rows, const std::shared_ptr<example>& e,
                         const holonomy_config& cfg,
                         const std::shared_ptr<ordered_json>& extra) {
    rows.push_back({"holonomy stabilized", 0.5, false, [e, cfg, extra] {
                        parallel_report rep = parallel_tensor_dim(e->K, e->domain, cfg);
                        std::vector<int> blocks =
                            block_decomposition(rep.sample, e->K);
                        ordered_json h;
                        h["dimension"] = rep.dimension;
                        h["stages"] = rep.stages;
                        h["span_dims"] = rep.span_dims;
                        h["dims"] = rep.dims;
                        h["blocks"] = blocks;
                        h["indefinite"] = rep.sample.indefinite;
                        (*extra)["holonomy"] = h;
                        int sum = 0;
                        for (int b : blocks) sum += b;
                        double bad = std::abs(sum - e->dim);
                        if (rep.dimension < 1) bad += 1.0;
                        return bad;
                    }});
}

void add_mobility_checks(std::vector<check_row>& rows, const std::shared_ptr<example>& e,
                         const std::shared_ptr<ordered_json>& extra) {
    if (e->n < 2) return;
    int n = e->n;
    rows.push_back({"mobility list structure", 0.5, false, [n, extra] {
                        mobility_list gen = enumerate_mobility(n, mobility_mode::general);
                        mobility_list ein = enumerate_mobility(n, mobility_mode::einstein);
                        (*extra)["mobility"] = {{"n", n},
                                                {"general", gen.values},
                                                {"einstein", ein.values}};
                        double bad = 0.0;
                        if (gen.values.back() != (n + 1) * (n + 1)) bad += 1.0;
                        if (gen.values[gen.values.size() - 2] != n * n - 2 * n + 2) bad += 1.0;
                        std::set<int> g(gen.values.begin(), gen.values.end());
                        for (int v : ein.values)
                            if (!g.count(v)) bad += 1.0;
                        return bad;
                    }});
}

void add_jplanar_checks(std::vector<check_row>& rows, const std::shared_ptr<example>& e,
                        const run_options& opt, double ts) {
    rows.push_back({"geodesics are planar", 1e-5 * ts, false, [e, opt] {
                        return equivalence_probe(e->K, e->K.g, e->domain, opt.trials,
                                                 (unsigned)opt.seed)
                            .worst;
                    }});
    if (e->dim > 2)
        rows.push_back({"generic curve is detected", 1e-2, true, [e] {
                            return jplanar_residual(e->K, wiggle_curve(*e)).residual;
                        }});
}

ordered_json verify_report(const run_options& opt, const ordered_json& manifold,
                           const std::string& command) {
    auto e = std::make_shared<example>(example_from_spec(manifold.dump()));
    auto pts = std::make_shared<std::vector<point>>(
        halton_points(e->domain, opt.points, opt.seed));
    auto extra = std::make_shared<ordered_json>(ordered_json::object());
    double ts = opt.tol_scale;

    std::vector<check_row> rows;
    bool all = opt.suite == "all";
    if (all || opt.suite == "kahler") add_kahler_checks(rows, e, pts, ts);
    if (all || opt.suite == "cproj") add_cproj_checks(rows, e, pts, ts);
    if ((all && e->K.has_tau()) || opt.suite == "conify") add_conify_checks(rows, e, opt, ts);
    if (all || opt.suite == "holonomy") {
        holonomy_config cfg;
        cfg.n_loops = opt.loops;
        cfg.seed = (unsigned)opt.seed;
        add_holonomy_checks(rows, e, cfg, extra);
    }
    if (all || opt.suite == "mobility") add_mobility_checks(rows, e, extra);
    if (all || opt.suite == "jplanar") add_jplanar_checks(rows, e, opt, ts);
    run_rows(rows);

    ordered_json rep;
    rep["schema"] = k_schema;
    rep["command"] = command;
    rep["config"] = {{"manifold", manifold}, {"suite", opt.suite}, {"points", opt.points},
                     {"seed", opt.seed},     {"loops", opt.loops}, {"trials", opt.trials},
                     {"jobs", batch_jobs()}, {"tol_scale", opt.tol_scale}};
    rep["example"] = {{"name", e->name}, {"n", e->n}, {"dim", e->dim}};
    for (auto& kv : extra->items()) rep[kv.key()] = kv.value();
    rep["checks"] = rows_to_json(rows);
    rep["pass"] = all_pass(rows);
    return rep;
}

ordered_json solution_to_json(const example& e, const csolution& s) {
    ordered_json j;
    j["tag"] = s.tag;
    if (std::isfinite(s.B))
        j["B"] = s.B;
    else
        j["B"] = nullptr;
    j["mu_zero"] = s.mu_zero;
    point c = e.domain.center();
    j["A_at_center"] = values_of(s.A.at(c, 0));
    j["lambda_at_center"] = values_of(s.lambda.at(c, 0));
    if (s.mu.eval) j["mu_at_center"] = values_of(s.mu.at(c, 0))[0];
    return j;
}

ordered_json example_to_json(const example& e) {
    ordered_json j;
    j["name"] = e.name;
    j["n"] = e.n;
    j["dim"] = e.dim;
    j["domain"] = {{"lo", e.domain.lo}, {"hi", e.domain.hi}};
    j["einstein"] = e.einstein;
    if (std::isfinite(e.scal))
        j["scal"] = e.scal;
    else
        j["scal"] = nullptr;
    if (std::isfinite(e.hol_c))
        j["hol_c"] = e.hol_c;
    else
        j["hol_c"] = nullptr;
    j["has_potential"] = e.K.has_tau();
    j["notes"] = e.notes;
    ordered_json sols = ordered_json::array();
    for (const csolution& s : e.solutions) sols.push_back(solution_to_json(e, s));
    j["solutions"] = sols;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chart laboratory for c-projectively equivalent Kahler metrics"};
    app.require_subcommand(1);

    run_options opt;

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite on a manifold");
    verify->add_option("file", opt.file, "JSON construct tree")->required();
    verify->add_option("--suite", opt.suite, "kahler|cproj|conify|holonomy|mobility|jplanar|all")
        ->check(CLI::IsMember(
            {"kahler", "cproj", "conify", "holonomy", "mobility", "jplanar", "all"}));
    verify->add_option("--points", opt.points, "sample point count")->check(CLI::PositiveNumber);
    verify->add_option("--seed", opt.seed, "sampling seed");
    verify->add_option("--loops", opt.loops, "holonomy loop count")->check(CLI::PositiveNumber);
    verify->add_option("--trials", opt.trials, "probe trial count")->check(CLI::PositiveNumber);
    verify->add_option("--jobs", opt.jobs, "worker cap (also CPROJ_LAB_JOBS)");
    verify->add_option("--tol-scale", opt.tol_scale, "scale all tolerances")
        ->check(CLI::PositiveNumber);
    verify->add_option("--out", opt.out, "also write the report to a file");

    CLI::App* conify_cmd = app.add_subcommand("conify", "conification checks on a manifold");
    conify_cmd->add_option("file", opt.file, "JSON construct tree")->required();
    conify_cmd->add_option("--points", opt.points, "sample point count")
        ->check(CLI::PositiveNumber);
    conify_cmd->add_option("--seed", opt.seed, "sampling seed");
    conify_cmd->add_option("--jobs", opt.jobs, "worker cap");
    conify_cmd->add_option("--tol-scale", opt.tol_scale, "scale all tolerances")
        ->check(CLI::PositiveNumber);
    conify_cmd->add_option("--out", opt.out, "also write the report to a file");

    CLI::App* hol = app.add_subcommand("holonomy-dim", "parallel tensor dimension of a manifold");
    hol->add_option("file", opt.file, "JSON construct tree")->required();
    int hol_loops = 8;
    holonomy_config hcfg;
    hol->add_option("--loops", hol_loops, "loops in the first stage")->check(CLI::PositiveNumber);
    hol->add_option("--seed", opt.seed, "rng seed");
    hol->add_option("--delta-span", hcfg.delta_span, "relative SVD cut for the span");
    hol->add_option("--delta-null", hcfg.delta_null, "relative SVD cut for null spaces");
    hol->add_option("--sigma-floor", hcfg.sigma_floor, "absolute noise floor");
    hol->add_option("--steps-per-unit", hcfg.steps_per_unit, "transport resolution");
    hol->add_option("--jobs", opt.jobs, "worker cap");
    hol->add_option("--out", opt.out, "also write the report to a file");

    CLI::App* mob = app.add_subcommand("mobility", "value lists and realizations");
    int mob_n = 2;
    std::string mob_mode = "general", mob_realize;
    mob->add_option("--n", mob_n, "complex dimension")->required()->check(CLI::Range(2, 64));
    mob->add_option("--mode", mob_mode,
                    "general|einstein|affine|essential_general|essential_einstein");
    mob->add_option("--realize", mob_realize, "k,l pair to build and measure");
    mob->add_option("--seed", opt.seed, "rng seed for the measurement");
    mob->add_option("--jobs", opt.jobs, "worker cap");
    mob->add_option("--out", opt.out, "also write the report to a file");

    CLI::App* jp = app.add_subcommand("jplanar", "J-planar curve tools");
    CLI::App* probe = jp->add_subcommand("probe", "geodesic exchange residuals");
    std::string csv_path;
    probe->add_option("file", opt.file, "JSON construct tree")->required();
    probe->add_option("--trials", opt.trials, "trials per direction")->check(CLI::PositiveNumber);
    probe->add_option("--seed", opt.seed, "rng seed");
    probe->add_option("--csv", csv_path, "write samples of one J-planar curve as CSV");
    probe->add_option("--jobs", opt.jobs, "worker cap");
    probe->add_option("--out", opt.out, "also write the report to a file");

    CLI::App* ex = app.add_subcommand("example", "catalog access");
    CLI::App* ex_list = ex->add_subcommand("list", "known construct keys");
    CLI::App* ex_dump = ex->add_subcommand("dump", "default instance of a key");
    std::string dump_key;
    int dump_n = 1;
    ex_dump->add_option("key", dump_key, "catalog key")->required();
    ex_dump->add_option("--n", dump_n, "complex dimension where applicable")
        ->check(CLI::Range(1, 6));

    CLI11_PARSE(app, argc, argv);
    if (opt.jobs > 0) set_batch_jobs(opt.jobs);

    try {
        if (verify->parsed()) {
            ordered_json manifold = load_json_file(opt.file);
            return emit(verify_report(opt, manifold, "verify"), opt.out);
        }

        if (conify_cmd->parsed()) {
            ordered_json manifold = load_json_file(opt.file);
            run_options copt = opt;
            copt.suite = "conify";
            return emit(verify_report(copt, manifold, "conify"), opt.out);
        }

        if (hol->parsed()) {
            ordered_json manifold = load_json_file(opt.file);
            auto e = std::make_shared<example>(example_from_spec(manifold.dump()));
            hcfg.n_loops = hol_loops;
            hcfg.seed = (unsigned)opt.seed;
            auto extra = std::make_shared<ordered_json>(ordered_json::object());
            std::vector<check_row> rows;
            add_holonomy_checks(rows, e, hcfg, extra);
            run_rows(rows);
            ordered_json rep;
            rep["schema"] = k_schema;
            rep["command"] = "holonomy-dim";
            rep["config"] = {{"manifold", manifold},
                             {"loops", hol_loops},
                             {"seed", opt.seed},
                             {"delta_span", hcfg.delta_span},
                             {"delta_null", hcfg.delta_null},
                             {"sigma_floor", hcfg.sigma_floor},
                             {"steps_per_unit", hcfg.steps_per_unit},
                             {"jobs", batch_jobs()}};
            rep["example"] = {{"name", e->name}, {"n", e->n}, {"dim", e->dim}};
            for (auto& kv : extra->items()) rep[kv.key()] = kv.value();
            rep["checks"] = rows_to_json(rows);
            rep["pass"] = all_pass(rows);
            return emit(rep, opt.out);
        }

        if (mob->parsed()) {
            mobility_mode mode = mobility_mode_from(mob_mode);
            mobility_list list = enumerate_mobility(mob_n, mode);
            ordered_json rep;
            rep["schema"] = k_schema;
            rep["command"] = "mobility";
            rep["config"] = {{"n", mob_n},
                             {"mode", mob_mode},
                             {"realize", mob_realize.empty() ? ordered_json(nullptr)
                                                             : ordered_json(mob_realize)},
                             {"seed", opt.seed},
                             {"jobs", batch_jobs()}};
            rep["values"] = list.values;
            rep["attainable"] = list.attainable;
            std::vector<check_row> rows;
            if (!mob_realize.empty()) {
                int k = -1, l = -1;
                if (std::sscanf(mob_realize.c_str(), "%d,%d", &k, &l) != 2)
                    throw error(errc::bad_params, "--realize wants k,l");
                bool einstein = mode == mobility_mode::einstein;
                if (mode != mobility_mode::general && mode != mobility_mode::einstein)
                    throw error(errc::bad_params,
                                "realizations exist for general and einstein modes");
                realization_plan plan = make_realization_plan(mob_n, k, l, einstein);
                rep["plan"] = {{"k", plan.k},
                               {"l", plan.ell},
                               {"factor_half_dims", plan.factor_half_dims},
                               {"expected", plan.expected()}};
                rows.push_back({"realized dimension", 0.5, false, [plan, &rep, seed = opt.seed] {
                                    holonomy_config cfg;
                                    cfg.seed = (unsigned)seed;
                                    realization_report r = realize_and_verify(plan, cfg);
                                    rep["measured"] = r.measured;
                                    return std::abs((double)r.measured - r.expected);
                                }});
            }
            run_rows(rows);
            rep["checks"] = rows_to_json(rows);
            rep["pass"] = all_pass(rows);
            return emit(rep, opt.out);
        }

        if (probe->parsed()) {
            ordered_json manifold = load_json_file(opt.file);
            auto e = std::make_shared<example>(example_from_spec(manifold.dump()));
            int m = e->dim;

            // prefer a genuinely different metric from a nondegenerate solution
            tensor_field gt = e->K.g;
            std::string pair_name = "self";
            point c = e->domain.center();
            for (const csolution& s : e->solutions) {
                Eigen::MatrixXd G(m, m), A(m, m);
                std::vector<double> gv = values_of(e->K.g.at(c, 0)),
                                    av = values_of(s.A.at(c, 0));
                for (int i = 0; i < m; i++)
                    for (int j = 0; j < m; j++) {
                        G(i, j) = gv[i * m + j];
                        A(i, j) = av[i * m + j];
                    }
                Eigen::MatrixXd F = G.partialPivLu().solve(A);
                double d = F.determinant();
                bool proportional = (F - F(0, 0) * Eigen::MatrixXd::Identity(m, m)).norm() <
                                    1e-9 * std::max(1.0, F.norm());
                if (std::abs(d) > 1e-6 && !proportional) {
                    gt = metric_from_solution(e->K, s.A, {c});
                    pair_name = "solution " + s.tag;
                    break;
                }
            }

            equivalence_report er =
                equivalence_probe(e->K, gt, e->domain, opt.trials, (unsigned)opt.seed);
            std::vector<check_row> rows;
            rows.push_back(
                {"probe worst residual", 1e-5, false, [&er] { return er.worst; }});
            run_rows(rows);

            if (!csv_path.empty()) {
                point p = e->domain.center(), X(m, 0.0);
                X[0] = 0.2 * (e->domain.hi[0] - e->domain.lo[0]);
                jplanar_curve cur = integrate_jplanar_clipped(e->K, e->domain, p, X, {0.0},
                                                              {0.5}, 1.0, 200);
                std::ofstream f(csv_path, std::ios::binary);
                f << "t";
                for (int i = 0; i < m; i++) f << ",x" << i;
                for (int i = 0; i < m; i++) f << ",v" << i;
                f << "\n";
                for (int s = 0; s < cur.size(); s++) {
                    f << s * cur.dt;
                    for (int i = 0; i < m; i++) f << "," << cur.samples[s][i];
                    for (int i = 0; i < m; i++) f << "," << cur.velocities[s][i];
                    f << "\n";
                }
            }

            ordered_json rep;
            rep["schema"] = k_schema;
            rep["command"] = "jplanar probe";
            rep["config"] = {{"manifold", manifold},
                             {"trials", opt.trials},
                             {"seed", opt.seed},
                             {"jobs", batch_jobs()}};
            rep["example"] = {{"name", e->name}, {"n", e->n}, {"dim", e->dim}};
            rep["probe"] = {{"pair", pair_name},
                            {"forward", er.forward},
                            {"backward", er.backward},
                            {"worst", er.worst}};
            rep["checks"] = rows_to_json(rows);
            rep["pass"] = all_pass(rows);
            return emit(rep, opt.out);
        }

        if (ex_list->parsed()) {
            ordered_json rep;
            rep["schema"] = k_schema;
            rep["command"] = "example list";
            rep["keys"] = catalog_keys();
            rep["pass"] = true;
            return emit(rep, "");
        }

        if (ex_dump->parsed()) {
            example e;
            if (dump_key == "flat")
                e = make_flat(dump_n);
            else if (dump_key == "fubini_study")
                e = make_fubini_study(dump_n);
            else if (dump_key == "ricciflat4d")
                e = make_ricciflat4d();
            else if (dump_key == "product")
                e = make_product(make_flat(1), make_fubini_study(1));
            else if (dump_key == "conify")
                e = conify_example(make_fubini_study(dump_n));
            else
                throw error(errc::unknown_key, "unknown catalog key '" + dump_key + "'");
            ordered_json rep;
            rep["schema"] = k_schema;
            rep["command"] = "example dump";
            rep["example"] = example_to_json(e);
            rep["pass"] = true;
            return emit(rep, "");
        }
    } catch (const error& e) {
        ordered_json rep;
        rep["schema"] = k_schema;
        rep["command"] = "error";
        rep["checks"] = ordered_json::array(
            {{{"name", "run"}, {"max_residual", nullptr}, {"tolerance", 0.0},
              {"error", e.what()}, {"pass", false}}});
        rep["pass"] = false;
        return emit(rep, opt.out);
    }
    return 1;
}
