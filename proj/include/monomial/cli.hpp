#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "monomial/dsl.hpp"
#include "monomial/emit.hpp"

namespace monomial::cli {

using emit::json;

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SolveConfig config(const std::optional<unsigned>& depth) {
    SolveConfig cfg;
    if (depth) {
        cfg.max_depth = *depth;
    } else if (const char* env = std::getenv("MONOMIAL_DEPTH")) {
        try {
            std::size_t used = 0;
            int v = std::stoi(env, &used);
            if (used != std::string(env).size() || v < 0) throw std::invalid_argument(env);
            cfg.max_depth = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("MONOMIAL_DEPTH must be a non-negative integer, got '") + env + "'");
        }
    }
    return cfg;
}

/// Smallest shift whose F has a rational root; else the smallest with nonconstant F; else any.
inline int choose_shift(const NormalizationReport& report) {
    if (report.candidates.empty()) throw NoDiagonalPart("no shift gives a nonzero diagonal part");
    for (const auto& c : report.candidates)
        if (c.rational_root_count > 0) return c.shift;
    for (const auto& c : report.candidates)
        if (c.f_degree > 0) return c.shift;
    return report.candidates.front().shift;
}

inline void print_json(std::ostream& out, const json& j) { out << j.dump() << "\n"; }

inline std::string describe_params(const catalog::Params& p) {
    std::string s;
    for (const auto& [k, v] : p) s += (s.empty() ? "" : ", ") + k + "=" + to_string(v);
    return s;
}

inline std::string format_double(double v) {
    if (!std::isfinite(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

// ---- subcommand bodies ----

inline int normal_form(const std::string& file, std::optional<int> shift, bool as_json, std::ostream& out) {
    LinearODE ode = dsl::parse_ode(read_file(file));
    NormalizationReport report = suggest_shift(ode);
    int s = shift ? *shift : choose_shift(report);
    OperatorSplit split = to_operator_form(ode, s);
    IndicialData roots = indicial_roots(split.F);
    if (as_json) {
        print_json(out, {{"split", emit::split_json(split)},
                         {"indicial", emit::indicial_json(roots)},
                         {"candidates", emit::report_json(report)}});
        return 0;
    }
    out << split << "\n";
    out << "indicial roots:";
    for (const auto& r : roots.rational_roots) out << " " << r;
    if (roots.rational_roots.empty()) out << " (none rational)";
    out << "\n";
    if (roots.irrational_root_report) out << "remaining: " << roots.irrational_root_report->description << "\n";
    out << "shift candidates:\n";
    for (const auto& c : report.candidates)
        out << "  shift " << c.shift << ": deg F = " << c.f_degree << ", rational roots = " << c.rational_root_count
            << (c.full ? ", full" : "") << "\n";
    return 0;
}

inline void print_solution(std::ostream& out, const Solution& sol) {
    out << "lambda = " << sol.lambda << ": " << sol.series << "  ["
        << (sol.terminated ? "terminated" : "truncated") << ", depth " << sol.depth_used << "]\n";
}

inline int solve(const std::string& file, const std::optional<std::string>& lambda, std::optional<unsigned> depth,
                 std::optional<int> shift, bool source, bool as_json, std::ostream& out, std::ostream& err) {
    LinearODE ode = dsl::parse_ode(read_file(file));
    if (source && !ode.source()) throw InvalidArgument("--source given but the equation has no source term");
    SolveConfig cfg = config(depth);
    int s = shift ? *shift : choose_shift(suggest_shift(ode));
    OperatorSplit split = to_operator_form(ode, s);

    if (ode.source()) {
        if (lambda) throw InvalidArgument("--lambda does not apply to an equation with a source");
        Solution sol = solve_with_source(split, cfg);
        if (as_json) print_json(out, {{"solutions", json::array({emit::solution_json(sol)})}});
        else {
            out << split << "\n";
            out << "particular ";
            print_solution(out, sol);
        }
        return 0;
    }

    if (lambda) {
        Solution sol = solve_homogeneous(split, parse_rational(*lambda), cfg);
        if (as_json) print_json(out, {{"solutions", json::array({emit::solution_json(sol)})}});
        else {
            out << split << "\n";
            print_solution(out, sol);
        }
        return 0;
    }

    SolveAllResult all = solve_all(split, cfg);
    const auto& irr = all.indicial.irrational_root_report;
    if (all.roots.empty()) {
        double re = 0, im = 0, disc = NAN;
        if (irr && !irr->approximations.empty()) {
            re = irr->approximations.front().real();
            im = irr->approximations.front().imag();
        }
        if (irr && irr->discriminant) disc = to_double(*irr->discriminant);
        throw NonRationalIndicialRoot(irr ? irr->description : "F has no roots", disc, re, im);
    }
    std::string first_error, first_message;
    bool any_ok = false;
    json sols = json::array();
    if (!as_json) out << split << "\n";
    for (const auto& r : all.roots) {
        if (r.solution) {
            any_ok = true;
            if (as_json) sols.push_back(emit::solution_json(*r.solution));
            else print_solution(out, *r.solution);
        } else {
            if (first_error.empty()) {
                first_error = r.error_name;
                first_message = r.error_message;
            }
            if (as_json) sols.push_back({{"lambda", emit::rational_string(r.lambda)}, {"error", r.error_name}});
            else out << "lambda = " << r.lambda << ": " << r.error_name << " (" << r.error_message << ")\n";
        }
    }
    if (as_json) {
        json doc{{"solutions", sols}};
        if (irr) doc["irrational_roots"] = irr->description;
        print_json(out, doc);
    } else if (irr) {
        out << "not solved (irrational roots): " << irr->description << "\n";
    }
    if (!any_ok) {
        err << first_error << ": " << first_message << "\n";
        return 2;
    }
    return 0;
}

inline int catalog_verify(const std::string& family, std::optional<unsigned> n, const std::vector<std::string>& kvs,
                          std::optional<unsigned> depth, bool as_json, std::ostream& out, std::ostream& err) {
    catalog::Params params;
    if (n) params["n"] = *n;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw InvalidArgument("--param expects k=v, got '" + kv + "'");
        params[kv.substr(0, eq)] = parse_rational(kv.substr(eq + 1));
    }
    catalog::ComparisonReport r = catalog::compare(family, params, config(depth));
    if (as_json) {
        print_json(out, emit::comparison_json(r));
    } else {
        out << "family: " << r.name << "\n";
        out << "params: " << describe_params(r.params) << "\n";
        out << "route: " << r.route << "\n";
        if (!r.direct_error_name.empty()) out << "direct route: " << r.direct_error_name << "\n";
        out << "terms compared: " << r.terms_compared << "\n";
        out << "match: " << (r.match ? "true" : "false") << "\n";
        if (r.first_mismatch)
            out << "first mismatch: x^" << r.first_mismatch->exponent << " expected " << r.first_mismatch->expected
                << " got " << r.first_mismatch->got << "\n";
    }
    if (!r.error_name.empty()) {
        err << r.error_name << ": " << r.error_message << "\n";
        return 2;
    }
    if (!r.match) {
        err << "Mismatch: cascade disagrees with the closed form\n";
        return 2;
    }
    return 0;
}

inline int catalog_list(bool as_json, std::ostream& out) {
    json arr = json::array();
    for (const auto& f : catalog::families()) {
        if (as_json) {
            arr.push_back({{"name", f.name}, {"required", f.required}, {"optional", f.optional},
                           {"terminating", f.terminating}, {"source", f.has_source}});
            continue;
        }
        out << std::left << std::setw(20) << f.name;
        std::string req;
        for (const auto& k : f.required) req += (req.empty() ? "" : ",") + k;
        out << " params: " << req;
        if (!f.optional.empty()) {
            std::string opt;
            for (const auto& k : f.optional) opt += (opt.empty() ? "" : ",") + k;
            out << " [" << opt << "]";
        }
        out << "\n";
    }
    if (as_json) print_json(out, {{"families", arr}});
    return 0;
}

inline Rational omega_or_default(const std::optional<std::string>& omega, const Rational& eps2) {
    return omega ? parse_rational(*omega) : -eps2 / 2;
}

inline int heun_scan(const std::string& eps2_s, const std::optional<std::string>& omega_s, int nmax,
                     std::optional<int> m, bool as_json, std::ostream& out) {
    Rational eps2 = parse_rational(eps2_s);
    Rational omega = omega_or_default(omega_s, eps2);
    auto rows = heun::termination_scan(eps2, omega, nmax, m);
    if (as_json) {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back(emit::scan_row_json(r));
        print_json(out, {{"eps2", emit::rational_string(eps2)}, {"omega", emit::rational_string(omega)}, {"rows", arr}});
        return 0;
    }
    out << "eps2 = " << eps2 << ", Omega = " << omega << "\n";
    out << std::left << std::setw(4) << "n" << std::setw(4) << "m" << std::setw(8) << "s" << std::setw(10) << "E/rho^2"
        << std::setw(14) << "normalizable" << std::setw(8) << "decay" << "f(x)\n";
    for (const auto& r : rows)
        out << std::left << std::setw(4) << r.n << std::setw(4) << r.m << std::setw(8) << to_string(r.s) << std::setw(10)
            << to_string(r.energy_ratio) << std::setw(14) << (r.normalizable ? "yes" : "no") << std::setw(8)
            << to_string(r.decay_exponent) << r.f_coeffs << "\n";
    if (rows.empty()) out << "(no terminating solutions)\n";
    return 0;
}

inline heun::ScanRow pick_row(const Rational& eps2, const Rational& omega, int n) {
    for (const auto& r : heun::termination_scan(eps2, omega, n))
        if (r.n == n) return r;
    throw InvalidArgument("no terminating solution with n = " + std::to_string(n));
}

inline int heun_wavefunction(int n, double rho, int samples, const std::string& eps2_s,
                             const std::optional<std::string>& omega_s, std::optional<double> ymax, bool as_json,
                             std::ostream& out) {
    if (rho <= 0) throw InvalidArgument("rho must be positive");
    if (samples < 2) throw InvalidArgument("samples must be at least 2");
    Rational eps2 = parse_rational(eps2_s);
    Rational omega = omega_or_default(omega_s, eps2);
    heun::ScanRow row = pick_row(eps2, omega, n);
    heun::QESSolution sol = heun::make_solution(row, rho, eps2);
    heun::HeunParams p{eps2, omega, row.s, rho};
    double top = ymax.value_or(10 / rho);
    json pts = json::array();
    if (!as_json) {
        out << "n = " << n << ", s = " << row.s << ", E = " << format_double(sol.E) << ", N = " << format_double(sol.norm)
            << "\n";
        out << std::left << std::setw(24) << "y" << "psi\n";
    }
    for (int i = 0; i < samples; ++i) {
        double y = top * i / (samples - 1);
        double psi = std::isnan(sol.norm) ? heun::raw_wavefunction(sol, y, rho, eps2) : heun::wavefunction(sol, y, p);
        if (as_json) pts.push_back({{"y", emit::float_json(y)}, {"psi", emit::float_json(psi)}});
        else out << std::left << std::setw(24) << format_double(y) << format_double(psi) << "\n";
    }
    if (as_json)
        print_json(out, {{"n", n}, {"s", emit::rational_string(row.s)}, {"rho", emit::float_json(rho)},
                         {"E", emit::float_json(sol.E)}, {"norm", emit::float_json(sol.norm)}, {"samples", pts}});
    return 0;
}

inline int heun_residual(int n, double rho, const std::string& eps2_s, const std::optional<std::string>& omega_s,
                         double ymin, double ymax, double step, double energy_shift, bool as_json, std::ostream& out) {
    if (rho <= 0) throw InvalidArgument("rho must be positive");
    if (step <= 0 || ymax <= ymin || ymin <= 0) throw InvalidArgument("need 0 < ymin < ymax and step > 0");
    Rational eps2 = parse_rational(eps2_s);
    Rational omega = omega_or_default(omega_s, eps2);
    heun::ScanRow row = pick_row(eps2, omega, n);
    heun::QESSolution sol = heun::make_solution(row, rho, eps2);
    sol.E += energy_shift;
    std::vector<double> grid;
    std::size_t count = static_cast<std::size_t>(std::floor((ymax - ymin) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) grid.push_back(ymin + step * static_cast<double>(i));
    double r = heun::schrodinger_residual(sol, {rho, eps2, omega}, grid);
    double peak = 0;
    heun::HeunParams p{eps2, omega, row.s, rho};
    for (double y : grid) peak = std::max(peak, std::abs(heun::wavefunction(sol, y, p)));
    if (as_json) {
        print_json(out, {{"n", n}, {"s", emit::rational_string(row.s)}, {"E", emit::float_json(sol.E)},
                         {"residual", emit::float_json(r)}, {"max_psi", emit::float_json(peak)}});
    } else {
        out << "n = " << n << ", s = " << row.s << ", E = " << format_double(sol.E) << "\n";
        out << "max |-psi'' + V psi - E psi| = " << format_double(r) << " (max |psi| = " << format_double(peak) << ")\n";
    }
    return 0;
}

} // namespace detail

/// Runs one CLI invocation (args exclude the program name). Exit codes:
/// 0 success, 1 input or usage error, 2 solver error.
inline int run_command(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Series solutions of linear ODEs by Euler-operator splitting", "monomial"};
    app.require_subcommand(1);
    bool as_json = false;
    std::optional<unsigned> depth;

    auto* nf = app.add_subcommand("normal-form", "Split x^s*(ODE) into F(D) + P");
    std::string nf_file;
    std::optional<int> nf_shift;
    nf->add_option("file", nf_file, "ODE file")->required();
    nf->add_option("--shift", nf_shift, "Power of x to multiply by");
    nf->add_flag("--json", as_json);

    auto* sv = app.add_subcommand("solve", "Series solutions by the operator cascade");
    std::string sv_file;
    std::optional<std::string> sv_lambda;
    std::optional<int> sv_shift;
    bool sv_source = false;
    sv->add_option("file", sv_file, "ODE file")->required();
    sv->add_option("--lambda", sv_lambda, "Indicial root p/q");
    sv->add_option("--depth", depth, "Cascade depth");
    sv->add_option("--shift", sv_shift, "Power of x to multiply by");
    sv->add_flag("--source", sv_source, "Solve the inhomogeneous equation");
    sv->add_flag("--json", as_json);

    auto* cat = app.add_subcommand("catalog", "Named solutions against closed forms");
    cat->require_subcommand(1);
    auto* verify = cat->add_subcommand("verify", "Compare cascade and closed form");
    std::string family;
    std::optional<unsigned> cat_n;
    std::vector<std::string> cat_params;
    verify->add_option("family", family, "Family name")->required();
    verify->add_option("--n", cat_n, "Degree");
    verify->add_option("--param", cat_params, "Parameter k=v (repeatable)");
    verify->add_option("--depth", depth, "Cascade depth");
    verify->add_flag("--json", as_json);
    auto* list = cat->add_subcommand("list", "List families");
    list->add_flag("--json", as_json);

    auto* heun = app.add_subcommand("heun", "Quasi-exactly solvable generalized Heun model");
    heun->require_subcommand(1);
    std::string eps2 = "1";
    std::optional<std::string> omega;
    auto* scan = heun->add_subcommand("scan", "Terminating polynomial solutions");
    int nmax = 4;
    std::optional<int> scan_m;
    scan->add_option("--eps2", eps2, "eps^2 as p/q")->required();
    scan->add_option("--omega", omega, "Omega as p/q (default -eps2/2)");
    scan->add_option("--nmax", nmax, "Largest n");
    scan->add_option("--m", scan_m, "Indicial root to scan");
    scan->add_flag("--json", as_json);

    auto* wf = heun->add_subcommand("wavefunction", "Sample the normalized wavefunction");
    int wf_n = 2, samples = 11;
    double rho = 1.0;
    std::optional<double> wf_ymax;
    wf->add_option("--n", wf_n, "Polynomial length")->required();
    wf->add_option("--rho", rho, "rho > 0")->required();
    wf->add_option("--samples", samples, "Number of sample points")->required();
    wf->add_option("--eps2", eps2, "eps^2 as p/q");
    wf->add_option("--omega", omega, "Omega as p/q");
    wf->add_option("--ymax", wf_ymax, "Last sample point (default 10/rho)");
    wf->add_flag("--json", as_json);

    auto* res = heun->add_subcommand("residual", "Finite-difference Schrodinger residual");
    int res_n = 2;
    double ymin = 0.5, ymax = 5.0, step = 1e-3, shift_e = 0.0;
    res->add_option("--n", res_n, "Polynomial length");
    res->add_option("--rho", rho, "rho > 0");
    res->add_option("--eps2", eps2, "eps^2 as p/q");
    res->add_option("--omega", omega, "Omega as p/q");
    res->add_option("--ymin", ymin, "First grid point");
    res->add_option("--ymax", ymax, "Last grid point");
    res->add_option("--step", step, "Grid spacing");
    res->add_option("--energy-shift", shift_e, "Added to E before evaluating");
    res->add_flag("--json", as_json);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "InvalidArgument: " << e.what() << "\n";
        return 1;
    }

    try {
        if (nf->parsed()) return detail::normal_form(nf_file, nf_shift, as_json, out);
        if (sv->parsed()) return detail::solve(sv_file, sv_lambda, depth, sv_shift, sv_source, as_json, out, err);
        if (verify->parsed()) return detail::catalog_verify(family, cat_n, cat_params, depth, as_json, out, err);
        if (list->parsed()) return detail::catalog_list(as_json, out);
        if (scan->parsed()) return detail::heun_scan(eps2, omega, nmax, scan_m, as_json, out);
        if (wf->parsed()) return detail::heun_wavefunction(wf_n, rho, samples, eps2, omega, wf_ymax, as_json, out);
        if (res->parsed())
            return detail::heun_residual(res_n, rho, eps2, omega, ymin, ymax, step, shift_e, as_json, out);
    } catch (const InputError& e) {
        err << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        err << e.name() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "InternalError: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace monomial::cli
