#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "monomial/normal_form.hpp"

namespace monomial {

struct SolveConfig {
    /// Number of cascade steps M in sum_{m=0}^{M} t_m.
    unsigned max_depth = 64;
    /// Terms with |exponent - lambda| above this are dropped during the cascade.
    Rational frontier_bound = 128;
    /// Unset: inferred from P (raising -> ascending, lowering -> descending).
    std::optional<Direction> direction;
    /// When false, reaching max_depth before termination or saturation raises DepthExhausted.
    bool allow_truncation = true;
};

struct Solution {
    Rational lambda;
    GeneralizedSeries series;
    /// Some cascade term was exactly zero: the series is a finite exact solution.
    bool terminated = false;
    unsigned depth_used = 0;
    /// Produced by solve_with_source (a particular solution of the inhomogeneous equation).
    bool particular = false;
};

struct IrrationalRootReport {
    int degree = 0;  // degree of the factor left after removing rational roots
    std::optional<Rational> discriminant;  // when that factor is quadratic
    std::vector<std::complex<double>> approximations;
    std::string description;
};

struct IndicialData {
    std::vector<Rational> rational_roots;
    std::optional<IrrationalRootReport> irrational_root_report;
};

namespace detail {

// Durand-Kerner on a real polynomial, used only to describe roots we cannot represent exactly.
inline std::vector<std::complex<double>> approximate_roots(const RationalPolynomial& p) {
    int n = p.degree();
    std::vector<std::complex<double>> roots;
    if (n < 1) return roots;
    std::vector<double> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = to_double(p.coeff(k) / p.leading());
    auto eval = [&](std::complex<double> z) {
        std::complex<double> acc = 0;
        for (int k = n; k >= 0; --k) acc = acc * z + c[k];
        return acc;
    };
    const std::complex<double> seed(0.4, 0.9);
    for (int k = 0; k < n; ++k) roots.push_back(std::pow(seed, k));
    for (int iter = 0; iter < 500; ++iter) {
        double change = 0;
        for (int k = 0; k < n; ++k) {
            std::complex<double> denom = 1;
            for (int j = 0; j < n; ++j)
                if (j != k) denom *= roots[k] - roots[j];
            auto step = eval(roots[k]) / denom;
            roots[k] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15) break;
    }
    return roots;
}

enum class CascadeShape { raising, lowering, mixed };

inline CascadeShape shape_of(const MixedOp& p) {
    if (p.raising()) return CascadeShape::raising;
    if (p.lowering()) return CascadeShape::lowering;
    return CascadeShape::mixed;
}

inline Direction resolve_direction(const MixedOp& p, const SolveConfig& cfg) {
    auto shape = shape_of(p);
    Direction natural = shape == CascadeShape::lowering ? Direction::descending : Direction::ascending;
    if (cfg.direction && shape != CascadeShape::mixed && *cfg.direction != natural)
        throw InvalidArgument(std::string("P is ") + (shape == CascadeShape::raising ? "raising" : "lowering") +
                              " but a " + to_string(*cfg.direction) + " series was requested");
    return cfg.direction.value_or(natural);
}

// Runs t_{m+1} = -F^{-1}(P t_m) from t0, summing into a series anchored at `anchor`.
inline Solution run_cascade(const OperatorSplit& split, GeneralizedSeries t, const Rational& anchor,
                            const SolveConfig& cfg) {
    if (cfg.max_depth < 1) throw InvalidArgument("max_depth must be at least 1");
    Direction dir = split.P.empty() ? cfg.direction.value_or(Direction::ascending) : resolve_direction(split.P, cfg);
    auto shape = shape_of(split.P);
    t.set_direction(dir);
    t.clear_frontier();

    Solution sol;
    sol.lambda = anchor;
    sol.series = GeneralizedSeries(dir);
    sol.series += t;

    auto in_bound = [&](const Rational& e) {
        Rational d = e - anchor;
        switch (shape) {
        case CascadeShape::raising: return d <= cfg.frontier_bound;
        case CascadeShape::lowering: return -d <= cfg.frontier_bound;
        default: return (d < 0 ? Rational(-d) : d) <= cfg.frontier_bound;
        }
    };

    std::optional<Rational> frontier;
    auto note_untracked = [&](const Rational& e) {
        if (!frontier || (dir == Direction::ascending ? e < *frontier : e > *frontier)) frontier = e;
    };

    bool done = false;
    bool dropped = false;
    unsigned m = 0;
    if (t.empty() || split.P.empty()) {
        sol.terminated = true;
        done = true;
    }
    while (!done && m < cfg.max_depth) {
        GeneralizedSeries pt = apply_mixed(split.P, t);
        GeneralizedSeries kept(dir);
        for (const auto& [e, c] : pt.terms()) {
            if (in_bound(e)) {
                kept.add(e, c);
            } else {
                dropped = true;
                if (shape != CascadeShape::mixed) note_untracked(e);
            }
        }
        t = -apply_inverse_diagonal(split.F, kept);
        ++m;
        if (t.empty()) {
            sol.terminated = !dropped;
            done = true;
            break;
        }
        sol.series += t;
    }
    sol.depth_used = m;

    if (!done) {
        if (!cfg.allow_truncation)
            throw DepthExhausted("cascade reached depth " + std::to_string(cfg.max_depth) +
                                 " before terminating or saturating the frontier bound");
        if (shape == CascadeShape::raising) note_untracked(*t.lowest_exponent() + split.P.min_shift());
        else if (shape == CascadeShape::lowering) note_untracked(*t.highest_exponent() + split.P.max_shift());
    }
    if (frontier) sol.series.set_frontier(*frontier);
    return sol;
}

} // namespace detail

/// Roots of F: every rational root exactly, plus a description of whatever is left.
inline IndicialData indicial_roots(const DiagonalOp& f) {
    if (f.is_zero()) throw InvalidArgument("indicial_roots of the zero operator");
    IndicialData data;
    if (f.degree() == 0) return data;
    const auto& poly = f.polynomial();
    if (poly.degree() == 2) {
        // Exact square-discriminant test.
        Rational a = poly.coeff(2), b = poly.coeff(1), c = poly.coeff(0);
        Rational disc = b * b - 4 * a * c, root;
        if (exact_sqrt(disc, root)) {
            std::set<Rational> r{(-b + root) / (2 * a), (-b - root) / (2 * a)};
            data.rational_roots.assign(r.begin(), r.end());
            return data;
        }
    }
    data.rational_roots = rational_roots(poly);
    RationalPolynomial rest = deflate_rational_roots(poly);
    if (rest.degree() >= 1) {
        IrrationalRootReport rep;
        rep.degree = rest.degree();
        if (rest.degree() == 2)
            rep.discriminant = rest.coeff(1) * rest.coeff(1) - 4 * rest.coeff(2) * rest.coeff(0);
        rep.approximations = detail::approximate_roots(rest);
        std::ostringstream os;
        os << "degree-" << rep.degree << " factor without rational roots";
        if (rep.discriminant) os << ", discriminant " << *rep.discriminant;
        os << ", approx roots:";
        for (const auto& z : rep.approximations) {
            os << " " << z.real();
            if (std::abs(z.imag()) > 1e-12) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
        }
        rep.description = os.str();
        data.irrational_root_report = rep;
    }
    return data;
}

/// The raw cascade t_0 = seed, t_{m+1} = -F^{-1}(P t_m) without any truncation.
/// Stops early when a term vanishes; the returned vector then ends with that empty term.
inline std::vector<GeneralizedSeries> cascade_terms(const OperatorSplit& split, const GeneralizedSeries& seed,
                                                    unsigned depth) {
    std::vector<GeneralizedSeries> out{seed};
    for (unsigned m = 0; m < depth && !out.back().empty(); ++m)
        out.push_back(-apply_inverse_diagonal(split.F, apply_mixed(split.P, out.back())));
    return out;
}

/// y = sum_m (-1)^m [F^{-1} P]^m x^lambda, with the x^lambda coefficient fixed to 1.
inline Solution solve_homogeneous(const OperatorSplit& split, const Rational& lambda, const SolveConfig& cfg = {}) {
    if (eval_diagonal(split.F, lambda) != 0)
        throw InvalidArgument("lambda = " + to_string(lambda) + " is not a root of F");
    return detail::run_cascade(split, GeneralizedSeries::monomial(1, lambda), lambda, cfg);
}

struct RootSolution {
    Rational lambda;
    std::optional<Solution> solution;
    std::string error_name;  // empty on success
    std::string error_message;
};

struct SolveAllResult {
    std::vector<RootSolution> roots;
    IndicialData indicial;
};

/// One cascade per distinct rational indicial root; per-root solver errors are embedded.
inline SolveAllResult solve_all(const OperatorSplit& split, const SolveConfig& cfg = {}) {
    SolveAllResult out;
    out.indicial = indicial_roots(split.F);
    for (const auto& lambda : out.indicial.rational_roots) {
        RootSolution r;
        r.lambda = lambda;
        try {
            r.solution = solve_homogeneous(split, lambda, cfg);
        } catch (const SolverError& e) {
            r.error_name = e.name();
            r.error_message = e.what();
        }
        out.roots.push_back(std::move(r));
    }
    return out;
}

/// y = sum_m (-1)^m [F^{-1} P]^m F^{-1} Q for the scaled source Q of the split.
inline Solution solve_with_source(const OperatorSplit& split, const SolveConfig& cfg = {}) {
    if (!split.scaled_source) throw InvalidArgument("split has no source term");
    GeneralizedSeries q = *split.scaled_source;
    q.clear_frontier();
    GeneralizedSeries u0 = apply_inverse_diagonal(split.F, q);
    Direction dir = split.P.empty() ? cfg.direction.value_or(Direction::ascending)
                                    : detail::resolve_direction(split.P, cfg);
    u0.set_direction(dir);
    Rational anchor = u0.empty() ? Rational(0) : *u0.leading_exponent();
    Solution sol = detail::run_cascade(split, u0, anchor, cfg);
    sol.particular = true;
    if (split.scaled_source->frontier()) sol.series.restrict_frontier(*split.scaled_source->frontier());
    return sol;
}

/// (F + P) applied to the finite partial sum, minus the source for particular
/// solutions. Every surviving term lies beyond the solution's frontier.
inline GeneralizedSeries verify_residual_symbolic(const OperatorSplit& split, const Solution& sol) {
    GeneralizedSeries s = sol.series;
    s.clear_frontier();
    GeneralizedSeries r = apply_split(split, s);
    if (sol.particular && split.scaled_source) {
        GeneralizedSeries q = *split.scaled_source;
        q.clear_frontier();
        r -= q;
    }
    return r;
}

/// Term-wise k-th derivative.
inline GeneralizedSeries derivative(const GeneralizedSeries& s, unsigned k) {
    GeneralizedSeries out(s.direction());
    if (s.frontier()) out.set_frontier(*s.frontier() - k);
    for (const auto& [e, c] : s.terms()) out.add(e - k, c * falling_factorial(e, k));
    return out;
}

inline double evaluate_series(const GeneralizedSeries& s, double x0) {
    double sum = 0;
    for (const auto& [e, c] : s.terms()) {
        double p;
        if (is_integer(e)) {
            p = std::pow(x0, e.convert_to<double>());
        } else {
            if (x0 < 0) throw NegativeBaseFractionalPower("x^" + to_string(e) + " at x = " + std::to_string(x0));
            p = std::pow(x0, to_double(e));
        }
        sum += to_double(c) * p;
    }
    return sum;
}

inline double evaluate_series(const Solution& sol, double x0) { return evaluate_series(sol.series, x0); }

inline double evaluate_poly(const SparsePoly& p, double x) {
    double s = 0;
    for (const auto& [a, c] : p) s += to_double(c) * std::pow(x, a);
    return s;
}

/// max over points of |sum_b p_b(x) y^(b)(x) - Q(x)| in double precision.
inline double residual_numeric(const LinearODE& ode, const Solution& sol, const std::vector<double>& points) {
    std::vector<GeneralizedSeries> derivs;
    for (unsigned b = 0; b <= ode.order(); ++b) derivs.push_back(derivative(sol.series, b));
    double worst = 0;
    for (double x : points) {
        double r = 0;
        for (unsigned b = 0; b <= ode.order(); ++b) r += evaluate_poly(ode.coeff(b), x) * evaluate_series(derivs[b], x);
        if (ode.source()) r -= evaluate_series(*ode.source(), x);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

} // namespace monomial
