#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monomial/solver.hpp"

namespace monomial::catalog {

using Params = std::map<std::string, Rational>;

struct FamilyInfo {
    std::string name;
    std::vector<std::string> required;
    std::vector<std::string> optional;  // with defaults applied by build()
    bool terminating;                   // classical polynomial family
    bool has_source;
};

/// Every family the catalog knows, in listing order.
inline const std::vector<FamilyInfo>& families() {
    static const std::vector<FamilyInfo> list = {
        {"hermite", {"n"}, {}, true, false},
        {"legendre", {"n"}, {}, true, false},
        {"associated_legendre", {"n", "m"}, {}, true, false},
        {"bessel", {"nu"}, {"sign"}, false, false},
        {"generalized_bessel", {"alpha", "beta", "gamma", "nu"}, {"sign"}, false, false},
        {"gegenbauer", {"n", "lambda"}, {}, true, false},
        {"chebyshev_t", {"n"}, {}, true, false},
        {"chebyshev_u", {"n"}, {}, true, false},
        {"jacobi", {"n", "alpha", "beta"}, {}, true, false},
        {"laguerre", {"n"}, {"alpha"}, true, false},
        {"hypergeometric", {"alpha", "beta", "gamma"}, {}, false, false},
        {"lommel", {"mu", "nu"}, {}, false, true},
        {"neumann", {"n"}, {}, true, true},
        {"periodic", {"a"}, {"lambda", "order"}, false, false},
    };
    return list;
}

inline const FamilyInfo& family(const std::string& name) {
    for (const auto& f : families())
        if (f.name == name) return f;
    throw UnknownFamily(name);
}

struct CatalogEntry {
    std::string name;
    Params params;
    LinearODE ode;
    int recommended_shift = 0;
    /// Indicial root the named solution starts from; for source families the
    /// leading exponent of the particular solution.
    Rational indicial_lambda;
    /// Factor multiplying the series solution (associated Legendre only).
    std::optional<std::string> prefactor;
};

struct Mismatch {
    Rational exponent;
    Rational expected;
    Rational got;
};

struct ComparisonReport {
    std::string name;
    Params params;
    std::string route = "direct";  // "direct" or "reciprocal"
    std::size_t terms_compared = 0;
    bool match = false;
    std::optional<Mismatch> first_mismatch;
    std::string error_name;  // set when the solver failed on the reported route
    std::string error_message;
    std::string direct_error_name;  // neumann: why the direct route was abandoned
};

namespace detail {

inline Rational get(const Params& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw MissingParameter(key);
    return it->second;
}

inline unsigned get_degree(const Params& p, const std::string& key) {
    Rational v = get(p, key);
    if (!is_integer(v) || v < 0) throw InvalidArgument(key + " must be a non-negative integer");
    return numerator(v).convert_to<unsigned>();
}

inline int sign_of(const Params& p) {
    auto it = p.find("sign");
    if (it == p.end() || it->second > 0) return 1;
    return -1;
}

// Expands (c0 + c1 x)^k.
inline GeneralizedSeries binomial_power(const Rational& c0, const Rational& c1, unsigned k) {
    GeneralizedSeries out;
    for (unsigned j = 0; j <= k; ++j) out.add(j, binomial(Rational(k), j) * pow(c0, k - j) * pow(c1, j));
    return out;
}

inline GeneralizedSeries multiply(const GeneralizedSeries& a, const GeneralizedSeries& b) {
    GeneralizedSeries out(a.direction());
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) out.add(ea + eb, ca * cb);
    return out;
}

inline SparsePoly cos_polynomial(const Rational& scale, unsigned order) {
    SparsePoly p;
    for (unsigned k = 0; 2 * k <= order; ++k) p[2 * k] = scale * (k % 2 ? -1 : 1) / factorial(2 * k);
    return p;
}

inline Params with_defaults(const std::string& name, Params p) {
    const auto& info = family(name);
    for (const auto& key : info.required)
        if (!p.count(key)) throw MissingParameter(key);
    if (name == "bessel" || name == "generalized_bessel") p.try_emplace("sign", 1);
    if (name == "laguerre") p.try_emplace("alpha", 0);
    if (name == "periodic") {
        p.try_emplace("lambda", 0);
        p.try_emplace("order", 10);
    }
    return p;
}

} // namespace detail

/// Closed-form series for the named solution of size `order` (terms k = 0..order
/// of the family's natural index; polynomial families stop at their degree).
/// Gamma-function prefactors common to every term are dropped.
GeneralizedSeries oracle_coefficients(const std::string& name, const Params& params, unsigned order);

/// Coefficients of the multi-sum solution of y'' + a cos(x) y = 0 for exponents <= order.
/// Each term walks an ordered choice n_1..n_m of cosine terms; the weight is
/// (-a)^m prod (-1)^{n_i}/(2n_i)! prod_r (E-2)!/E! with E = 2[m + lambda/2 + 1 - r + sum_{i<=m+1-r} n_i].
inline GeneralizedSeries periodic_sum_formula(const Rational& a, int lambda, unsigned order) {
    if (lambda != 0 && lambda != 1) throw InvalidArgument("periodic solution needs lambda 0 or 1");
    GeneralizedSeries out;
    std::vector<unsigned> ns;
    std::function<void(unsigned)> walk = [&](unsigned used) {
        const unsigned m = static_cast<unsigned>(ns.size());
        Rational weight = pow(-a, m);
        for (unsigned ni : ns) weight *= Rational(ni % 2 ? -1 : 1) / factorial(2 * ni);
        for (unsigned r = 1; r <= m; ++r) {
            unsigned partial = 0;
            for (unsigned i = 0; i < m + 1 - r; ++i) partial += ns[i];
            // 2[m + lambda/2 - r + S] = 2(m - r + S) + lambda
            unsigned top = 2 * (m - r + partial) + lambda;
            weight *= factorial(top) / factorial(top + 2);
        }
        out.add(Rational(used + lambda), weight);
        for (unsigned n = 0; used + lambda + 2 * (n + 1) <= order; ++n) {
            ns.push_back(n);
            walk(used + 2 * (n + 1));
            ns.pop_back();
        }
    };
    walk(0);
    return out;
}

inline GeneralizedSeries oracle_coefficients(const std::string& name, const Params& raw, unsigned order) {
    using detail::get;
    using detail::get_degree;
    const Params p = detail::with_defaults(name, raw);
    GeneralizedSeries out(Direction::descending);

    if (name == "hermite") {
        unsigned n = get_degree(p, "n");
        for (unsigned k = 0; 2 * k <= n && k <= order; ++k)
            out.add(n - 2 * k, Rational(k % 2 ? -1 : 1) * factorial(n) / (factorial(k) * factorial(n - 2 * k)) *
                                   pow(Rational(2), n - 2 * k));
    } else if (name == "legendre" || name == "associated_legendre") {
        unsigned n = get_degree(p, "n");
        GeneralizedSeries leg(Direction::descending);
        for (unsigned k = 0; 2 * k <= n; ++k)
            leg.add(n - 2 * k, Rational(k % 2 ? -1 : 1) * binomial(Rational(n), k) *
                                   binomial(Rational(2 * n - 2 * k), n) / pow(Rational(2), n));
        if (name == "associated_legendre") {
            unsigned m = get_degree(p, "m");
            if (m > n) throw InvalidArgument("associated Legendre needs m <= n");
            leg = derivative(leg, m);
        }
        for (const auto& [e, c] : leg.ordered_terms()) {
            if (out.size() > order) break;
            out.add(e, c);
        }
    } else if (name == "gegenbauer") {
        unsigned n = get_degree(p, "n");
        Rational lam = get(p, "lambda");
        for (unsigned k = 0; 2 * k <= n && k <= order; ++k)
            out.add(n - 2 * k, Rational(k % 2 ? -1 : 1) * pochhammer(lam, n - k) /
                                   (factorial(k) * factorial(n - 2 * k)) * pow(Rational(2), n - 2 * k));
    } else if (name == "chebyshev_t") {
        unsigned n = get_degree(p, "n");
        if (n == 0) return GeneralizedSeries::monomial(1, 0, Direction::descending);
        for (unsigned k = 0; 2 * k <= n && k <= order; ++k)
            out.add(n - 2 * k, Rational(n, 2) * Rational(k % 2 ? -1 : 1) * factorial(n - k - 1) /
                                   (factorial(k) * factorial(n - 2 * k)) * pow(Rational(2), n - 2 * k));
    } else if (name == "chebyshev_u") {
        unsigned n = get_degree(p, "n");
        for (unsigned k = 0; 2 * k <= n && k <= order; ++k)
            out.add(n - 2 * k, Rational(k % 2 ? -1 : 1) * factorial(n - k) / (factorial(k) * factorial(n - 2 * k)) *
                                   pow(Rational(2), n - 2 * k));
    } else if (name == "jacobi") {
        unsigned n = get_degree(p, "n");
        Rational al = get(p, "alpha"), be = get(p, "beta");
        GeneralizedSeries sum(Direction::descending);
        for (unsigned s = 0; s <= n; ++s) {
            Rational c = binomial(n + al, n - s) * binomial(n + be, s);
            auto term = detail::multiply(detail::binomial_power(rat(-1, 2), rat(1, 2), s),
                                         detail::binomial_power(rat(1, 2), rat(1, 2), n - s));
            sum += c * term;
        }
        for (const auto& [e, c] : sum.ordered_terms()) {
            if (out.size() > order) break;
            out.add(e, c);
        }
    } else if (name == "laguerre") {
        unsigned n = get_degree(p, "n");
        Rational al = get(p, "alpha");
        for (unsigned k = 0; k <= n && k <= order; ++k) {
            unsigned power = n - k;
            out.add(power, Rational(power % 2 ? -1 : 1) * binomial(n + al, n - power) / factorial(power));
        }
    } else if (name == "bessel") {
        Rational lam = detail::sign_of(p) * get(p, "nu");
        out.set_direction(Direction::ascending);
        for (unsigned k = 0; k <= order; ++k)
            out.add(lam + 2 * k, Rational(k % 2 ? -1 : 1) / (factorial(k) * pochhammer(lam + 1, k) * pow(Rational(4), k)));
    } else if (name == "generalized_bessel") {
        Rational al = get(p, "alpha"), be = get(p, "beta"), ga = get(p, "gamma");
        Rational order_nu = detail::sign_of(p) * get(p, "nu");
        out.set_direction(Direction::ascending);
        // x^{-alpha} J_{nu}(gamma x^beta), Gamma(nu + 1) (gamma/2)^nu dropped.
        for (unsigned k = 0; k <= order; ++k)
            out.add(-al + be * (order_nu + 2 * k), Rational(k % 2 ? -1 : 1) * pow(ga / 2, 2 * k) /
                                                       (factorial(k) * pochhammer(order_nu + 1, k)));
    } else if (name == "hypergeometric") {
        // Solution at infinity: x^{-alpha} 2F1(alpha, alpha - gamma + 1; alpha - beta + 1; 1/x).
        Rational al = get(p, "alpha"), be = get(p, "beta"), ga = get(p, "gamma");
        for (unsigned k = 0; k <= order; ++k)
            out.add(-al - k, pochhammer(al, k) * pochhammer(al - ga + 1, k) / (pochhammer(al - be + 1, k) * factorial(k)));
    } else if (name == "lommel") {
        Rational mu = get(p, "mu"), nu = get(p, "nu");
        out.set_direction(Direction::ascending);
        Rational c = 1;
        for (unsigned k = 0; k <= order; ++k) {
            Rational e = mu + 1 + 2 * k;
            c /= e * e - nu * nu;
            out.add(e, c);
            c = -c;
        }
    } else if (name == "neumann") {
        unsigned n = get_degree(p, "n");
        out.set_direction(Direction::ascending);
        if (n == 0) return GeneralizedSeries::monomial(1, -1, Direction::ascending);
        for (unsigned k = 0; 2 * k <= n && k <= order; ++k) {
            int power = static_cast<int>(n - 2 * k + 1);
            out.add(-power, Rational(n, 4) * factorial(n - k - 1) / factorial(k) * pow(Rational(2), power));
        }
    } else if (name == "periodic") {
        Rational lam = get(p, "lambda");
        if (lam != 0 && lam != 1) throw InvalidArgument("periodic solution needs lambda 0 or 1");
        return periodic_sum_formula(get(p, "a"), lam == 1 ? 1 : 0, order);
    } else {
        throw UnknownFamily(name);
    }
    return out;
}

/// The defining ODE of the family together with the shift and indicial root
/// that reproduce its operator form.
inline CatalogEntry build(const std::string& name, const Params& raw) {
    using detail::get;
    using detail::get_degree;
    CatalogEntry e;
    e.name = name;
    e.params = detail::with_defaults(name, raw);
    const Params& p = e.params;

    auto polys = [](std::initializer_list<SparsePoly> l) { return std::vector<SparsePoly>(l); };

    if (name == "hermite") {
        // y'' - 2x y' + 2n y = 0 divided by -2.
        unsigned n = get_degree(p, "n");
        e.ode = LinearODE(polys({{{0, -Rational(n)}}, {{1, 1}}, {{0, rat(-1, 2)}}}));
        e.indicial_lambda = n;
    } else if (name == "legendre") {
        unsigned n = get_degree(p, "n");
        e.ode = LinearODE(polys({{{0, Rational(n * (n + 1))}}, {{1, -2}}, {{0, 1}, {2, -1}}}));
        e.indicial_lambda = n;
    } else if (name == "associated_legendre") {
        // Series factor v of P_n^m = (1 - x^2)^{m/2} v.
        unsigned n = get_degree(p, "n"), m = get_degree(p, "m");
        if (m > n) throw InvalidArgument("associated Legendre needs m <= n");
        e.ode = LinearODE(polys({{{0, Rational((n - m) * (n + m + 1))}}, {{1, -Rational(2 * (m + 1))}}, {{0, 1}, {2, -1}}}));
        e.indicial_lambda = n - m;
        e.prefactor = "(1-x^2)^(" + to_string(Rational(m, 2)) + ")";
    } else if (name == "bessel" || name == "lommel") {
        Rational nu = get(p, "nu");
        std::optional<GeneralizedSeries> source;
        if (name == "lommel") {
            Rational mu = get(p, "mu");
            source = GeneralizedSeries::monomial(1, mu + 1);
            e.indicial_lambda = mu + 1;
        } else {
            e.indicial_lambda = detail::sign_of(p) * nu;
        }
        e.ode = LinearODE(polys({{{0, -nu * nu}, {2, 1}}, {{1, 1}}, {{2, 1}}}), source);
    } else if (name == "generalized_bessel") {
        // x^2 u'' + (1 + 2 alpha) x u' + (alpha^2 - beta^2 nu^2 + beta^2 gamma^2 x^{2 beta}) u = 0,
        // solved by x^{-alpha} J_{+-nu}(gamma x^beta).
        Rational al = get(p, "alpha"), be = get(p, "beta"), ga = get(p, "gamma"), nu = get(p, "nu");
        Rational two_beta = 2 * be;
        if (!is_integer(two_beta) || two_beta <= 0) throw InvalidArgument("generalized Bessel needs 2*beta a positive integer");
        int step = numerator(two_beta).convert_to<int>();
        SparsePoly c0{{0, al * al - be * be * nu * nu}};
        c0[step] += be * be * ga * ga;
        e.ode = LinearODE(polys({c0, {{1, 1 + 2 * al}}, {{2, 1}}}));
        e.indicial_lambda = -al + detail::sign_of(p) * be * nu;
    } else if (name == "gegenbauer") {
        unsigned n = get_degree(p, "n");
        Rational lam = get(p, "lambda");
        e.ode = LinearODE(polys({{{0, n * (n + 2 * lam)}}, {{1, -(2 * lam + 1)}}, {{0, 1}, {2, -1}}}));
        e.indicial_lambda = n;
    } else if (name == "chebyshev_t") {
        unsigned n = get_degree(p, "n");
        e.ode = LinearODE(polys({{{0, Rational(n * n)}}, {{1, -1}}, {{0, 1}, {2, -1}}}));
        e.indicial_lambda = n;
    } else if (name == "chebyshev_u") {
        unsigned n = get_degree(p, "n");
        e.ode = LinearODE(polys({{{0, Rational(n * (n + 2))}}, {{1, -3}}, {{0, 1}, {2, -1}}}));
        e.indicial_lambda = n;
    } else if (name == "jacobi") {
        unsigned n = get_degree(p, "n");
        Rational al = get(p, "alpha"), be = get(p, "beta");
        e.ode = LinearODE(polys({{{0, n * (n + al + be + 1)}}, {{0, be - al}, {1, -(al + be + 2)}}, {{0, 1}, {2, -1}}}));
        e.indicial_lambda = n;
    } else if (name == "laguerre") {
        unsigned n = get_degree(p, "n");
        Rational al = get(p, "alpha");
        e.ode = LinearODE(polys({{{0, Rational(n)}}, {{0, al + 1}, {1, -1}}, {{1, 1}}}));
        e.indicial_lambda = n;
    } else if (name == "hypergeometric") {
        Rational al = get(p, "alpha"), be = get(p, "beta"), ga = get(p, "gamma");
        e.ode = LinearODE(polys({{{0, -al * be}}, {{0, ga}, {1, -(al + be + 1)}}, {{1, 1}, {2, -1}}}));
        e.indicial_lambda = -al;
    } else if (name == "neumann") {
        // x^2 y'' + 3x y' + (x^2 + 1 - n^2) y = x cos^2(n pi/2) + n sin^2(n pi/2).
        unsigned n = get_degree(p, "n");
        GeneralizedSeries source = n % 2 == 0 ? GeneralizedSeries::monomial(1, 1) : GeneralizedSeries::monomial(n, 0);
        e.ode = LinearODE(polys({{{0, Rational(1) - n * n}, {2, 1}}, {{1, 3}}, {{2, 1}}}), source);
        e.indicial_lambda = -static_cast<int>(n) - 1;
    } else if (name == "periodic") {
        // y'' + a cos(x) y = 0, cos expanded through x^order, multiplied by x^2.
        Rational lam = get(p, "lambda");
        if (lam != 0 && lam != 1) throw InvalidArgument("periodic solution needs lambda 0 or 1");
        unsigned order = get_degree(p, "order");
        e.ode = LinearODE(polys({detail::cos_polynomial(get(p, "a"), order), {}, {{0, 1}}}));
        e.recommended_shift = 2;
        e.indicial_lambda = lam;
    } else {
        throw UnknownFamily(name);
    }
    return e;
}

namespace detail {

inline void compare_series(ComparisonReport& report, const GeneralizedSeries& expected_raw,
                           const GeneralizedSeries& got_raw, bool terminating) {
    auto normalize = [](const GeneralizedSeries& s, const Rational& lead) {
        GeneralizedSeries out(s.direction());
        Rational c = s.coefficient(lead);
        if (c == 0) return out;
        for (const auto& [e, v] : s.terms()) out.add(e, v / c);
        return out;
    };
    Rational lead = *expected_raw.leading_exponent();
    GeneralizedSeries expected = normalize(expected_raw, lead);
    GeneralizedSeries got = normalize(got_raw, lead);
    if (got.empty()) {
        report.match = false;
        report.first_mismatch = Mismatch{lead, 1, got_raw.coefficient(lead)};
        return;
    }
    // Window spanned by the oracle terms; for terminating families the whole series.
    Rational lo = *expected.lowest_exponent(), hi = *expected.highest_exponent();
    std::set<Rational> exponents;
    for (const auto& [e, c] : expected.terms()) exponents.insert(e);
    for (const auto& [e, c] : got.terms())
        if (terminating || (e >= lo && e <= hi)) exponents.insert(e);
    std::vector<Rational> ordered(exponents.begin(), exponents.end());
    if (expected.direction() == Direction::descending) std::reverse(ordered.begin(), ordered.end());
    report.terms_compared = expected.size();
    for (const auto& e : ordered) {
        if (!terminating && !got.tracked(e)) continue;
        if (expected.coefficient(e) != got.coefficient(e)) {
            report.match = false;
            report.first_mismatch = Mismatch{e, expected.coefficient(e), got.coefficient(e)};
            return;
        }
    }
    report.match = true;
}

} // namespace detail

/// Runs build -> to_operator_form -> cascade and checks the result against the
/// closed form, both normalized to leading coefficient 1. Non-terminating
/// families compare `terms` oracle coefficients.
inline ComparisonReport compare(const std::string& name, const Params& params, SolveConfig cfg = {},
                                unsigned terms = 8) {
    const auto& info = family(name);
    ComparisonReport report;
    report.name = name;
    CatalogEntry entry = build(name, params);
    report.params = entry.params;
    unsigned order = info.terminating ? 1000u : terms - 1;
    // The cosine is truncated, so only exponents up to its order are exact.
    if (name == "periodic") order = numerator(entry.params.at("order")).convert_to<unsigned>();
    GeneralizedSeries expected = oracle_coefficients(name, entry.params, order);

    try {
        auto split = to_operator_form(entry.ode, entry.recommended_shift);
        Solution sol = info.has_source ? solve_with_source(split, cfg)
                                       : solve_homogeneous(split, entry.indicial_lambda, cfg);
        if (name != "neumann") {
            detail::compare_series(report, expected, sol.series, info.terminating);
            return report;
        }
    } catch (const SolverError& e) {
        if (name != "neumann") {
            report.error_name = e.name();
            report.error_message = e.what();
            return report;
        }
        report.direct_error_name = e.name();
    }

    // Neumann polynomials are polynomials in 1/x, so the direct form either
    // resonates or produces an ascending particular solution. Solve for z(t) = O_n(1/t).
    report.route = "reciprocal";
    try {
        LinearODE rec = reciprocal_transform(entry.ode);
        auto split = to_operator_form(rec, 0);
        Solution sol = solve_with_source(split, cfg);
        GeneralizedSeries flipped(Direction::ascending);
        for (const auto& [e, c] : expected.terms()) flipped.add(-e, c);
        detail::compare_series(report, flipped, sol.series, true);
    } catch (const SolverError& e) {
        report.error_name = e.name();
        report.error_message = e.what();
    }
    return report;
}

} // namespace monomial::catalog
