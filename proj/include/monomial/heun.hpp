#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "monomial/solver.hpp"

namespace monomial::heun {

/// Parameters of the generalized Heun equation
///   f'' + {1/(2x) + (1+2s)/(x-1) + 1/(2(x+eps2))} f' + (alpha beta x - q - Omega/x)/(x(x-1)(x+eps2)) f = 0.
/// alpha, beta and q are functions of (s, eps2) and never stored.
struct HeunParams {
    Rational eps2 = 1;
    Rational Omega = 0;
    Rational s = 0;
    double rho = 1.0;

    Rational alpha() const { return rat(-5, 2) - s; }
    Rational beta() const { return rat(3, 2) - s; }
    Rational q() const { return (1 - s * s) * (1 + eps2) - s * eps2 / 2 - (1 - 2 * eps2) / 4; }
};

namespace detail {

inline void check(const HeunParams& p) {
    if (p.eps2 <= 0) throw InvalidArgument("eps2 must be positive");
}

inline SparsePoly sparse(std::initializer_list<std::pair<int, Rational>> terms) {
    SparsePoly out;
    for (const auto& [a, c] : terms)
        if (c != 0) out[a] += c;
    return out;
}

} // namespace detail

/// The equation multiplied by 4x^2(x-1)(x+eps2).
inline LinearODE heun_ode(const HeunParams& p) {
    detail::check(p);
    const Rational& e = p.eps2;
    return LinearODE({
        detail::sparse({{0, -4 * p.Omega}, {1, -4 * p.q()}, {2, 4 * p.alpha() * p.beta()}}),
        detail::sparse({{1, -2 * e}, {2, 2 * (3 * e - 2 + 4 * p.s * e)}, {3, 8 * (1 + p.s)}}),
        detail::sparse({{2, -4 * e}, {3, 4 * (e - 1)}, {4, Rational(4)}}),
    });
}

/// F = -4 eps2 D^2 + 2 eps2 D - 4 Omega; P raises by one and two powers of x.
inline OperatorSplit heun_split(const HeunParams& p) { return to_operator_form(heun_ode(p), 0); }

/// Fuchs criterion at x = 0 for the multiplied equation: coefficient of y^(b)
/// starts at x^b or higher. The Omega/x term lands on x^0 of the y coefficient.
inline bool regular_singular_at_origin(const HeunParams& p) {
    LinearODE ode = heun_ode(p);
    for (unsigned b = 0; b <= ode.order(); ++b) {
        const SparsePoly& c = ode.coeff(b);
        if (!c.empty() && c.begin()->first < static_cast<int>(b)) return false;
    }
    return true;
}

/// Roots (1 +- sqrt(1 - 16 Omega/eps2))/4 of F, larger first.
inline std::pair<Rational, Rational> indicial_xi(const HeunParams& p) {
    detail::check(p);
    Rational radicand = 1 - 16 * p.Omega / p.eps2;
    Rational root;
    if (radicand < 0 || !exact_sqrt(radicand, root)) {
        double d = to_double(radicand);
        double spread = std::sqrt(std::abs(d)) / 4;
        throw NonRationalIndicialRoot("xi = (1 +- sqrt(" + to_string(radicand) + "))/4 is not rational", d, 0.25,
                                      spread);
    }
    return {(1 + root) / 4, (1 - root) / 4};
}

/// Integer solutions m >= 1 of 2m^2 - m + 2 Omega/eps2 = 0.
inline std::vector<int> allowed_m(const HeunParams& p) {
    detail::check(p);
    std::vector<int> out;
    for (const auto& r : rational_roots(RationalPolynomial{2 * p.Omega / p.eps2, -1, 2}))
        if (is_integer(r) && r >= 1) out.push_back(numerator(r).convert_to<int>());
    return out;
}

/// Coefficients a_k(s) of f = sum_{k>=m} a_k x^k with a_m = 1, as polynomials in s.
/// From the split: F(k) a_k + B(k-1, s) a_{k-1} + C(k-2, s) a_{k-2} = 0 where
///   B(e, s) = 4(eps2-1) e(e-1) + 2(3 eps2 - 2 + 4 s eps2) e - 4 q(s)
///   C(e, s) = 4 e(e-1) + 8(1+s) e + 4 alpha(s) beta(s).
inline std::vector<RationalPolynomial> recurrence_in_s(const Rational& eps2, const Rational& Omega, int m, int k_max) {
    using P = RationalPolynomial;
    const P s{0, 1};
    const P q = P{1 + eps2, 0, -(1 + eps2)} + P{0, -eps2 / 2} - P::constant((1 - 2 * eps2) / 4);
    const P alpha_beta{rat(-15, 4), 1, 1};
    auto F = [&](int k) { return -4 * eps2 * k * k + 2 * eps2 * k - 4 * Omega; };
    auto B = [&](int e) {
        return P::constant(4 * (eps2 - 1) * e * (e - 1)) + P{2 * (3 * eps2 - 2) * e, 8 * eps2 * e} - Rational(4) * q;
    };
    auto C = [&](int e) { return P::constant(Rational(4 * e * (e - 1))) + P{8 * e, 8 * e} + Rational(4) * alpha_beta; };

    if (F(m) != 0) throw InvalidArgument("m = " + std::to_string(m) + " is not an indicial root");
    std::vector<P> a(static_cast<std::size_t>(k_max + 1));
    a[m] = P::constant(1);
    for (int k = m + 1; k <= k_max; ++k) {
        Rational f = F(k);
        if (f == 0) throw ResonanceEncountered(std::to_string(k));
        P rhs = B(k - 1) * a[k - 1];
        if (k - 2 >= m) rhs = rhs + C(k - 2) * a[k - 2];
        a[k] = rhs * (Rational(-1) / f);
    }
    return a;
}

struct ScanRow {
    int n = 0;
    int m = 1;
    Rational s;
    Rational energy_ratio;  // E / rho^2 = 1 - s^2
    bool normalizable = false;  // s > 0
    /// Power of (1-x) in psi at x -> 1: s plus the multiplicity of x = 1 as a root of f.
    Rational decay_exponent;
    GeneralizedSeries f_coeffs;
};

/// Evaluates the polynomials a_k at a fixed s.
inline GeneralizedSeries f_series(const std::vector<RationalPolynomial>& a, int m, int n, const Rational& s) {
    GeneralizedSeries f;
    for (int k = m; k < n && k < static_cast<int>(a.size()); ++k) f.add(k, a[k](s));
    return f;
}

/// Exact search for polynomial solutions f of degree n-1: a_n(s) = a_{n+1}(s) = 0
/// with a_{n-1}(s) != 0. Every integer m >= 1 from allowed_m is scanned unless m is given.
inline std::vector<ScanRow> termination_scan(const Rational& eps2, const Rational& Omega, int n_max,
                                             std::optional<int> m_only = std::nullopt) {
    HeunParams tmpl{eps2, Omega, 0, 1.0};
    detail::check(tmpl);
    std::vector<int> ms = m_only ? std::vector<int>{*m_only} : allowed_m(tmpl);
    std::vector<ScanRow> rows;
    for (int m : ms) {
        if (n_max <= m) continue;
        auto a = recurrence_in_s(eps2, Omega, m, n_max + 1);
        for (int n = m + 1; n <= n_max; ++n) {
            RationalPolynomial g = gcd(a[n], a[n + 1]);
            if (g.is_zero() || g.degree() < 1) continue;
            for (const auto& s : rational_roots(g)) {
                if (a[n - 1](s) == 0) continue;
                ScanRow row;
                row.n = n;
                row.m = m;
                row.s = s;
                row.energy_ratio = 1 - s * s;
                row.normalizable = s > 0;
                row.f_coeffs = f_series(a, m, n, s);
                std::vector<Rational> dense(static_cast<std::size_t>(n));
                for (const auto& [e, c] : row.f_coeffs.terms()) dense[numerator(e).convert_to<std::size_t>()] = c;
                row.decay_exponent = s + root_multiplicity(RationalPolynomial(dense), 1);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

/// A terminated solution together with its physical data.
struct QESSolution {
    int n = 0;
    Rational s;
    double E = 0;
    GeneralizedSeries f_coeffs;
    double norm = 1.0;
};

inline double energy(const Rational& s, double rho) { return rho * rho * (1 - to_double(s * s)); }

/// x = S/(1 + 1/eps2 + S) with S = sinh^2(rho y/2).
inline double coordinate_map(double y, double rho, const Rational& eps2) {
    double sh = std::sinh(rho * y / 2);
    double S = sh * sh;
    if (std::isinf(S)) return 1.0;
    return S / (1 + 1 / to_double(eps2) + S);
}

struct PotentialSpec {
    double rho = 1.0;
    Rational eps2 = 1;
    Rational Omega = 0;
};

/// Schrodinger potential for -psi'' + V psi = E psi. The inverse-sinh^2 term
/// enters with coefficient -Omega/eps2; that sign is what makes
/// psi = (1-x)^s f(x) an eigenfunction.
inline double potential(double y, const PotentialSpec& spec) {
    if (spec.eps2 == 0) throw InvalidArgument("eps2 must be nonzero");
    double e = to_double(spec.eps2), r2 = spec.rho * spec.rho;
    double sh = std::sinh(spec.rho * y / 2);
    double S = sh * sh;
    if (S == 0 && spec.Omega != 0) throw SingularPoint("potential is singular at y = 0 when Omega != 0");
    if (std::isinf(S)) return r2;
    double A = 1 + 1 / e;
    double body = (8 * S * S - 4 * (5 / e - 1) * S + 2 * (1 / (e * e) - 1 / e - 2)) / (8 * (A + S) * (A + S));
    double singular = spec.Omega == 0 ? 0.0 : -to_double(spec.Omega) / (e * S);
    return r2 * (body + singular);
}

/// psi(y) without the normalization constant.
inline double raw_wavefunction(const QESSolution& sol, double y, double rho, const Rational& eps2) {
    double sh = std::sinh(rho * y / 2);
    double S = sh * sh;
    if (std::isinf(S)) return 0.0;
    double A = 1 + 1 / to_double(eps2);
    // 1 - x computed directly to keep precision in the tail.
    double x = S / (A + S), one_minus_x = A / (A + S);
    return std::pow(one_minus_x, to_double(sol.s)) * evaluate_series(sol.f_coeffs, x);
}

inline double wavefunction(const QESSolution& sol, double y, const HeunParams& p) {
    return sol.norm * raw_wavefunction(sol, y, p.rho, p.eps2);
}

/// Composite trapezoid integral of psi^2 over [0, Y].
inline double psi_squared_integral(const QESSolution& sol, double rho, const Rational& eps2, double Y,
                                   double h) {
    std::size_t steps = static_cast<std::size_t>(std::ceil(Y / h));
    double dy = Y / static_cast<double>(steps), sum = 0;
    for (std::size_t i = 0; i <= steps; ++i) {
        double v = raw_wavefunction(sol, dy * static_cast<double>(i), rho, eps2);
        sum += (i == 0 || i == steps ? 0.5 : 1.0) * v * v;
    }
    return sum * dy;
}

/// N with integral_0^inf (N psi)^2 dy = 1. The upper limit grows until the
/// integral settles; NaN when it never does.
inline double normalization(const QESSolution& sol, double rho, const Rational& eps2) {
    double h = 1e-2 / rho;
    double Y = 10 / rho;
    double prev = psi_squared_integral(sol, rho, eps2, Y, h);
    for (int i = 0; i < 12; ++i) {
        Y *= 1.5;
        double cur = psi_squared_integral(sol, rho, eps2, Y, h);
        if (std::abs(cur - prev) <= 1e-12 * std::abs(cur)) return cur > 0 ? 1 / std::sqrt(cur) : NAN;
        prev = cur;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// Builds the physical solution for a scan row at the given rho.
inline QESSolution make_solution(const ScanRow& row, double rho, const Rational& eps2) {
    QESSolution sol;
    sol.n = row.n;
    sol.s = row.s;
    sol.E = energy(row.s, rho);
    sol.f_coeffs = row.f_coeffs;
    sol.norm = row.decay_exponent > 0 ? normalization(sol, rho, eps2) : std::numeric_limits<double>::quiet_NaN();
    return sol;
}

/// max over interior grid points of |-psi'' + V psi - E psi|, psi'' from a
/// centered 5-point stencil with h = 1e-3/rho.
inline double schrodinger_residual(const QESSolution& sol, const PotentialSpec& spec, const std::vector<double>& grid) {
    double h = 1e-3 / spec.rho;
    double norm = std::isnan(sol.norm) ? 1.0 : sol.norm;
    auto psi = [&](double y) { return norm * raw_wavefunction(sol, y, spec.rho, spec.eps2); };
    double worst = 0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        double y = grid[i];
        double d2 = (-psi(y + 2 * h) + 16 * psi(y + h) - 30 * psi(y) + 16 * psi(y - h) - psi(y - 2 * h)) / (12 * h * h);
        double r = -d2 + potential(y, spec) * psi(y) - sol.E * psi(y);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

} // namespace monomial::heun
