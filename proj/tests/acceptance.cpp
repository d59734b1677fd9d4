// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "monomial/catalog.hpp"
#include "monomial/heun.hpp"

using namespace monomial;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GeneralizedSeries normalized(const GeneralizedSeries& s) {
    GeneralizedSeries out(s.direction());
    Rational lead = s.coefficient(*s.leading_exponent());
    for (const auto& [e, c] : s.terms()) out.add(e, c / lead);
    return out;
}

// 1. Hermite closed form for n <= 10.
Outcome hermite() {
    auto t0 = std::chrono::steady_clock::now();
    for (int n = 0; n <= 10; ++n) {
        OperatorSplit split;
        split.F = DiagonalOp{Rational(-n), 1};
        split.P = MixedOp{OpTerm(rat(-1, 2), 0, 2)};
        Solution sol = solve_homogeneous(split, n);
        GeneralizedSeries classical(Direction::descending);
        for (int k = 0; 2 * k <= n; ++k)
            classical.add(n - 2 * k, Rational(k % 2 ? -1 : 1) * factorial(n) / (factorial(k) * factorial(n - 2 * k)) *
                                         pow(Rational(2), n - 2 * k));
        if (!sol.terminated || normalized(sol.series) != normalized(classical))
            return {false, "mismatch at n = " + std::to_string(n)};
    }
    double dt = seconds_since(t0);
    return {dt < 1.0, "n = 0..10 exact, " + std::to_string(dt) + " s"};
}

// 2. Catalog sweep.
Outcome catalog_sweep() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20240611);
    auto draw = [&] { return Rational(std::uniform_int_distribution<int>(1, 9)(rng), std::uniform_int_distribution<int>(1, 6)(rng)); };
    int checked = 0;
    auto check = [&](const std::string& name, const catalog::Params& p) {
        ++checked;
        auto r = catalog::compare(name, p);
        if (!r.match) throw std::runtime_error(name + " failed: " + r.error_name);
    };
    try {
        for (unsigned n = 0; n <= 10; ++n) {
            for (const char* name : {"hermite", "legendre", "chebyshev_t", "chebyshev_u"}) check(name, {{"n", n}});
            for (int t = 0; t < 3; ++t) {
                check("gegenbauer", {{"n", n}, {"lambda", draw()}});
                check("jacobi", {{"n", n}, {"alpha", draw()}, {"beta", draw()}});
                check("laguerre", {{"n", n}, {"alpha", draw()}});
            }
        }
        for (int t = 0; t < 3; ++t) {
            Rational nu = draw() + rat(1, 11);
            check("bessel", {{"nu", nu}});
            check("lommel", {{"mu", draw()}, {"nu", nu}});
            Rational a = draw() + rat(1, 17);
            check("hypergeometric", {{"alpha", a}, {"beta", a + draw() + rat(1, 19)}, {"gamma", draw()}});
        }
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
    double dt = seconds_since(t0);
    return {dt < 10.0, std::to_string(checked) + " comparisons, " + std::to_string(dt) + " s"};
}

// 3. Telescoping residual (F + P) sum_{m<=M} t_m = (-1)^M P t_M.
Outcome telescoping() {
    std::mt19937 rng(7);
    auto small = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int done = 0, attempts = 0;
    while (done < 50 && attempts < 500) {
        ++attempts;
        int degree = small(1, 3);
        RationalPolynomial f = RationalPolynomial::constant(Rational(small(1, 5)) * (small(0, 1) ? 1 : -1));
        std::vector<Rational> roots;
        for (int k = 0; k < degree; ++k) {
            roots.push_back(Rational(small(-9, 9), small(1, 4)));
            f = f * RationalPolynomial{-roots.back(), 1};
        }
        OperatorSplit split;
        split.F = DiagonalOp(f);
        int terms = small(1, 3);
        for (int k = 0; k < terms; ++k) {
            int j = small(0, 2);
            Rational c(small(1, 9) * (small(0, 1) ? 1 : -1), small(1, 5));
            split.P.add(OpTerm(c, j + small(1, 2), j));
        }
        Rational lambda = roots[static_cast<std::size_t>(small(0, degree - 1))];
        bool usable = true;
        try {
            for (unsigned M : {1u, 3u, 5u}) {
                // cascade_terms carries the alternating sign: t[m] = (-1)^m [F^{-1} P]^m x^lambda.
                auto t = cascade_terms(split, GeneralizedSeries::monomial(1, lambda), M);
                if (t.size() != M + 1 || t[M].empty()) {
                    usable = false;  // terminated early; nothing to telescope
                    break;
                }
                GeneralizedSeries partial;
                for (const auto& tm : t) partial += tm;
                GeneralizedSeries unsigned_tm = M % 2 ? -t[M] : t[M];
                GeneralizedSeries expect = apply_mixed(split.P, unsigned_tm);
                if (M % 2) expect = -expect;
                if (apply_split(split, partial) != expect)
                    return {false, "identity fails at M = " + std::to_string(M)};
            }
        } catch (const ResonanceEncountered&) {
            usable = false;
        }
        if (usable) ++done;
    }
    return {done == 50, std::to_string(done) + " random splits (" + std::to_string(attempts) + " drawn), M in {1,3,5}"};
}

// 4. Source solver.
Outcome source() {
    OperatorSplit split;
    split.F = DiagonalOp{rat(-1, 2), 1};
    split.P = MixedOp{OpTerm(1, 1, 0)};
    split.scaled_source = GeneralizedSeries::monomial(1, 0);
    Solution sol = solve_with_source(split, {.max_depth = 4});
    GeneralizedSeries r = verify_residual_symbolic(split, sol);
    bool ok = sol.series.frontier() && *sol.series.frontier() > 2;
    for (const auto& [e, c] : r.terms()) ok = ok && e >= *sol.series.frontier();

    auto lommel = catalog::build("lommel", {{"mu", 1}, {"nu", rat(1, 2)}});
    Solution ls = solve_with_source(to_operator_form(lommel.ode, 0), {.max_depth = 3});
    auto terms = ls.series.ordered_terms();
    bool lok = terms.size() >= 2 && terms[0].second == rat(4, 15) && terms[1].second == rat(-16, 945);
    return {ok && lok, "residual beyond x^2: " + std::string(ok ? "yes" : "no") +
                           ", Lommel 4/15, -16/945: " + (lok ? "yes" : "no")};
}

// 5. Periodic potential.
Outcome periodic() {
    bool ok = true;
    double worst = 0;
    for (int lambda : {0, 1}) {
        auto r = catalog::compare("periodic", {{"a", 1}, {"lambda", lambda}, {"order", 10}});
        ok = ok && r.match;
        GeneralizedSeries y = catalog::periodic_sum_formula(1, lambda, 10);
        double x = 0.2;
        double res = evaluate_series(derivative(y, 2), x) + std::cos(x) * evaluate_series(y, x);
        worst = std::max(worst, std::abs(res));
    }
    std::ostringstream os;
    os << "formula == cascade: " << (ok ? "yes" : "no") << ", residual at 0.2: " << worst;
    return {ok && worst < 1e-6, os.str()};
}

// 6. QES reproduction.
Outcome qes() {
    auto rows = heun::termination_scan(1, rat(-1, 2), 4);
    bool rows_ok = rows.size() == 2 && rows[0].n == 2 && rows[0].s == rat(1, 2) && rows[0].normalizable &&
                   rows[1].n == 3 && rows[1].s == rat(-1, 2) && !rows[1].normalizable;
    bool energy_ok = heun::energy(rat(1, 2), 1.0) == 0.75;
    if (!rows_ok) return {false, "scan rows differ"};
    heun::QESSolution sol = heun::make_solution(rows[0], 1.0, 1);
    heun::PotentialSpec spec{1.0, 1, rat(-1, 2)};
    std::vector<double> grid;
    for (int i = 0; i <= 4500; ++i) grid.push_back(0.5 + 1e-3 * i);
    double r = heun::schrodinger_residual(sol, spec, grid);
    heun::QESSolution off = sol;
    off.E += 0.05;
    double r_off = heun::schrodinger_residual(off, spec, grid);
    double peak = 0;
    heun::HeunParams p{1, rat(-1, 2), rat(1, 2), 1.0};
    for (double y : grid) peak = std::max(peak, std::abs(heun::wavefunction(sol, y, p)));
    std::ostringstream os;
    os << "rows {(2,1/2),(3,-1/2)}, E = 0.75, residual " << r << ", perturbed " << r_off << " vs " << 0.04 * peak;
    return {energy_ok && r < 1e-5 && r_off > 0.04 * peak, os.str()};
}

// 7. Indicial and quadratic anchors.
Outcome anchors() {
    bool ok = true;
    for (Rational e2 : {Rational(1), rat(1, 2), Rational(3)}) {
        heun::HeunParams p{e2, -e2 / 2, 0, 1.0};
        auto xi = heun::indicial_xi(p);
        ok = ok && xi.first == 1 && xi.second == rat(-1, 2) && heun::allowed_m(p) == std::vector<int>{1};
    }
    auto quadratic = [](int n, const Rational& s) { return s * s + (2 * n - 1) * s + n * n - n - rat(15, 4); };
    ok = ok && quadratic(2, rat(1, 2)) == 0 && quadratic(3, rat(-1, 2)) == 0;
    return {ok, "xi = (1, -1/2), m = [1], quadratic zero at (2,1/2) and (3,-1/2)"};
}

// 8. CLI determinism.
std::string capture(const std::string& cmd, int& status) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    status = pclose(pipe);
    return out;
}

Outcome cli_determinism() {
    std::string cmd = std::string("sh '") + MONOMIAL_DEMO_DIR + "/run_demo.sh' '" + MONOMIAL_CLI + "'";
    int s1 = 0, s2 = 0;
    std::string a = capture(cmd, s1), b = capture(cmd, s2);
    if (s1 != 0 || s2 != 0) return {false, "demo script failed"};
    if (a != b) return {false, "outputs differ between runs"};
    std::istringstream lines(a);
    std::string line;
    int docs = 0;
    while (std::getline(lines, line)) {
        try {
            if (nlohmann::json::parse(line).dump() != line) return {false, "JSON does not re-serialize identically"};
        } catch (const std::exception& e) {
            return {false, std::string("unparsable JSON: ") + e.what()};
        }
        ++docs;
    }
    return {docs > 0, std::to_string(docs) + " JSON documents, byte-identical across two runs"};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 hermite closed form", hermite},
        {"2 catalog sweep", catalog_sweep},
        {"3 telescoping property", telescoping},
        {"4 source solver", source},
        {"5 periodic potential", periodic},
        {"6 QES reproduction", qes},
        {"7 indicial and quadratic anchors", anchors},
        {"8 CLI determinism", cli_determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail << "\n";
        if (!o.pass) ++failed;
    }
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/" << criteria.size() << "\n";
    return failed ? 1 : 0;
}
