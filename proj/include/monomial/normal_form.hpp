#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "monomial/operators.hpp"

namespace monomial {

/// Sparse polynomial in x: power -> coefficient.
using SparsePoly = std::map<int, Rational>;

/// sum_b p_b(x) y^(b) = Q(x) with polynomial coefficients p_b and an optional source Q.
class LinearODE {
public:
    LinearODE() = default;
    explicit LinearODE(std::vector<SparsePoly> coeff_polys, std::optional<GeneralizedSeries> source = std::nullopt)
        : polys_(std::move(coeff_polys)), source_(std::move(source)) {
        for (auto& p : polys_) {
            for (auto it = p.begin(); it != p.end();) {
                if (it->first < 0) throw InvalidArgument("LinearODE coefficients must be polynomials in x");
                it = it->second == 0 ? p.erase(it) : std::next(it);
            }
        }
        while (!polys_.empty() && polys_.back().empty()) polys_.pop_back();
        if (polys_.size() < 2) throw InvalidArgument("LinearODE needs a nonzero derivative term");
        if (source_ && source_->empty() && !source_->frontier()) source_.reset();
    }

    unsigned order() const { return static_cast<unsigned>(polys_.size() - 1); }
    const std::vector<SparsePoly>& coeff_polys() const { return polys_; }
    const SparsePoly& coeff(unsigned b) const { return polys_.at(b); }
    const std::optional<GeneralizedSeries>& source() const { return source_; }

    int max_coefficient_degree() const {
        int m = 0;
        for (const auto& p : polys_)
            if (!p.empty()) m = std::max(m, p.rbegin()->first);
        return m;
    }

    friend bool operator==(const LinearODE& a, const LinearODE& b) {
        return a.polys_ == b.polys_ && a.source_ == b.source_;
    }

private:
    std::vector<SparsePoly> polys_;
    std::optional<GeneralizedSeries> source_;
};

/// The split x^shift·(ODE) = F(D) + P, with the source scaled the same way.
struct OperatorSplit {
    DiagonalOp F;
    MixedOp P;
    int shift = 0;
    std::optional<GeneralizedSeries> scaled_source;
};

struct ShiftCandidate {
    int shift = 0;
    int f_degree = 0;
    std::size_t rational_root_count = 0;
    /// deg F equals the ODE order, so F carries a full set of indicial roots.
    bool full = false;
};

struct NormalizationReport {
    std::vector<ShiftCandidate> candidates;
};

/// Applies the original (unmultiplied) differential operator to a series.
inline GeneralizedSeries apply_ode(const LinearODE& ode, const GeneralizedSeries& s) {
    GeneralizedSeries out(s.direction());
    for (unsigned b = 0; b <= ode.order(); ++b) {
        for (const auto& [a, c] : ode.coeff(b)) {
            for (const auto& [e, v] : s.terms()) out.add(e + a - static_cast<int>(b), c * v * falling_factorial(e, b));
        }
    }
    return out;
}

inline GeneralizedSeries apply_split(const OperatorSplit& split, const GeneralizedSeries& s) {
    return apply_diagonal(split.F, s) + apply_mixed(split.P, s);
}

/// Multiplies the ODE by x^s and sorts every term c·x^(a+s)·d^b onto the diagonal
/// (a+s == b, contributing c·D(D-1)...(D-b+1)) or into P.
inline OperatorSplit to_operator_form(const LinearODE& ode, int s) {
    if (s < 0) throw InvalidArgument("shift must be non-negative");
    OperatorSplit split;
    split.shift = s;
    for (unsigned b = 0; b <= ode.order(); ++b) {
        for (const auto& [a, c] : ode.coeff(b)) {
            int i = a + s;
            if (i == static_cast<int>(b))
                split.F += c * DiagonalOp::falling(b);
            else
                split.P.add(OpTerm(c, static_cast<unsigned>(i), b));
        }
    }
    if (split.F.is_zero()) throw NoDiagonalPart("no term lands on the diagonal for shift " + std::to_string(s));
    if (ode.source()) {
        GeneralizedSeries q(ode.source()->direction());
        if (ode.source()->frontier()) q.set_frontier(*ode.source()->frontier() + s);
        for (const auto& [e, c] : ode.source()->terms()) q.add(e + s, c);
        split.scaled_source = std::move(q);
    }
    return split;
}

/// Every shift in 0..(order + max coefficient degree) that yields a nonzero F.
inline NormalizationReport suggest_shift(const LinearODE& ode) {
    NormalizationReport report;
    int upper = static_cast<int>(ode.order()) + ode.max_coefficient_degree();
    for (int s = 0; s <= upper; ++s) {
        try {
            auto split = to_operator_form(ode, s);
            ShiftCandidate c;
            c.shift = s;
            c.f_degree = split.F.degree();
            c.rational_root_count = c.f_degree > 0 ? rational_roots(split.F.polynomial()).size() : 0;
            c.full = c.f_degree == static_cast<int>(ode.order());
            report.candidates.push_back(c);
        } catch (const NoDiagonalPart&) {
        }
    }
    return report;
}

/// The ODE satisfied by z(x) = y(1/x), multiplied through by the power of x that
/// makes its lowest coefficient power zero, with the sign fixed so the highest
/// derivative's lowest-power coefficient is positive.
inline LinearODE reciprocal_transform(const LinearODE& ode) {
    using Key = std::pair<int, unsigned>;  // (power of t, derivative order)
    // (d/dx)^b = (-t^2 d/dt)^b, expanded as sum c·t^p·(d/dt)^j.
    std::vector<std::map<Key, Rational>> chain(ode.order() + 1);
    chain[0][{0, 0}] = 1;
    for (unsigned b = 1; b <= ode.order(); ++b) {
        for (const auto& [key, c] : chain[b - 1]) {
            auto [p, j] = key;
            if (p != 0) chain[b][{p + 1, j}] -= c * p;
            chain[b][{p + 2, j + 1}] -= c;
        }
    }
    std::map<Key, Rational> total;
    for (unsigned b = 0; b <= ode.order(); ++b)
        for (const auto& [a, c] : ode.coeff(b))
            for (const auto& [key, v] : chain[b]) total[{key.first - a, key.second}] += c * v;
    int min_power = 0;
    bool any = false;
    for (const auto& [key, c] : total) {
        if (c == 0) continue;
        min_power = any ? std::min(min_power, key.first) : key.first;
        any = true;
    }
    std::vector<SparsePoly> polys(ode.order() + 1);
    for (const auto& [key, c] : total)
        if (c != 0) polys[key.second][key.first - min_power] += c;

    Rational sign = 1;
    for (auto it = polys.rbegin(); it != polys.rend(); ++it) {
        if (it->empty()) continue;
        if (it->begin()->second < 0) sign = -1;
        break;
    }
    for (auto& p : polys)
        for (auto& [a, c] : p) c *= sign;

    std::optional<GeneralizedSeries> source;
    if (ode.source()) {
        Direction flipped = ode.source()->direction() == Direction::ascending ? Direction::descending
                                                                                : Direction::ascending;
        GeneralizedSeries q(flipped);
        if (ode.source()->frontier()) q.set_frontier(-*ode.source()->frontier() - min_power);
        for (const auto& [e, c] : ode.source()->terms()) q.add(-e - min_power, sign * c);
        source = std::move(q);
    }
    return LinearODE(std::move(polys), std::move(source));
}

inline std::ostream& operator<<(std::ostream& os, const OperatorSplit& s) {
    os << "shift: " << s.shift << "\nF(D) = " << s.F << "\nP = " << s.P;
    if (s.scaled_source) os << "\nQ = " << *s.scaled_source;
    return os;
}

} // namespace monomial
