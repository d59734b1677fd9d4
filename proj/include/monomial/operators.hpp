#pragma once

#include <algorithm>
#include <ostream>
#include <tuple>
#include <vector>

#include "monomial/polynomial.hpp"
#include "monomial/series.hpp"

namespace monomial {

/// F(D) = sum_n a_n D^n with D = x d/dx. Acts on x^mu as multiplication by F(mu).
class DiagonalOp {
public:
    DiagonalOp() = default;
    explicit DiagonalOp(RationalPolynomial poly) : poly_(std::move(poly)) {}
    DiagonalOp(std::initializer_list<Rational> coeffs) : poly_(coeffs) {}

    /// D(D-1)...(D-b+1), the image of x^b (d/dx)^b.
    static DiagonalOp falling(unsigned b) {
        RationalPolynomial p = RationalPolynomial::constant(1);
        for (unsigned k = 0; k < b; ++k) p = p * RationalPolynomial{Rational(-static_cast<int>(k)), Rational(1)};
        return DiagonalOp(p);
    }

    const RationalPolynomial& polynomial() const { return poly_; }
    bool is_zero() const { return poly_.is_zero(); }
    int degree() const { return poly_.degree(); }
    Rational operator()(const Rational& mu) const { return poly_(mu); }

    DiagonalOp& operator+=(const DiagonalOp& o) {
        poly_ += o.poly_;
        return *this;
    }
    friend DiagonalOp operator+(DiagonalOp a, const DiagonalOp& b) { return a += b; }
    friend DiagonalOp operator*(const Rational& c, const DiagonalOp& f) { return DiagonalOp(f.poly_ * c); }
    friend DiagonalOp operator*(const DiagonalOp& a, const DiagonalOp& b) { return DiagonalOp(a.poly_ * b.poly_); }
    friend bool operator==(const DiagonalOp& a, const DiagonalOp& b) { return a.poly_ == b.poly_; }

private:
    RationalPolynomial poly_;
};

/// c·x^i·(d/dx)^j with i != j; moves x^mu to x^(mu+i-j).
struct OpTerm {
    Rational c;
    unsigned i = 0;
    unsigned j = 0;

    OpTerm(Rational coeff, unsigned x_power, unsigned d_order) : c(std::move(coeff)), i(x_power), j(d_order) {
        if (c == 0) throw InvalidArgument("OpTerm coefficient must be nonzero");
        if (i == j) throw InvalidArgument("OpTerm with i == j belongs to the diagonal part");
    }

    int shift() const { return static_cast<int>(i) - static_cast<int>(j); }

    friend bool operator==(const OpTerm& a, const OpTerm& b) { return a.c == b.c && a.i == b.i && a.j == b.j; }
};

/// The off-diagonal part P = sum c_ij x^i (d/dx)^j. Terms are kept sorted by
/// (i, j) with at most one entry per pair.
class MixedOp {
public:
    MixedOp() = default;
    MixedOp(std::initializer_list<OpTerm> terms) {
        for (const auto& t : terms) add(t);
    }

    void add(const OpTerm& t) {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), t, [](const OpTerm& a, const OpTerm& b) {
            return std::tie(a.i, a.j) < std::tie(b.i, b.j);
        });
        if (it != terms_.end() && it->i == t.i && it->j == t.j) {
            Rational c = it->c + t.c;
            if (c == 0) terms_.erase(it);
            else it->c = c;
            return;
        }
        terms_.insert(it, t);
    }

    const std::vector<OpTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    int min_shift() const {
        int m = terms_.empty() ? 0 : terms_.front().shift();
        for (const auto& t : terms_) m = std::min(m, t.shift());
        return m;
    }
    int max_shift() const {
        int m = terms_.empty() ? 0 : terms_.front().shift();
        for (const auto& t : terms_) m = std::max(m, t.shift());
        return m;
    }
    bool raising() const { return !empty() && min_shift() > 0; }
    bool lowering() const { return !empty() && max_shift() < 0; }
    /// Shifts of both signs: the cascade has no natural exactness frontier and
    /// resonance must be checked at every step.
    bool mixed() const { return !empty() && min_shift() < 0 && max_shift() > 0; }

    friend bool operator==(const MixedOp& a, const MixedOp& b) { return a.terms_ == b.terms_; }

private:
    std::vector<OpTerm> terms_;
};

inline Rational eval_diagonal(const DiagonalOp& f, const Rational& mu) { return f(mu); }

/// mu (mu-1) ... (mu-j+1); 1 for j = 0.
inline Rational falling_factorial(const Rational& mu, unsigned j) {
    Rational r = 1;
    for (unsigned k = 0; k < j; ++k) r *= mu - k;
    return r;
}

inline GeneralizedSeries apply_op_term(const OpTerm& t, const GeneralizedSeries& s) {
    GeneralizedSeries out(s.direction());
    if (s.frontier()) out.set_frontier(*s.frontier() + t.shift());
    for (const auto& [e, c] : s.terms()) out.add(e + t.shift(), c * t.c * falling_factorial(e, t.j));
    return out;
}

inline GeneralizedSeries apply_mixed(const MixedOp& p, const GeneralizedSeries& s) {
    GeneralizedSeries out(s.direction());
    for (const auto& t : p.terms()) out += apply_op_term(t, s);
    if (p.empty() && s.frontier()) out.set_frontier(*s.frontier());
    return out;
}

inline GeneralizedSeries apply_diagonal(const DiagonalOp& f, const GeneralizedSeries& s) {
    GeneralizedSeries out(s.direction());
    if (s.frontier()) out.set_frontier(*s.frontier());
    for (const auto& [e, c] : s.terms()) out.add(e, c * f(e));
    return out;
}

/// Divides the coefficient at each exponent mu by F(mu).
/// Throws ResonanceEncountered if F vanishes at an exponent present in s.
inline GeneralizedSeries apply_inverse_diagonal(const DiagonalOp& f, const GeneralizedSeries& s) {
    GeneralizedSeries out(s.direction());
    if (s.frontier()) out.set_frontier(*s.frontier());
    for (const auto& [e, c] : s.terms()) {
        Rational fe = f(e);
        if (fe == 0) throw ResonanceEncountered(to_string(e));
        out.add(e, c / fe);
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const DiagonalOp& f) {
    if (f.is_zero()) return os << "0";
    bool first = true;
    const auto& c = f.polynomial().coeffs();
    for (int k = f.degree(); k >= 0; --k) {
        if (c[k] == 0) continue;
        Rational mag = c[k] < 0 ? Rational(-c[k]) : c[k];
        os << (first ? (c[k] < 0 ? "-" : "") : (c[k] < 0 ? " - " : " + "));
        first = false;
        if (k == 0) {
            os << mag;
            continue;
        }
        if (mag != 1) os << mag << "*";
        os << "D";
        if (k > 1) os << "^" << k;
    }
    return os;
}

inline std::ostream& operator<<(std::ostream& os, const OpTerm& t) {
    os << t.c;
    if (t.i > 0) os << "*x" << (t.i > 1 ? "^" + std::to_string(t.i) : "");
    if (t.j > 0) os << "*d" << (t.j > 1 ? "^" + std::to_string(t.j) : "");
    return os;
}

inline std::ostream& operator<<(std::ostream& os, const MixedOp& p) {
    if (p.empty()) return os << "0";
    bool first = true;
    for (const auto& t : p.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << t << ")";
    }
    return os;
}

} // namespace monomial
