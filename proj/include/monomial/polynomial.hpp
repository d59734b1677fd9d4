#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "monomial/rational.hpp"

namespace monomial {

/// Dense univariate polynomial; coefficient k multiplies t^k. Trailing zeros are
/// always trimmed, so the zero polynomial has no coefficients.
template <typename T>
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }
    explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial constant(const T& v) { return Polynomial(std::vector<T>{v}); }
    static Polynomial monomial(const T& v, std::size_t power) {
        std::vector<T> c(power + 1, T(0));
        c[power] = v;
        return Polynomial(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<T>& coeffs() const { return c_; }
    T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }
    T leading() const { return c_.empty() ? T(0) : c_.back(); }

    template <typename U>
    U operator()(const U& t) const {
        U acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + U(*it);
        return acc;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<T> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * T(k);
        return Polynomial(std::move(d));
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        trim();
        return *this;
    }
    Polynomial& operator*=(const T& v) {
        for (auto& x : c_) x *= v;
        trim();
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) { return a *= T(-1); }
    friend Polynomial operator*(Polynomial a, const T& v) { return a *= v; }
    friend Polynomial operator*(const T& v, Polynomial a) { return a *= v; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    /// Euclidean division over a field: returns (quotient, remainder).
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
        if (d.is_zero()) throw InvalidArgument("polynomial division by zero");
        Polynomial rem = *this;
        if (rem.degree() < d.degree()) return {Polynomial{}, rem};
        std::vector<T> q(rem.degree() - d.degree() + 1, T(0));
        while (!rem.is_zero() && rem.degree() >= d.degree()) {
            std::size_t shift = rem.degree() - d.degree();
            T factor = rem.leading() / d.leading();
            q[shift] = factor;
            for (std::size_t k = 0; k < d.c_.size(); ++k) rem.c_[k + shift] -= factor * d.c_[k];
            rem.c_.pop_back();
            rem.trim();
        }
        return {Polynomial(std::move(q)), rem};
    }

    Polynomial monic() const { return is_zero() ? *this : *this * (T(1) / leading()); }

private:
    void trim() {
        while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
    }

    std::vector<T> c_;
};

using RationalPolynomial = Polynomial<Rational>;

/// Monic gcd over a field (zero if both inputs are zero).
template <typename T>
Polynomial<T> gcd(Polynomial<T> a, Polynomial<T> b) {
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

namespace detail {

// Trial division; a cofactor left above the bound is treated as prime.
inline std::map<Integer, unsigned> factorize(Integer n) {
    std::map<Integer, unsigned> f;
    if (n < 0) n = -n;
    for (Integer p = 2; p * p <= n && p < 2000000; ++p) {
        while (n % p == 0) {
            ++f[p];
            n /= p;
        }
    }
    if (n > 1) ++f[n];
    return f;
}

inline std::vector<Integer> divisors(const Integer& n) {
    std::vector<Integer> out{1};
    for (const auto& [p, e] : factorize(n)) {
        std::size_t base = out.size();
        Integer pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    return out;
}

} // namespace detail

/// Distinct rational roots, ascending. Uses the rational root theorem on the
/// denominator-cleared integer polynomial; every returned root is verified exactly.
inline std::vector<Rational> rational_roots(const RationalPolynomial& poly) {
    if (poly.is_zero()) throw InvalidArgument("rational_roots of the zero polynomial");
    std::set<Rational> roots;
    RationalPolynomial p = poly;
    // Strip the factor t^k.
    std::size_t low = 0;
    while (p.coeff(low) == 0) ++low;
    if (low > 0) {
        roots.insert(Rational(0));
        std::vector<Rational> c(p.coeffs().begin() + low, p.coeffs().end());
        p = RationalPolynomial(std::move(c));
    }
    while (p.degree() >= 1) {
        Integer lcm = 1;
        for (const auto& c : p.coeffs()) lcm = boost::multiprecision::lcm(lcm, denominator(c));
        Integer a0 = numerator(p.coeff(0) * lcm);
        Integer ad = numerator(p.leading() * lcm);
        bool found = false;
        for (const auto& num : detail::divisors(a0)) {
            for (const auto& den : detail::divisors(ad)) {
                for (int sign : {1, -1}) {
                    Rational cand(Integer(sign) * num, den);
                    if (p(cand) == 0) {
                        roots.insert(cand);
                        p = p.divmod(RationalPolynomial{-cand, Rational(1)}).first;
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) break;
    }
    return {roots.begin(), roots.end()};
}

/// The polynomial left after dividing out every rational root (with multiplicity).
inline RationalPolynomial deflate_rational_roots(RationalPolynomial p) {
    for (const auto& r : rational_roots(p)) {
        RationalPolynomial lin{-r, Rational(1)};
        for (;;) {
            auto [q, rem] = p.divmod(lin);
            if (!rem.is_zero()) break;
            p = q;
        }
    }
    return p;
}

/// Multiplicity of `root` as a zero of p (p nonzero).
inline unsigned root_multiplicity(RationalPolynomial p, const Rational& root) {
    unsigned m = 0;
    RationalPolynomial lin{-root, Rational(1)};
    while (!p.is_zero() && p(root) == 0) {
        p = p.divmod(lin).first;
        ++m;
    }
    return m;
}

} // namespace monomial
