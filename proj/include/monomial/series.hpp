#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "monomial/rational.hpp"

namespace monomial {

enum class Direction { ascending, descending };

inline const char* to_string(Direction d) { return d == Direction::ascending ? "ascending" : "descending"; }

/// Finite sum of terms c·x^e with exact rational exponents and coefficients.
///
/// Only nonzero coefficients are stored. The optional frontier marks where the
/// series stops being exact: for an ascending series every exponent >= frontier
/// is untracked, for a descending series every exponent <= frontier. Stored terms
/// always lie strictly on the tracked side.
class GeneralizedSeries {
public:
    using Terms = std::map<Rational, Rational>;

    explicit GeneralizedSeries(Direction dir = Direction::ascending) : dir_(dir) {}

    static GeneralizedSeries monomial(const Rational& coeff, const Rational& exponent,
                                      Direction dir = Direction::ascending) {
        GeneralizedSeries s(dir);
        s.add(exponent, coeff);
        return s;
    }

    Direction direction() const { return dir_; }
    void set_direction(Direction d) {
        dir_ = d;
        if (frontier_) set_frontier(*frontier_);
    }

    const Terms& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(const Rational& exponent) const {
        auto it = terms_.find(exponent);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Accumulates coeff into the term at `exponent`. Terms on the untracked side
    /// of the frontier are ignored.
    void add(const Rational& exponent, const Rational& coeff) {
        if (coeff == 0 || !tracked(exponent)) return;
        auto [it, inserted] = terms_.try_emplace(exponent, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const std::optional<Rational>& frontier() const { return frontier_; }

    /// Sets the frontier and drops every stored term on its untracked side.
    void set_frontier(const Rational& f) {
        frontier_ = f;
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (!tracked(it->first))
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    /// Tightens the frontier: keeps whichever of the current and `f` is more restrictive.
    void restrict_frontier(const Rational& f) {
        if (!frontier_ || (dir_ == Direction::ascending ? f < *frontier_ : f > *frontier_))
            set_frontier(f);
    }

    void clear_frontier() { frontier_.reset(); }

    bool tracked(const Rational& exponent) const {
        if (!frontier_) return true;
        return dir_ == Direction::ascending ? exponent < *frontier_ : exponent > *frontier_;
    }

    std::optional<Rational> lowest_exponent() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->first;
    }
    std::optional<Rational> highest_exponent() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first;
    }
    /// First exponent in the series' own direction.
    std::optional<Rational> leading_exponent() const {
        return dir_ == Direction::ascending ? lowest_exponent() : highest_exponent();
    }

    /// Terms in the series' own direction (ascending or descending exponent order).
    std::vector<std::pair<Rational, Rational>> ordered_terms() const {
        std::vector<std::pair<Rational, Rational>> out(terms_.begin(), terms_.end());
        if (dir_ == Direction::descending) std::reverse(out.begin(), out.end());
        return out;
    }

    GeneralizedSeries& operator+=(const GeneralizedSeries& o) {
        if (o.frontier_) restrict_frontier(*o.frontier_);
        for (const auto& [e, c] : o.terms_) add(e, c);
        return *this;
    }
    GeneralizedSeries& operator-=(const GeneralizedSeries& o) {
        if (o.frontier_) restrict_frontier(*o.frontier_);
        for (const auto& [e, c] : o.terms_) add(e, -c);
        return *this;
    }
    GeneralizedSeries& operator*=(const Rational& v) {
        if (v == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= v;
        return *this;
    }
    friend GeneralizedSeries operator+(GeneralizedSeries a, const GeneralizedSeries& b) { return a += b; }
    friend GeneralizedSeries operator-(GeneralizedSeries a, const GeneralizedSeries& b) { return a -= b; }
    friend GeneralizedSeries operator*(GeneralizedSeries a, const Rational& v) { return a *= v; }
    friend GeneralizedSeries operator*(const Rational& v, GeneralizedSeries a) { return a *= v; }
    friend GeneralizedSeries operator-(GeneralizedSeries a) { return a *= Rational(-1); }

    friend bool operator==(const GeneralizedSeries& a, const GeneralizedSeries& b) {
        return a.dir_ == b.dir_ && a.frontier_ == b.frontier_ && a.terms_ == b.terms_;
    }

    /// Copy keeping only exponents e with lo <= e <= hi.
    GeneralizedSeries window(const Rational& lo, const Rational& hi) const {
        GeneralizedSeries out(dir_);
        for (auto it = terms_.lower_bound(lo); it != terms_.end() && it->first <= hi; ++it)
            out.terms_.insert(*it);
        return out;
    }

private:
    Terms terms_;
    std::optional<Rational> frontier_;
    Direction dir_;
};

inline std::ostream& operator<<(std::ostream& os, const GeneralizedSeries& s) {
    if (s.empty()) return os << "0";
    bool first = true;
    for (const auto& [e, c] : s.ordered_terms()) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (e == 0) {
            os << mag;
            continue;
        }
        if (mag != 1) os << mag << "*";
        os << "x";
        if (e != 1) {
            if (is_integer(e) && e > 0) os << "^" << e;
            else os << "^(" << e << ")";
        }
    }
    if (s.frontier()) os << " + O(x^" << *s.frontier() << ")";
    return os;
}

} // namespace monomial
