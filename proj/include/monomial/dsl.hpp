#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "monomial/normal_form.hpp"

namespace monomial::dsl {

/// ODE text plus parameter bindings. `param k = p/q` lines inside the text
/// bind too; entries in `bindings` take precedence over them.
struct OdeSource {
    std::string text;
    std::map<std::string, Rational> bindings;
};

namespace detail {

struct Token {
    enum Kind { number, ident, symbol, end } kind = end;
    std::string text;
    int line = 1, column = 1;
};

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        std::size_t j = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Token::number;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.kind = Token::ident;
        } else if (std::string("+-*/^=()'").find(c) != std::string::npos) {
            j = i + 1;
            t.kind = Token::symbol;
        } else {
            throw ParseError(line, col, "a number, identifier or one of + - * / ^ = ( ) '");
        }
        t.text = src.substr(i, j - i);
        advance(j - i);
        out.push_back(t);
    }
    Token e;
    e.line = line;
    e.column = col;
    out.push_back(e);
    return out;
}

// Linear form in y: derivative order -> coefficient (exponent -> value).
// Key -1 holds the part free of y.
using Coeff = std::map<Rational, Rational>;
using Lin = std::map<int, Coeff>;

inline void add_into(Coeff& a, const Coeff& b, const Rational& scale) {
    for (const auto& [e, c] : b) {
        Rational v = a[e] + scale * c;
        if (v == 0) a.erase(e);
        else a[e] = v;
    }
}

inline Lin combine(Lin a, const Lin& b, const Rational& scale) {
    for (const auto& [k, c] : b) {
        add_into(a[k], c, scale);
        if (a[k].empty()) a.erase(k);
    }
    return a;
}

inline Coeff multiply(const Coeff& a, const Coeff& b) {
    Coeff out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) add_into(out, Coeff{{ea + eb, ca * cb}}, 1);
    return out;
}

inline bool has_y(const Lin& l) {
    for (const auto& [k, c] : l)
        if (k >= 0) return true;
    return false;
}

inline Lin constant(const Rational& v) { return v == 0 ? Lin{} : Lin{{-1, Coeff{{0, v}}}}; }

class Parser {
public:
    Parser(std::vector<Token> tokens, std::map<std::string, Rational> overrides)
        : toks_(std::move(tokens)), overrides_(std::move(overrides)) {}

    LinearODE parse() {
        while (peek().kind == Token::ident && peek().text == "param") parse_param();
        for (const auto& [k, v] : overrides_) bindings_[k] = v;
        Lin lhs = expr();
        expect_symbol("=", "'='");
        Lin rhs = expr();
        if (peek().kind != Token::end) fail("end of input");
        return build(combine(lhs, rhs, -1));
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, Rational> overrides_, bindings_;

    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }
    bool at_symbol(const char* s) const { return peek().kind == Token::symbol && peek().text == s; }
    [[noreturn]] void fail(const std::string& expected) const {
        throw ParseError(peek().line, peek().column, expected);
    }
    void expect_symbol(const char* s, const std::string& expected) {
        if (!at_symbol(s)) fail(expected);
        take();
    }

    // number ['/' number]
    Rational rational_literal() {
        if (peek().kind != Token::number) fail("a number");
        Integer num(take().text);
        if (at_symbol("/")) {
            take();
            if (peek().kind != Token::number) fail("a denominator");
            const Token& d = take();
            Integer den(d.text);
            if (den == 0) throw ParseError(d.line, d.column, "a nonzero denominator");
            return Rational(num, den);
        }
        return Rational(num);
    }

    void parse_param() {
        take();
        if (peek().kind != Token::ident) fail("a parameter name");
        std::string name = take().text;
        if (name == "x" || name == "y") fail("a parameter name other than x or y");
        expect_symbol("=", "'='");
        bool neg = false;
        if (at_symbol("-")) {
            take();
            neg = true;
        }
        Rational v = rational_literal();
        bindings_[name] = neg ? -v : v;
    }

    Rational lookup(const Token& t) {
        auto it = bindings_.find(t.text);
        if (it == bindings_.end()) throw UnboundParameter(t.text, t.line, t.column);
        return it->second;
    }

    Lin expr() {
        Rational sign = 1;
        if (at_symbol("+") || at_symbol("-")) sign = take().text == "-" ? -1 : 1;
        Lin acc = combine({}, term(), sign);
        while (at_symbol("+") || at_symbol("-")) {
            Rational s = take().text == "-" ? -1 : 1;
            acc = combine(acc, term(), s);
        }
        return acc;
    }

    Lin term() {
        Lin acc = factor();
        while (at_symbol("*")) {
            take();
            Token at = peek();
            Lin rhs = factor();
            if (has_y(acc) && has_y(rhs)) throw NonlinearTerm(at.line, at.column);
            Lin out;
            for (const auto& [ka, ca] : acc)
                for (const auto& [kb, cb] : rhs) {
                    int k = std::max(ka, kb);
                    add_into(out[k], multiply(ca, cb), 1);
                    if (out[k].empty()) out.erase(k);
                }
            acc = std::move(out);
        }
        return acc;
    }

    // ['-'] (number ['/' number] | ident)
    Rational exponent() {
        bool neg = false;
        if (at_symbol("-")) {
            take();
            neg = true;
        }
        Rational v;
        if (peek().kind == Token::number) v = rational_literal();
        else if (peek().kind == Token::ident && peek().text != "x" && peek().text != "y") v = lookup(take());
        else if (at_symbol("(")) {
            take();
            v = exponent();
            expect_symbol(")", "')'");
        } else fail("an exponent");
        return neg ? -v : v;
    }

    Lin factor() {
        const Token t = peek();
        Lin base;
        bool is_x = false;
        if (t.kind == Token::number) {
            base = constant(rational_literal());
        } else if (t.kind == Token::ident && t.text == "x") {
            take();
            is_x = true;
            base = Lin{{-1, Coeff{{1, 1}}}};
        } else if (t.kind == Token::ident && t.text == "y") {
            take();
            int primes = 0;
            while (at_symbol("'")) {
                take();
                ++primes;
            }
            base = Lin{{primes, Coeff{{0, 1}}}};
        } else if (t.kind == Token::ident) {
            take();
            base = constant(lookup(t));
        } else if (at_symbol("(")) {
            take();
            base = expr();
            expect_symbol(")", "')'");
        } else {
            fail("a number, parameter, x, y or '('");
        }
        if (!at_symbol("^")) return base;
        take();
        const Token et = peek();
        Rational e = exponent();
        if (is_x) return Lin{{-1, Coeff{{e, 1}}}};
        if (!is_integer(e) || e < 0) throw ParseError(et.line, et.column, "a non-negative integer exponent");
        unsigned n = numerator(e).convert_to<unsigned>();
        if (has_y(base) && n > 1) throw NonlinearTerm(et.line, et.column);
        if (n == 0) return constant(1);
        Lin out = base;
        for (unsigned k = 1; k < n; ++k) {
            Lin next;
            for (const auto& [ka, ca] : out)
                for (const auto& [kb, cb] : base) add_into(next[std::max(ka, kb)], multiply(ca, cb), 1);
            out = std::move(next);
        }
        return out;
    }

    LinearODE build(const Lin& l) {
        int order = -1;
        for (const auto& [k, c] : l)
            if (k >= 0 && !c.empty()) order = std::max(order, k);
        if (order < 1) throw InvalidArgument("equation has no derivative of y");
        std::vector<SparsePoly> polys(static_cast<std::size_t>(order + 1));
        for (const auto& [k, c] : l) {
            if (k < 0) continue;
            for (const auto& [e, v] : c) {
                if (!is_integer(e) || e < 0)
                    throw InvalidArgument("coefficient of y" + std::string(k, '\'') + " must be a polynomial in x");
                polys[k][numerator(e).convert_to<int>()] = v;
            }
        }
        std::optional<GeneralizedSeries> source;
        if (auto it = l.find(-1); it != l.end() && !it->second.empty()) {
            GeneralizedSeries q;
            for (const auto& [e, v] : it->second) q.add(e, -v);
            source = q;
        }
        return LinearODE(std::move(polys), std::move(source));
    }
};

} // namespace detail

/// Grammar:
///   file     := { "param" ident "=" ["-"] rational } equation
///   equation := expr "=" expr
///   expr     := ["+"|"-"] term (("+"|"-") term)*
///   term     := factor ("*" factor)*
///   factor   := (rational | ident | "x" | "y" {"'"} | "(" expr ")") ["^" exponent]
/// Terms free of y move to the right-hand side and form the source.
inline LinearODE parse_ode(const OdeSource& src) {
    detail::Parser p(detail::tokenize(src.text), src.bindings);
    return p.parse();
}

inline LinearODE parse_ode(const std::string& text, const std::map<std::string, Rational>& bindings = {}) {
    return parse_ode(OdeSource{text, bindings});
}

} // namespace monomial::dsl
