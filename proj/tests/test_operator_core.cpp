#include <gtest/gtest.h>

#include "monomial/operators.hpp"
#include "test_helpers.hpp"

using namespace monomial;
using monomial::testing::series;

TEST(ExactScalar, LowestTermsAndSign) {
    Rational r = rat(6, -4);
    EXPECT_EQ(numerator(r), -3);
    EXPECT_EQ(denominator(r), 2);
    EXPECT_EQ(to_string(Rational(0)), "0");
    EXPECT_EQ(to_string(Rational(3)), "3");
    EXPECT_EQ(to_string(Rational(-1, 2)), "-1/2");
    EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
    EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
    EXPECT_THROW(parse_rational("abc"), InvalidArgument);
}

TEST(EvalDiagonal, Examples) {
    EXPECT_EQ(eval_diagonal(DiagonalOp{-2, 1}, 2), 0);
    EXPECT_EQ(eval_diagonal(DiagonalOp::falling(2), 3), 6);
    // -4D^2 + 2D + 2 vanishes at the integer indicial root 1.
    EXPECT_EQ(eval_diagonal(DiagonalOp{2, 2, -4}, 1), 0);
}

TEST(FallingFactorial, Examples) {
    EXPECT_EQ(falling_factorial(5, 2), 20);
    EXPECT_EQ(falling_factorial(rat(1, 2), 1), rat(1, 2));
    EXPECT_EQ(falling_factorial(3, 0), 1);
    EXPECT_EQ(falling_factorial(2, 3), 0);
}

TEST(ApplyOpTerm, Examples) {
    EXPECT_EQ(apply_op_term(OpTerm(1, 0, 2), series({{4, 1}})), series({{2, 12}}));
    EXPECT_EQ(apply_op_term(OpTerm(1, 3, 1), series({{2, 1}})), series({{4, 2}}));
    EXPECT_EQ(apply_op_term(OpTerm(1, 2, 0), series({{rat(1, 2), 1}})), series({{rat(5, 2), 1}}));
    // d^2 kills x^1; the zero result is dropped.
    EXPECT_TRUE(apply_op_term(OpTerm(1, 0, 2), series({{1, 5}})).empty());
}

TEST(ApplyOpTerm, FrontierMovesWithShift) {
    auto s = series({{0, 1}, {1, 1}});
    s.set_frontier(3);
    auto out = apply_op_term(OpTerm(1, 2, 0), s);
    ASSERT_TRUE(out.frontier());
    EXPECT_EQ(*out.frontier(), 5);
}

TEST(OpTerm, RejectsDiagonalAndZero) {
    EXPECT_THROW(OpTerm(1, 2, 2), InvalidArgument);
    EXPECT_THROW(OpTerm(0, 2, 1), InvalidArgument);
}

TEST(MixedOp, MergesAndClassifies) {
    MixedOp p{OpTerm(1, 0, 2), OpTerm(2, 0, 2), OpTerm(1, 0, 1)};
    ASSERT_EQ(p.terms().size(), 2u);
    EXPECT_EQ(p.terms()[1].c, 3);
    EXPECT_TRUE(p.lowering());
    EXPECT_FALSE(p.mixed());
    p.add(OpTerm(1, 3, 0));
    EXPECT_TRUE(p.mixed());
    p.add(OpTerm(-3, 0, 2));
    EXPECT_EQ(p.terms().size(), 2u);
}

TEST(ApplyDiagonal, Examples) {
    EXPECT_EQ(apply_diagonal(DiagonalOp{-2, 1}, series({{5, 3}})), series({{5, 9}}));
    EXPECT_TRUE(apply_diagonal(DiagonalOp::falling(2), series({{0, 1}, {1, 1}})).empty());
    EXPECT_TRUE(apply_diagonal(DiagonalOp{rat(-1, 4), 0, 1}, series({{rat(1, 2), 1}})).empty());
}

TEST(ApplyInverseDiagonal, Examples) {
    EXPECT_EQ(apply_inverse_diagonal(DiagonalOp{-2, 1}, series({{5, 3}})), series({{5, 1}}));
    EXPECT_EQ(apply_inverse_diagonal(DiagonalOp{3, 1}, series({{0, 2}})), series({{0, rat(2, 3)}}));
    try {
        apply_inverse_diagonal(DiagonalOp::falling(2), series({{0, 1}}));
        FAIL() << "expected resonance";
    } catch (const ResonanceEncountered& e) {
        EXPECT_EQ(e.exponent(), "0");
        EXPECT_EQ(e.name(), "ResonanceEncountered");
    }
}

TEST(Series, CanonicalRepresentation) {
    GeneralizedSeries a, b;
    a.add(1, 2);
    a.add(rat(1, 2), 3);
    a.add(1, -2);
    b.add(rat(1, 2), 3);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 1u);
}

TEST(Series, FrontierDropsUntrackedTerms) {
    auto s = series({{0, 1}, {2, 1}, {4, 1}});
    s.set_frontier(3);
    EXPECT_EQ(s.size(), 2u);
    s.add(5, 1);
    EXPECT_EQ(s.size(), 2u);
    auto d = series({{0, 1}, {-2, 1}, {-4, 1}}, Direction::descending);
    d.set_frontier(-3);
    EXPECT_EQ(d.size(), 2u);
    EXPECT_EQ(*d.leading_exponent(), 0);
}

// Property checks over random operators and series.
class OperatorProperties : public ::testing::TestWithParam<unsigned> {};

TEST_P(OperatorProperties, Linearity) {
    monomial::testing::RationalGen gen(GetParam());
    auto s1 = gen.sparse_series(gen(), 4);
    auto s2 = gen.sparse_series(gen(), 4);
    Rational a = gen(), b = gen();
    DiagonalOp f{gen(), gen(), gen.nonzero()};
    OpTerm t(gen.nonzero(), gen.integer(0, 3), gen.integer(4, 6));
    auto combo = a * s1 + b * s2;
    EXPECT_EQ(apply_diagonal(f, combo), a * apply_diagonal(f, s1) + b * apply_diagonal(f, s2));
    EXPECT_EQ(apply_op_term(t, combo), a * apply_op_term(t, s1) + b * apply_op_term(t, s2));
}

TEST_P(OperatorProperties, InverseRoundTrip) {
    monomial::testing::RationalGen gen(GetParam() + 1000);
    // Roots at integers, series at half-integers: never resonant.
    DiagonalOp f = DiagonalOp{Rational(-gen.integer(-4, 4)), 1} * DiagonalOp{Rational(-gen.integer(-4, 4)), 1};
    auto s = gen.sparse_series(rat(1, 2), 5);
    EXPECT_EQ(apply_diagonal(f, apply_inverse_diagonal(f, s)), s);
    EXPECT_EQ(apply_inverse_diagonal(f, apply_diagonal(f, s)), s);
}

TEST_P(OperatorProperties, ShiftLaw) {
    monomial::testing::RationalGen gen(GetParam() + 2000);
    auto s = gen.sparse_series(gen(), 5);
    int i = gen.integer(0, 4);
    OpTerm t(gen.nonzero(), i, i == 0 ? 5 : 0);
    auto out = apply_op_term(t, s);
    for (const auto& [e, c] : out.terms()) EXPECT_NE(s.coefficient(e - t.shift()), 0);
}

INSTANTIATE_TEST_SUITE_P(Random, OperatorProperties, ::testing::Range(1u, 21u));
