// Copyright 2026 The mull Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "mull/syntax.hpp"
#include "support/formula_gen.hpp"

namespace mull {
namespace {

using F = Formula;
const Sort kPos = Sort::Positive;
const Sort kNeg = Sort::Negative;

TEST(Sort, DualIsInvolutive) {
  EXPECT_EQ(dual(kPos), kNeg);
  EXPECT_EQ(dual(dual(kPos)), kPos);
  EXPECT_EQ(dual(dual(kNeg)), kNeg);
}

TEST(Parse, FixpointOfSum) {
  EXPECT_EQ(parse("mu x. 1 + x"), F::mu("x", F::plus(F::one(), F::var("x"))));
}

TEST(Parse, UnaryBindsTighterThanBinary) {
  EXPECT_EQ(parse("!a * b"), F::tensor(F::of_course(F::var("a")), F::var("b")));
}

TEST(Parse, Precedence) {
  EXPECT_EQ(parse("a * b + c"), F::plus(F::tensor(F::var("a"), F::var("b")), F::var("c")));
  EXPECT_EQ(parse("a + b -o c & d"),
            F::lolli(F::plus(F::var("a"), F::var("b")), F::with(F::var("c"), F::var("d"))));
  EXPECT_EQ(parse("a -o b -o c"),
            F::lolli(F::var("a"), F::lolli(F::var("b"), F::var("c"))));
  EXPECT_EQ(parse("a | b * c"), F::tensor(F::par(F::var("a"), F::var("b")), F::var("c")));
  EXPECT_EQ(parse("~!?top"), F::neg(F::of_course(F::why_not(F::top()))));
  EXPECT_EQ(parse("(0 + bot)"), F::plus(F::zero(), F::bot()));
}

TEST(Parse, BinderExtendsRight) {
  EXPECT_EQ(parse("1 + mu x. x * 1 + 0"),
            F::plus(F::one(), F::mu("x", F::plus(F::tensor(F::var("x"), F::one()), F::zero()))));
  EXPECT_EQ(parse("!nu y. y"), F::of_course(F::nu("y", F::var("y"))));
}

TEST(Parse, Utf8Spellings) {
  EXPECT_EQ(parse("μx. 1 ⊕ x"), parse("mu x. 1 + x"));
  EXPECT_EQ(parse("a ⊗ b ⅋ ⊥ ⊸ ⊤"), parse("a * b | bot -o top"));
}

TEST(Parse, TrailingOperatorIsAnError) {
  try {
    parse("mu x. x +");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 9u);
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 10u);
    ASSERT_EQ(e.expected().size(), 1u);
    EXPECT_EQ(e.expected()[0], "formula");
  }
}

TEST(Parse, PositionsCountLines) {
  try {
    parse("a *\n  (b + )");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 8u);
  }
}

TEST(Parse, Rejects) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("a b"), ParseError);
  EXPECT_THROW(parse("mu . x"), ParseError);
  EXPECT_THROW(parse("mu x x"), ParseError);
  EXPECT_THROW(parse("(a"), ParseError);
  EXPECT_THROW(parse("a $ b"), ParseError);
  EXPECT_THROW(parse("12"), ParseError);
}

TEST(Print, Minimal) {
  EXPECT_EQ(print(parse("(mu x. x) + 1")), "(mu x. x) + 1");
  EXPECT_EQ(print(parse("1 + (mu x. x)")), "1 + mu x. x");
  EXPECT_EQ(print(parse("(a -o b) -o c")), "(a -o b) -o c");
  EXPECT_EQ(print(parse("a * (b * c)")), "a * (b * c)");
  EXPECT_EQ(print(parse("~(a | b)")), "~(a | b)");
}

TEST(Print, RoundTripProperty) {
  testing::FormulaGen gen(7);
  for (int i = 0; i < 2000; ++i) {
    F f = gen.any(6);
    std::string s = print(f);
    F g = parse(s);
    ASSERT_TRUE(alpha_equal(f, g)) << s << " reparsed as " << print(g);
  }
}

TEST(Variance, VariableTakesContextSort) {
  EXPECT_EQ(check_variance({{"x", kPos}}, F::var("x")), kPos);
}

TEST(Variance, NegationDualizes) {
  EXPECT_EQ(check_variance({{"x", kPos}}, F::neg(F::var("x"))), kNeg);
}

TEST(Variance, ClosedFixpoint) {
  EXPECT_EQ(check_variance({}, parse("mu x. 1 + x")), kPos);
}

TEST(Variance, NegativeBodyIsRejected) {
  try {
    check_variance({}, F::mu("x", F::neg(F::var("x"))));
    FAIL();
  } catch (const VarianceError& e) {
    EXPECT_EQ(e.subterm(), F::neg(F::var("x")));
    EXPECT_EQ(e.expected(), kPos);
    EXPECT_EQ(e.derived(), kNeg);
  }
}

TEST(Variance, LolliFlipsItsDomain) {
  Context c{{"x", kNeg}, {"y", kPos}};
  EXPECT_EQ(check_variance(c, parse("x -o y")), kPos);
  EXPECT_THROW(check_variance(c, parse("y -o y")), VarianceError);
  EXPECT_EQ(check_variance({}, parse("nu z. (z -o 0) -o 1")), kPos);
}

TEST(Variance, MixedSortsInBinaryRejected) {
  Context c{{"x", kPos}};
  EXPECT_THROW(check_variance(c, parse("x * ~x")), VarianceError);
  EXPECT_EQ(check_variance(c, parse("1 * ~x")), kNeg);
}

TEST(Variance, Unbound) {
  EXPECT_THROW(check_variance({}, parse("a + 1")), UnboundVariable);
}

TEST(Variance, BinderShadowsContext) {
  EXPECT_EQ(check_variance({{"x", kNeg}}, parse("mu x. x * 1")), kPos);
}

TEST(Variance, NestedFixpointWithNegatedBinder) {
  // The inner binder is inferred at sort -.
  EXPECT_EQ(check_variance({}, parse("mu x. ~(nu y. ~x & y)")), kPos);
  EXPECT_THROW(check_variance({}, parse("mu x. nu y. ~x")), VarianceError);
}

TEST(Variance, DuplicateContextEntry) {
  Context c;
  c.push("x", kPos);
  EXPECT_THROW(c.push("x", kNeg), InputError);
}

TEST(Nnf, DeMorganTensor) {
  EXPECT_EQ(nnf(parse("~(a * b)")), parse("~a | ~b"));
}

TEST(Nnf, Involution) { EXPECT_EQ(nnf(parse("~~a")), parse("a")); }

TEST(Nnf, FixpointDuality) {
  EXPECT_EQ(nnf(parse("~(mu x. 1 + x)")), parse("nu x. bot & x"));
  EXPECT_EQ(nnf(parse("~(nu x. a * x)")), parse("mu x. ~a | x"));
}

TEST(Nnf, Exponentials) {
  EXPECT_EQ(nnf(parse("~!(a + 0)")), parse("?(~a & top)"));
  EXPECT_EQ(nnf(parse("~(a -o b)")), parse("a * ~b"));
}

TEST(Nnf, SortPreservedOnClosedPositiveFormulas) {
  testing::FormulaGen gen(11);
  for (int i = 0; i < 2000; ++i) {
    F f = gen.positive(6);
    ASSERT_EQ(check_variance({}, f), kPos) << print(f);
    F g = nnf(f);
    ASSERT_TRUE(is_nnf(g)) << print(g);
    ASSERT_EQ(check_variance({}, g), kPos) << print(f) << " ~> " << print(g);
  }
}

TEST(Substitute, Basic) {
  EXPECT_EQ(substitute(parse("1 + x"), "x", F::zero()), parse("1 + 0"));
}

TEST(Substitute, BoundOccurrenceUntouched) {
  EXPECT_EQ(substitute(parse("mu x. x"), "x", F::one()), parse("mu x. x"));
}

TEST(Substitute, AvoidsCapture) {
  F r = substitute(parse("mu y. x"), "x", F::var("y"));
  ASSERT_EQ(r.kind(), Kind::Mu);
  EXPECT_NE(r.name(), "y");
  EXPECT_EQ(r.body(), F::var("y"));
  EXPECT_TRUE(alpha_equal(r, parse("mu z. y")));
}

TEST(Substitute, CaptureAvoidingKeepsBodyReferences) {
  F r = substitute(parse("mu y. x * y"), "x", F::var("y"));
  EXPECT_TRUE(alpha_equal(r, parse("mu z. y * z")));
}

TEST(Substitute, UnfoldingPreservesSort) {
  testing::FormulaGen gen(5);
  int checked = 0;
  for (int i = 0; i < 3000; ++i) {
    F f = gen.positive(6);
    if (!f.is_binder()) continue;
    ASSERT_EQ(check_variance({}, unfold(f)), check_variance({}, f)) << print(f);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Alpha, Equivalence) {
  EXPECT_TRUE(alpha_equal(parse("mu x. x * a"), parse("mu y. y * a")));
  EXPECT_FALSE(alpha_equal(parse("mu x. x * a"), parse("mu y. a * y")));
  EXPECT_FALSE(alpha_equal(parse("mu x. y"), parse("mu y. y")));
  EXPECT_TRUE(alpha_equal(parse("mu x. nu y. x | y"), parse("mu y. nu x. y | x")));
}

TEST(FreeVariables, RespectsBinders) {
  EXPECT_EQ(free_variables(parse("mu x. x * y + nu y. y")), (std::set<std::string>{"y"}));
}

}  // namespace
}  // namespace mull
