#include <gtest/gtest.h>

#include "mucalc/mucalc.hpp"

using namespace mucalc;

namespace {

// Ordering [Z, X] with Z a nu-variable, as for nu Z. mu X. ([a]Z \/ <a>X).
VarOrdering zx() { return variable_ordering(parse("nu Z. mu X. ([a]Z \\/ <a>X)")); }

const Name z1{0, 1}, z2{0, 2}, z3{0, 3};
const Name x1{1, 1};

// All subsequences of w.
std::vector<NameSeq> subsequences(const NameSeq& w) {
  std::vector<NameSeq> out;
  for (std::uint32_t mask = 0; mask < (1U << w.size()); ++mask) {
    NameSeq s;
    for (std::size_t i = 0; i < w.size(); ++i)
      if ((mask >> i) & 1U) s.push_back(w[i]);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(LtUnder, Examples) {
  EXPECT_TRUE(lt_under({z1}, {z2}, {z1, z2}));
  EXPECT_FALSE(lt_under({z1}, {z1}, {z1, z2}));
  EXPECT_FALSE(lt_under({z1}, {z2}, {z2, z1}));
  EXPECT_TRUE(lt_under({z2}, {z1}, {z2, z1}));
  EXPECT_THROW(lt_under({z3}, {z1}, {z1, z2}), std::invalid_argument);
}

TEST(LtUnder, StrictOrderOnSubsequences) {
  NameSeq w{z1, x1, z2, z3};
  auto subs = subsequences(w);
  for (const auto& u : subs) {
    EXPECT_FALSE(lt_under(u, u, w));
    for (const auto& v : subs)
      for (const auto& t : subs)
        if (lt_under(u, v, w) && lt_under(v, t, w)) EXPECT_TRUE(lt_under(u, t, w));
  }
}

TEST(Restrict, Examples) {
  auto ord = zx();
  EXPECT_EQ(restrict({z1, x1, z2}, "Z", ord), (NameSeq{z1, z2}));
  EXPECT_EQ(restrict({z1, x1, z2}, "X", ord), (NameSeq{z1, x1, z2}));
  EXPECT_EQ(restrict({}, "Z", ord), NameSeq{});
  EXPECT_THROW(restrict({z1}, "Y", ord), std::invalid_argument);
}

TEST(Restrict, IdempotentAndMonotone) {
  NameSeq w{z1, x1, z2, z3};
  for (const auto& u : subsequences(w))
    for (std::uint32_t i = 0; i < 2; ++i) {
      EXPECT_EQ(restrict(restrict(u, i), i), restrict(u, i));
      EXPECT_TRUE(is_subsequence(restrict(u, i), u));
    }
}

TEST(SqSubset, Examples) {
  auto ord = zx();
  EXPECT_TRUE(sqsubset_under({z1, z2}, {z1}, {z1, z2}, ord));
  EXPECT_FALSE(sqsubset_under({z1}, {z1, z2}, {z1, z2}, ord));
  EXPECT_FALSE(sqsubset_under({z1}, {z1}, {z1, z2}, ord));
}

// Two distinct annotations drawn from one context are comparable in exactly
// one direction when they arise from the same formula; over arbitrary
// subsequences the order is at least asymmetric.
TEST(SqSubset, Asymmetric) {
  auto ord = zx();
  NameSeq w{z1, z2, z3};
  for (const auto& u : subsequences(w))
    for (const auto& v : subsequences(w))
      if (sqsubset_under(u, v, w, ord)) EXPECT_FALSE(sqsubset_under(v, u, w, ord));
}

TEST(FreshName, Examples) {
  EXPECT_EQ(fresh_name(0, {}, 5), z1);
  EXPECT_EQ(fresh_name(0, {z1}, 5), z2);
  EXPECT_EQ(fresh_name(0, {z1, z3}, 5), z2);
  EXPECT_EQ(fresh_name(0, {x1}, 5), z1);
  EXPECT_THROW(fresh_name(0, {z1, z2}, 2), NameBudgetExhausted);
}

TEST(NameCodec, PrintAndParse) {
  NameCodec codec(zx());
  EXPECT_EQ(codec.print(z2), "z2");
  EXPECT_EQ(codec.print(NameSeq{z1, x1}), "z1 x1");
  EXPECT_EQ(codec.parse("z12"), (Name{0, 12}));
  EXPECT_EQ(codec.parse("x1"), x1);
  EXPECT_FALSE(codec.parse("y1").has_value());
  EXPECT_FALSE(codec.parse("z").has_value());

  // A variable name ending in a digit would make "z12" ambiguous, so the
  // codec falls back to Var_index.
  NameCodec clash(variable_ordering(parse("nu Z. [a](Z /\\ nu Z1. <a>Z1)")));
  EXPECT_EQ(clash.print(Name{1, 2}), "Z1_2");
  EXPECT_EQ(clash.parse("Z_3"), (Name{0, 3}));
}
