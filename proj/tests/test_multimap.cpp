#include <gtest/gtest.h>

#include "hpl/multimap.hpp"
#include "support.hpp"

using namespace hpl;
using hpl::testing::Rng;

namespace {

SpacePtr two_dim_lie_space() { return make_space({{"e1", -1}, {"e2", -1}}); }

SymMultiMap two_dim_lie_bracket(SpacePtr v) {
  SymMultiMap b(v, v, 1, 2);
  b.set({0, 1}, Vector::basis(0));
  return b;
}

}  // namespace

TEST(SymMultiMap, EvaluationUsesSymmetry) {
  auto v = make_space({{"x", 1}, {"y", 0}});
  SymMultiMap f(v, v, 0, 2);
  f.set({1, 0}, Vector::basis(0, 3));
  EXPECT_EQ(f.evaluate_basis(std::vector<size_t>{0, 1}), Vector::basis(0, 3));
  EXPECT_EQ(f.evaluate_basis(std::vector<size_t>{1, 0}), Vector::basis(0, 3));
  SymMultiMap g(v, v, 1, 2);
  g.set({0, 0}, Vector{});
  EXPECT_THROW(g.set({0, 0}, Vector::basis(1)), InputError);
  EXPECT_THROW(g.set({0, 1}, Vector::basis(1)), InputError);  // wrong degree
  EXPECT_THROW(g.set({0, 1, 1}, Vector::basis(0)), InputError);  // over cap
}

TEST(SymMultiMap, OddArgumentsAntisymmetrise) {
  auto v = two_dim_lie_space();
  auto b = two_dim_lie_bracket(v);
  EXPECT_EQ(b.evaluate_basis(std::vector<size_t>{1, 0}), -Vector::basis(0));
}

TEST(Circle, MatchesFullSymmetricGroupOracle) {
  Rng rng(5);
  for (int t = 0; t < 25; ++t) {
    auto v = hpl::testing::random_space(rng, rng.uniform(1, 3));
    auto f = hpl::testing::random_map(rng, v, v, rng.uniform(-1, 2), rng.uniform(0, 3));
    auto g = hpl::testing::random_map(rng, v, v, rng.uniform(-1, 2), rng.uniform(0, 3));
    auto fg = circle(f, g);
    EXPECT_FALSE(fg.truncated());
    for (int p = 0; p <= fg.arity_cap(); ++p)
      for (const auto& w : canonical_words(*v, p))
        EXPECT_EQ(fg.at_canonical(w), hpl::testing::circle_by_full_sum(f, g, w)) << "word " << fg.describe_word(w);
  }
}

TEST(Circle, ZeroArityConventions) {
  auto v = make_space({{"a", 0}, {"b", 1}});
  SymMultiMap f(v, v, 0, 1);
  f.set({0}, Vector::basis(0, 2));
  SymMultiMap g(v, v, 0, 0);
  g.set_zero_component(Vector::basis(0, 5));
  auto fg = circle(f, g);
  EXPECT_EQ(fg.zero_component(), Vector::basis(0, 10));
  EXPECT_TRUE(circle(g, f).is_zero());
}

TEST(NrBracket, AntisymmetryAndJacobiOnRandomTriples) {
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    auto v = hpl::testing::random_space(rng, rng.uniform(1, 3));
    int m = rng.uniform(-1, 2), n = rng.uniform(-1, 2), k = rng.uniform(-1, 2);
    auto f = hpl::testing::random_map(rng, v, v, m, rng.uniform(0, 3));
    auto g = hpl::testing::random_map(rng, v, v, n, rng.uniform(0, 3));
    auto h = hpl::testing::random_map(rng, v, v, k, rng.uniform(0, 2));
    auto fg = nr_bracket(f, g);
    auto gf = nr_bracket(g, f);
    EXPECT_EQ(fg, Rational(-sign_power(m * n)) * gf);
    auto lhs = nr_bracket(f, nr_bracket(g, h));
    auto rhs = nr_bracket(nr_bracket(f, g), h) + Rational(sign_power(m * n)) * nr_bracket(g, nr_bracket(f, h));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(CurvedLinfty, LieBracketSquaresToZeroIffJacobi) {
  auto v = two_dim_lie_space();
  EXPECT_TRUE(check_curved_linfty(two_dim_lie_bracket(v)).holds());
  // A bracket on a 3-dim odd space violating Jacobi: [a,b]=a, [b,c]=b, [a,c]=c
  auto w = make_space({{"a", -1}, {"b", -1}, {"c", -1}});
  SymMultiMap bad(w, w, 1, 2);
  bad.set({0, 1}, Vector::basis(0));
  bad.set({1, 2}, Vector::basis(1));
  bad.set({0, 2}, Vector::basis(2));
  auto r = check_curved_linfty(bad);
  EXPECT_FALSE(r.holds());
  EXPECT_FALSE(r.verdicts[0].defects.empty());
}

TEST(ShiftMap, RoundTripAndTwoAryDegreeOneSign) {
  // antisymmetric degree-0 bracket on a space concentrated in degree 1: [x,x] lands in degree 2
  auto g = make_space({{"x", 1}, {"z", 2}});
  AntiMultiMap b(g, g, 0, 2);
  b.set({0, 0}, Vector::basis(1));
  auto d = shift_map_down(b);
  EXPECT_EQ(d.degree(), 1);
  EXPECT_EQ(d.source()->degree(0), 0);
  EXPECT_EQ(d.evaluate_basis(std::vector<size_t>{0, 0}), -Vector::basis(1));
  EXPECT_EQ(shift_map_up(d), b);

  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    auto s = hpl::testing::random_space(rng, 3, -1, 2);
    SymMultiMap f = hpl::testing::random_map(rng, s, s, 1, 2);
    f = f.restricted(2) - f.restricted(1);  // arity-2 part only
    EXPECT_EQ(shift_map_down(shift_map_up(f)), f);
  }
}
