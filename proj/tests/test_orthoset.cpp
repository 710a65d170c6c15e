#include "oracles/oracles.hpp"
#include "rlt/latcount.hpp"
#include "rlt/orthoset.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rlt;

namespace {

InvolutionSpec gl3_reversal() { return InvolutionSpec{{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}}; }

std::vector<QVec> reversal_probes(long long r) {
  std::vector<QVec> out;
  for (long long a = -r; a <= r; ++a) out.push_back({Q(a), Q(0), Q(-a)});
  return out;
}

}  // namespace

TEST(OrthoSet, WeylOrbitSetsArePositiveAndSpecial) {
  for (std::string tag : {"A2", "B2", "GL3"}) {
    RootDatum d = datum_from_tag(tag);
    // sum of the positive coroots
    IVec mu(d.dim, 0);
    for (auto &c : d.coroots) mu = add(mu, c);
    ASSERT_TRUE(dominant(d, mu));
    auto cert = validate_orthogonal(weyl_orbit_set(d, to_q(mu)), d);
    EXPECT_TRUE(cert.positive) << tag;
    EXPECT_TRUE(cert.special) << tag;
  }
}

TEST(OrthoSet, ConstantSetIsPositiveButNotSpecial) {
  RootDatum d = datum_from_tag("A2");
  QVec c = to_q(d.coroots[0]);
  auto cert = validate_orthogonal(borel_set(d, std::vector<QVec>(d.order(), c)), d);
  EXPECT_TRUE(cert.positive);
  EXPECT_FALSE(cert.special);
  for (auto &k : cert.coefficients) EXPECT_EQ(k.r, 0);
}

TEST(OrthoSet, RejectsNonOrthogonalFamilies) {
  RootDatum d = datum_from_tag("A1xA1");
  std::vector<QVec> pts(d.order(), QVec(d.dim, Q(0)));
  pts[1] = QVec(d.dim, Q(1));  // differs from e along both coroots
  EXPECT_THROW(validate_orthogonal(borel_set(d, pts), d), NotOrthogonal);
  EXPECT_THROW(borel_set(d, {QVec(d.dim, Q(0))}), Error);
}

TEST(OrthoSet, NegatedOrbitIsNotPositive) {
  RootDatum d = datum_from_tag("A2");
  auto s = weyl_orbit_set(d, scale(Q(-1), d.rho));
  EXPECT_FALSE(validate_orthogonal(s, d).positive);
  Hull h(d, s, lambda_class(d, IVec(d.dim, 0)));
  EXPECT_TRUE(h.fallback());
}

// The chamber test agrees with brute-force convex hull membership.
TEST(OrthoSet, HullMatchesOracle) {
  std::mt19937_64 rng(11);
  for (std::string tag : {"A1", "A2", "B2", "GL2"}) {
    RootDatum d = datum_from_tag(tag);
    for (int n = 0; n < 40; ++n) {
      auto pts = oracle::random_positive_set(d, rng);
      OrthogonalSet s = borel_set(d, pts);
      IVec ref = to_ivec(pts[0]);
      Hull h(d, s, lambda_class(d, ref));
      EXPECT_FALSE(h.fallback());
      auto [lo, hi] = vertex_box(pts);
      for (auto &x : lo) --x;
      for (auto &x : hi) ++x;
      for_each_box_point(lo, hi, [&](const IVec &x) {
        if (!in_lattice(d, x)) return;
        ASSERT_EQ(h.contains(x), oracle::in_hull_star(d, pts, ref, x)) << tag;
      });
    }
  }
}

// LP fallback on non-positive sets also agrees with the oracle.
TEST(OrthoSet, FallbackMatchesOracle) {
  RootDatum d = datum_from_tag("A2");
  std::vector<QVec> pts;
  for (size_t w = 0; w < d.order(); ++w) pts.push_back(scale(Q(-2), act(d, static_cast<int>(w), d.rho)));
  OrthogonalSet s = borel_set(d, pts);
  IVec ref = to_ivec(pts[0]);
  Hull h(d, s, lambda_class(d, ref));
  ASSERT_TRUE(h.fallback());
  auto [lo, hi] = vertex_box(pts);
  for_each_box_point(lo, hi, [&](const IVec &x) {
    if (in_lattice(d, x)) ASSERT_EQ(h.contains(x), oracle::in_hull_star(d, pts, ref, x));
  });
}

TEST(OrthoSet, HullRespectsStarClass) {
  RootDatum d = datum_from_tag("GL2");
  auto s = weyl_orbit_set(d, {Q(2), Q(0)});
  IVec cls = lambda_class(d, IVec{2, 0});
  EXPECT_TRUE(hull_member(s, {{Q(1), Q(1)}, cls}, d));
  EXPECT_FALSE(hull_member(s, {{Q(1), Q(0)}, cls}, d));  // wrong determinant
  EXPECT_FALSE(hull_member(s, {{Q(3), Q(-1)}, cls}, d));
}

TEST(OrthoSet, MinusFanOfReversal) {
  RootDatum d = datum_from_tag("GL3");
  Fan fan = minus_fan(d, gl3_reversal());
  EXPECT_EQ(fan.level, Level::AMinus);
  ASSERT_EQ(fan.chambers.size(), 2u);
  ASSERT_EQ(fan.walls.size(), 1u);
}

// Minus sets of special positive sets are positive at the restricted level and
// their hulls cut out the same points of a^-.
TEST(OrthoSet, MinusSetOfSpecialSetsRefinesTheHull) {
  RootDatum d = datum_from_tag("GL3");
  auto t = gl3_reversal();
  Fan fan = minus_fan(d, t);
  std::mt19937_64 rng(12);
  for (int n = 0; n < 60; ++n) {
    IVec mu(3);
    for (auto &x : mu) x = static_cast<long long>(rng() % 9) - 4;
    std::sort(mu.rbegin(), mu.rend());
    auto s = weyl_orbit_set(d, to_q(mu));
    ASSERT_TRUE(validate_orthogonal(s, d).special);
    auto m = minus_set(s, d, t);
    EXPECT_TRUE(validate_orthogonal(m, d, fan).positive);
    auto rep = restricted_hull_equal(s, t, d, reversal_probes(12), lambda_class(d, mu));
    EXPECT_TRUE(rep.equal) << "mu = " << mu[0] << "," << mu[1] << "," << mu[2];
  }
}

// Minimising in the ray basis gives the wrong restricted hull for mu = (1,1,-2).
TEST(OrthoSet, RayBasisMinusDisagreesWithTheHull) {
  RootDatum d = datum_from_tag("GL3");
  auto t = gl3_reversal();
  IVec mu{1, 1, -2};
  auto s = weyl_orbit_set(d, to_q(mu));
  IVec cls = lambda_class(d, mu);
  auto probes = reversal_probes(6);
  EXPECT_TRUE(restricted_hull_equal(s, t, d, probes, cls, MinusBasis::Coroot).equal);
  auto ray = restricted_hull_equal(s, t, d, probes, cls, MinusBasis::Ray);
  ASSERT_FALSE(ray.equal);
  ASSERT_TRUE(ray.counterexample);
  std::vector<QVec> pts = s.points;
  // the left side is the truth, checked independently
  EXPECT_EQ(ray.left, oracle::in_hull_star(d, pts, mu, to_ivec(*ray.counterexample)));
}

// A constant set off a^- has an empty restricted hull, yet its minus set over
// the two theta-split chambers reaches the origin: specialness is needed.
TEST(OrthoSet, ConstantSetNeedsSpecialness) {
  RootDatum d = datum_from_tag("GL3");
  auto t = gl3_reversal();
  QVec c{Q(2), Q(-2), Q(0)};
  auto s = borel_set(d, std::vector<QVec>(d.order(), c));
  auto m = minus_set(s, d, t);
  IVec cls = lambda_class(d, to_ivec(c));
  Hull minus_hull(d, m, cls);
  EXPECT_TRUE(minus_hull.contains(QVec{Q(0), Q(0), Q(0)}));
  std::vector<QVec> pts = s.points;
  for (auto &p : reversal_probes(6)) EXPECT_FALSE(oracle::in_hull_star(d, pts, to_ivec(c), to_ivec(p)));
}

TEST(OrthoSet, MinusPointRejectsNonSplitFacets) {
  RootDatum d = datum_from_tag("GL3");
  auto t = gl3_reversal();
  EXPECT_THROW(minus_point(d, t, FacetIndex{1, {}}, {Q(1), Q(0), Q(-1)}), Error);
}
