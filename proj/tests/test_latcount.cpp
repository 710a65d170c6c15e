#include "oracles/oracles.hpp"
#include "rlt/latcount.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rlt;

namespace {

long long brute_count(const RootDatum &d, const std::vector<QVec> &pts, const IVec &ref, const CountingLattice &lat) {
  auto test = lattice_test(lat, static_cast<size_t>(d.dim));
  auto [lo, hi] = vertex_box(pts);
  long long n = 0;
  for_each_box_point(lo, hi, [&](const IVec &x) {
    if (test.contains(x) && oracle::in_hull_star(d, pts, ref, x)) ++n;
  });
  return n;
}

}  // namespace

TEST(LatCount, InterpolationRecoversPolynomials) {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 30; ++it) {
    Polynomial p{QVec(1 + rng() % 4)};
    for (auto &c : p.coef) c = Q(static_cast<long long>(rng() % 21) - 10, 1 + static_cast<long long>(rng() % 4));
    std::vector<long long> xs;
    QVec ys;
    for (long long x = -2; x < static_cast<long long>(p.coef.size()) - 2; ++x) xs.push_back(x), ys.push_back(p(Q(x)));
    Polynomial q = interpolate(xs, ys);
    for (long long x = -5; x <= 5; ++x) EXPECT_EQ(q(Q(x)), p(Q(x)));
  }
}

TEST(LatCount, PolynomialFormatting) {
  EXPECT_EQ(to_string(Polynomial{{Q(1), Q(2)}}), "2d + 1");
  EXPECT_EQ(to_string(Polynomial{{Q(0), Q(-1), Q(1, 2)}}), "1/2d^2 - d");
  EXPECT_EQ(to_string(Polynomial{{Q(0)}}), "0");
  EXPECT_EQ(binomial_coordinates(Polynomial{{Q(0), Q(1, 2), Q(1, 2)}}), (QVec{Q(0), Q(1), Q(1)}));
}

TEST(LatCount, FitSkipsPreAsymptoticValues) {
  auto v = [](long long d) -> std::optional<Q> { return d < 3 ? Q(100) : Q(2 * d + 1); };
  auto fit = fit_polynomial(v, 0, 12, 2);
  ASSERT_TRUE(fit.ok);
  EXPECT_EQ(fit.poly.coef, (QVec{Q(1), Q(2)}));
  EXPECT_GE(fit.nodes.front(), 3);
  EXPECT_GE(fit.held_out.size(), 5u);
}

TEST(LatCount, FitRejectsExponentialGrowth) {
  auto v = [](long long d) -> std::optional<Q> { return Q(1LL << d); };
  auto fit = fit_polynomial(v, 0, 12, 3);
  EXPECT_FALSE(fit.ok);
  EXPECT_TRUE(fit.first_failure);
}

TEST(LatCount, LatticeIndex) {
  EXPECT_EQ((CountingLattice{{{2, 0}, {0, 2}}, {}, {}}.index()), 4);
  EXPECT_EQ((CountingLattice{{{2, 0}, {0, 2}}, {{0, 0}, {1, 1}}, {}}.index()), 2);
  EXPECT_EQ(CountingLattice{}.index(), 1);
}

// Segment Hull{(d, 0), (0, d)} in GL2 has d + 1 points of determinant d.
TEST(LatCount, SegmentCount) {
  RootDatum d = datum_from_tag("GL2");
  for (long long n = 0; n < 8; ++n) {
    auto s = weyl_orbit_set(d, {Q(n), Q(0)});
    EXPECT_EQ(count_points(s, {}, lambda_class(d, IVec{n, 0}), d), n + 1);
  }
}

TEST(LatCount, CountsMatchBruteForce) {
  std::mt19937_64 rng(32);
  for (std::string tag : {"A2", "B2", "GL2"}) {
    RootDatum d = datum_from_tag(tag);
    for (int it = 0; it < 15; ++it) {
      auto pts = oracle::random_positive_set(d, rng);
      IVec ref = to_ivec(pts[0]);
      auto s = borel_set(d, pts);
      for (CountingLattice lat : {CountingLattice{}, CountingLattice{identity_matrix<long long>(d.dim), {}, {}}}) {
        if (!lat.generators.empty())
          for (auto &row : lat.generators)
            for (auto &x : row) x *= 2;
        if (!d.constraints.empty() && !lat.generators.empty()) continue;
        EXPECT_EQ(count_points(s, lat, lambda_class(d, ref), d), brute_count(d, pts, ref, lat)) << tag;
      }
    }
  }
}

// Dilations of a Weyl orbit give a polynomial of degree <= rank.
TEST(LatCount, DilationCountIsPolynomial) {
  RootDatum d = datum_from_tag("A2");
  IVec mu(d.dim, 0);
  for (auto &c : d.coroots) mu = add(mu, c);
  auto family = [&](long long t) {
    return std::make_pair(weyl_orbit_set(d, to_q(scale(t, mu))), lambda_class(d, scale(t, mu)));
  };
  auto fit = polynomiality_check(family, {}, d, 0, 9, d.rank);
  ASSERT_TRUE(fit.ok) << fit.message;
  EXPECT_EQ(fit.poly.degree(), d.rank);
  for (long long t = 0; t < 4; ++t) {
    auto [s, cls] = family(t);
    EXPECT_EQ(fit.poly(Q(t)), Q(brute_count(d, s.points, to_ivec(s.points[0]), {})));
  }
}
