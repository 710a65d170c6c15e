#include "oracles/oracles.hpp"
#include "rlt/rootdata.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rlt;

namespace {

InvolutionSpec gl3_reversal() { return InvolutionSpec{{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}}; }

}  // namespace

TEST(RootData, WeylGroupOrders) {
  EXPECT_EQ(datum_from_tag("A1").order(), 2u);
  EXPECT_EQ(datum_from_tag("A1xA1").order(), 4u);
  EXPECT_EQ(datum_from_tag("A2").order(), 6u);
  EXPECT_EQ(datum_from_tag("B2").order(), 8u);
  EXPECT_EQ(datum_from_tag("GL3").order(), 6u);
  EXPECT_EQ(datum_from_tag("SL2").order(), 2u);
  EXPECT_THROW(datum_from_tag("E9"), Error);
}

TEST(RootData, PositiveRootCounts) {
  EXPECT_EQ(datum_from_tag("A2").roots.size(), 3u);
  EXPECT_EQ(datum_from_tag("B2").roots.size(), 4u);
  EXPECT_EQ(datum_from_tag("GL3").roots.size(), 3u);
}

TEST(RootData, WordKeysRoundTrip) {
  for (std::string tag : {"A2", "B2", "GL3"}) {
    RootDatum d = datum_from_tag(tag);
    for (size_t w = 0; w < d.order(); ++w) EXPECT_EQ(chamber_from_key(d, word_key(d, static_cast<int>(w))), static_cast<int>(w));
  }
  RootDatum d = datum_from_tag("GL3");
  EXPECT_EQ(word_key(d, 0), "e");
  EXPECT_EQ(word_key(d, d.longest).size(), 3u);
}

// the form is W-invariant and positive definite on the coroot span
TEST(RootData, FormIsWeylInvariant) {
  std::mt19937_64 rng(3);
  for (std::string tag : {"A2", "B2", "GL3", "A1xA1"}) {
    RootDatum d = datum_from_tag(tag);
    for (size_t w = 0; w < d.order(); ++w) {
      QMat m = to_q(d.weyl[w]);
      EXPECT_EQ(matmul(transpose(m), matmul(d.form, m)), d.form) << tag;
    }
    for (auto &c : d.coroots) EXPECT_GT(norm_sq(d, to_q(c)), 0);
  }
}

TEST(RootData, ReflectionsFixHyperplanes) {
  RootDatum d = datum_from_tag("B2");
  for (size_t k = 0; k < d.roots.size(); ++k) {
    IMat s = detail::reflection(d.roots[k], d.coroots[k]);
    EXPECT_EQ(matvec(s, d.coroots[k]), neg(d.coroots[k]));
    EXPECT_EQ(matmul(s, s), identity_matrix<long long>(static_cast<size_t>(d.dim)));
  }
}

TEST(RootData, DominantRepresentativeLiesInOrbit) {
  std::mt19937_64 rng(4);
  for (std::string tag : {"A2", "B2", "GL3"}) {
    RootDatum d = datum_from_tag(tag);
    for (int it = 0; it < 100; ++it) {
      IVec x(d.dim);
      for (auto &c : x) c = static_cast<long long>(rng() % 11) - 5;
      if (!in_lattice(d, x)) continue;
      auto [dom, w] = dominant_representative(d, x);
      EXPECT_TRUE(dominant(d, dom));
      EXPECT_EQ(act(d, w, x), dom);
      EXPECT_TRUE(weyl_orbit(d, dom).count(x));
    }
  }
}

TEST(RootData, LambdaClassDetectsCorootCosets) {
  std::mt19937_64 rng(5);
  for (std::string tag : {"GL2", "GL3", "SL2", "B2"}) {
    RootDatum d = datum_from_tag(tag);
    for (int it = 0; it < 100; ++it) {
      IVec x(d.dim), y(d.dim);
      for (auto &c : x) c = static_cast<long long>(rng() % 7) - 3;
      for (auto &c : y) c = static_cast<long long>(rng() % 7) - 3;
      if (!in_lattice(d, x) || !in_lattice(d, y)) continue;
      EXPECT_EQ(lambda_class(d, x) == lambda_class(d, y), oracle::same_coroot_class(d, x, y)) << tag;
    }
  }
}

TEST(RootData, FacetCountsAndProjection) {
  RootDatum d = datum_from_tag("A2");
  // 6 chambers, 6 walls, 1 vertex at the origin
  auto facets = all_facets(d);
  EXPECT_EQ(facets.size(), 13u);
  for (auto &f : facets) {
    QVec x = facet_interior_point(d, f);
    EXPECT_EQ(project_to_facet(d, x, f), x);
  }
}

TEST(RootData, ThetaSplitChambersForReversal) {
  RootDatum d = datum_from_tag("GL3");
  auto t = gl3_reversal();
  validate_involution(d, t);
  std::set<int> split;
  for (auto &f : theta_split_facets(d, t))
    if (f.zeroed.empty()) split.insert(f.chamber);
  // theta acts as w0, so wC is theta-split iff w commutes with w0
  EXPECT_EQ(split, (std::set<int>{0, d.longest}));
  EXPECT_EQ(minus_space(d, t).size(), 1u);
}

TEST(RootData, InvolutionValidationRejectsBadInput) {
  RootDatum d = datum_from_tag("GL2");
  EXPECT_THROW(validate_involution(d, InvolutionSpec{{{2, 0}, {0, 1}}}), Error);
  EXPECT_THROW(validate_involution(d, InvolutionSpec{{{1, 0}}}), Error);
  EXPECT_NO_THROW(validate_involution(d, InvolutionSpec{{{0, -1}, {-1, 0}}}));
}
