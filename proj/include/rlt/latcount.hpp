#pragma once

#include "rlt/orthoset.hpp"
#include "rlt/rational.hpp"
#include "rlt/rootdata.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rlt {

/// A sublattice L (plus optional coset representatives) of the coweight lattice.
///
/// `torsion` lists the orders of the explicit torsion factors of the ambient
/// quotient; they enter the index but not the membership test.
struct CountingLattice {
  IMat generators;           // rows; empty = the whole ambient lattice
  std::vector<IVec> cosets;  // empty = {0}
  IVec torsion;

  /// [ambient : L], for a full-rank square basis.
  Int index() const {
    Int t = 1;
    for (auto x : torsion) t *= x;
    if (generators.empty()) return t;
    if (generators.size() != generators[0].size()) throw Error("lattice index needs a square basis");
    Q dt = det(to_q(generators));
    if (dt < 0) dt = -dt;
    Int n = boost::multiprecision::numerator(dt);
    Int c = cosets.empty() ? 1 : static_cast<long long>(cosets.size());
    return n * t / c;
  }
};

inline LatticeTest lattice_test(const CountingLattice &lat, size_t dim) {
  if (lat.generators.empty()) return LatticeTest(identity_matrix<long long>(dim), {}, dim);
  return LatticeTest(lat.generators, lat.cosets, dim);
}

inline constexpr long long kMaxBoxPoints = 50'000'000;

/// Calls f on every integer point of the box [lo, hi].
inline void for_each_box_point(const IVec &lo, const IVec &hi, const std::function<void(const IVec &)> &f) {
  long long total = 1;
  for (size_t i = 0; i < lo.size(); ++i) {
    if (hi[i] < lo[i]) return;
    total *= hi[i] - lo[i] + 1;
    if (total > kMaxBoxPoints) throw Error("enumeration box exceeds " + std::to_string(kMaxBoxPoints) + " points");
  }
  IVec x = lo;
  for (;;) {
    f(x);
    size_t i = 0;
    while (i < x.size() && x[i] == hi[i]) x[i] = lo[i], ++i;
    if (i == x.size()) return;
    ++x[i];
  }
}

/// Integer bounding box of a vertex list.
inline std::pair<IVec, IVec> vertex_box(const std::vector<QVec> &vs) {
  if (vs.empty()) throw Error("empty vertex set");
  IVec lo(vs[0].size()), hi(vs[0].size());
  for (size_t i = 0; i < lo.size(); ++i) {
    Q a = vs[0][i], b = vs[0][i];
    for (auto &v : vs) a = std::min(a, v[i]), b = std::max(b, v[i]);
    lo[i] = ceil_q(a), hi[i] = floor_q(b);
  }
  return {lo, hi};
}

/// Lattice points of L inside Hull{x_P}^*.
inline long long count_points(const OrthogonalSet &s, const CountingLattice &lat, const IVec &star_class,
                              const RootDatum &d) {
  Hull hull(d, s, star_class);
  auto test = lattice_test(lat, d.dim);
  auto [lo, hi] = vertex_box(s.points);
  long long n = 0;
  for_each_box_point(lo, hi, [&](const IVec &x) {
    if (in_lattice(d, x) && test.contains(x) && hull.contains(x)) ++n;
  });
  return n;
}

// ---- polynomials in one variable

struct Polynomial {
  QVec coef;  // coef[i] multiplies d^i

  Q operator()(const Q &x) const {
    Q r = 0;
    for (size_t i = coef.size(); i-- > 0;) r = r * x + coef[i];
    return r;
  }
  int degree() const {
    for (size_t i = coef.size(); i-- > 0;)
      if (coef[i] != 0) return static_cast<int>(i);
    return -1;
  }
};

inline std::string to_string(const Polynomial &p, const std::string &var = "d") {
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    Q c = p.coef[i];
    if (c == 0) continue;
    bool negc = c < 0;
    Q a = negc ? -c : c;
    if (!out.empty()) out += negc ? " - " : " + ";
    else if (negc) out += "-";
    if (i == 0 || a != 1) out += to_string(a);
    if (i >= 1) out += var;
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

/// Coordinates in the basis binom(d, k); integral for integer-valued polynomials.
inline QVec binomial_coordinates(const Polynomial &p) {
  int deg = std::max(p.degree(), 0);
  QVec vals;
  for (int k = 0; k <= deg; ++k) vals.push_back(p(Q(k)));
  QVec out;  // forward differences at 0
  for (int k = 0; k <= deg; ++k) {
    out.push_back(vals[0]);
    for (size_t i = 0; i + 1 < vals.size(); ++i) vals[i] = vals[i + 1] - vals[i];
    vals.pop_back();
  }
  return out;
}

/// Exact interpolation through (xs[i], ys[i]) by Newton divided differences.
inline Polynomial interpolate(const std::vector<long long> &xs, const QVec &ys) {
  size_t n = xs.size();
  QVec dd = ys;
  for (size_t j = 1; j < n; ++j)
    for (size_t i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / Q(xs[i] - xs[i - j]);
  Polynomial p{QVec(n, Q(0))};
  QVec basis{Q(1)};  // prod_{k<i} (d - xs[k])
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < basis.size(); ++k) p.coef[k] += dd[i] * basis[k];
    QVec next(basis.size() + 1, Q(0));
    for (size_t k = 0; k < basis.size(); ++k) {
      next[k + 1] += basis[k];
      next[k] -= basis[k] * xs[i];
    }
    basis = next;
  }
  while (p.coef.size() > 1 && p.coef.back() == 0) p.coef.pop_back();
  return p;
}

struct PolyFit {
  bool ok = false;
  Polynomial poly;
  std::vector<long long> nodes, held_out;
  std::optional<long long> first_failure;  // first held-out d that disagrees, for the earliest node window tried
  std::string message;
};

/// Fits values v(d) on [lo, hi] by a polynomial of degree <= max_degree.
///
/// Node windows slide upward past pre-asymptotic values; a window is accepted when
/// every later d in the range (at least `min_held_out` of them) is reproduced exactly.
inline PolyFit fit_polynomial(const std::function<std::optional<Q>(long long)> &value, long long lo, long long hi,
                              int max_degree, int min_held_out = 5) {
  PolyFit fit;
  std::vector<std::optional<Q>> vals;
  for (long long d = lo; d <= hi; ++d) vals.push_back(value(d));
  size_t need = static_cast<size_t>(max_degree + 1);
  for (size_t start = 0; start + need + min_held_out <= vals.size(); ++start) {
    bool defined = true;
    for (size_t i = start; i < vals.size(); ++i) defined = defined && vals[i].has_value();
    if (!defined) continue;
    std::vector<long long> xs;
    QVec ys;
    for (size_t i = start; i < start + need; ++i) xs.push_back(lo + static_cast<long long>(i)), ys.push_back(*vals[i]);
    Polynomial p = interpolate(xs, ys);
    std::optional<long long> bad;
    for (size_t i = start + need; i < vals.size() && !bad; ++i)
      if (p(Q(lo + static_cast<long long>(i))) != *vals[i]) bad = lo + static_cast<long long>(i);
    if (!fit.first_failure && bad) fit.first_failure = bad;
    if (bad) continue;
    fit.ok = true;
    fit.poly = p;
    fit.nodes = xs;
    for (size_t i = start + need; i < vals.size(); ++i) fit.held_out.push_back(lo + static_cast<long long>(i));
    return fit;
  }
  fit.message = "not yet polynomial: increase the window";
  if (fit.first_failure) fit.message += " (first failing d = " + std::to_string(*fit.first_failure) + ")";
  return fit;
}

/// Counts of a family d -> (set, star class) over L, fitted by a polynomial of degree <= max_degree.
inline PolyFit polynomiality_check(const std::function<std::pair<OrthogonalSet, IVec>(long long)> &family,
                                   const CountingLattice &lat, const RootDatum &d, long long lo, long long hi,
                                   int max_degree) {
  auto fit = fit_polynomial(
      [&](long long t) -> std::optional<Q> {
        auto [s, star] = family(t);
        return Q(count_points(s, lat, star, d));
      },
      lo, hi, max_degree);
  if (fit.ok && fit.poly.degree() > max_degree) {
    fit.ok = false;
    fit.message = "fitted degree exceeds the bound";
  }
  return fit;
}

}  // namespace rlt
