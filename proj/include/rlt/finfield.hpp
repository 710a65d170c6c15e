#pragma once

#include "rlt/rational.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace rlt {

// 2x2 matrices over Z/p^k, row-major {a, b, c, d}.
using M2 = std::array<long long, 4>;

struct Ring {
  long long p = 3;
  int k = 1;
  long long q = 3;  // p^k

  Ring(long long p_, int k_) : p(p_), k(k_), q(1) {
    if (p_ < 3) throw Error("finite-level checks need an odd prime");
    for (long long d = 2; d * d <= p_; ++d)
      if (p_ % d == 0) throw Error(std::to_string(p_) + " is not prime");
    if (k_ < 1) throw Error("level must be >= 1");
    for (int i = 0; i < k_; ++i) q *= p_;
  }
  long long red(long long x) const { return mod_ll(x, q); }
  M2 red(const M2 &m) const { return {red(m[0]), red(m[1]), red(m[2]), red(m[3])}; }
  M2 mul(const M2 &x, const M2 &y) const {
    return red(M2{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
                  x[2] * y[1] + x[3] * y[3]});
  }
  long long det(const M2 &m) const { return red(m[0] * m[3] - m[1] * m[2]); }
  long long trace_form(const M2 &x, const M2 &y) const {
    return red(x[0] * y[0] + x[1] * y[2] + x[2] * y[1] + x[3] * y[3]);
  }
  bool unit(long long x) const { return red(x) % p != 0; }
  long long inv(long long x) const {
    long long r = 1, b = red(x), e = q / p * (p - 1) - 1;  // x^(phi(q)-1)
    if (!unit(x)) throw Error("not a unit mod " + std::to_string(q));
    while (e) {
      if (e & 1) r = r * b % q;
      b = b * b % q, e >>= 1;
    }
    return r;
  }
  M2 inverse(const M2 &g) const {
    long long di = inv(det(g));
    return red(M2{g[3] * di, -g[1] * di, -g[2] * di, g[0] * di});
  }
  /// g^{-1} X g
  M2 conj(const M2 &g, const M2 &x) const { return mul(mul(inverse(g), x), g); }
};

enum class LieType { sl2, gl2 };
enum class LieInvolution { InnerDiag, Transpose };  // Int(diag(-1,1)) or X -> -X^T

inline std::string to_string(LieType t) { return t == LieType::sl2 ? "sl2" : "gl2"; }
inline std::string to_string(LieInvolution t) { return t == LieInvolution::InnerDiag ? "inner_diag" : "transpose"; }

struct FiniteLieAlgebra {
  Ring ring;
  LieType type = LieType::sl2;
  LieInvolution theta = LieInvolution::InnerDiag;

  M2 apply_theta(const M2 &x) const {
    if (theta == LieInvolution::InnerDiag) return ring.red(M2{x[0], -x[1], -x[2], x[3]});
    return ring.red(M2{-x[0], -x[2], -x[1], -x[3]});
  }
  /// All elements, in a fixed order.
  std::vector<M2> elements() const {
    std::vector<M2> out;
    long long q = ring.q;
    for (long long a = 0; a < q; ++a)
      for (long long b = 0; b < q; ++b)
        for (long long c = 0; c < q; ++c) {
          if (type == LieType::sl2) {
            out.push_back(ring.red(M2{a, b, c, -a}));
          } else {
            for (long long d = 0; d < q; ++d) out.push_back(M2{a, b, c, d});
          }
        }
    return out;
  }
  std::vector<M2> eigenspace(int sign) const {
    std::vector<M2> out;
    for (auto &x : elements()) {
      M2 t = apply_theta(x);
      if (sign > 0 ? t == x : t == ring.red(M2{-x[0], -x[1], -x[2], -x[3]})) out.push_back(x);
    }
    return out;
  }
  std::vector<M2> h() const { return eigenspace(1); }
  std::vector<M2> h_perp() const { return eigenspace(-1); }
};

// ---- theta-split Weyl integration fibration

struct CartanClass {
  long long c = 0;                 // representative a_c = {(0, ct; t, 0)}
  std::vector<long long> members;  // all c' whose a_c' is H-conjugate
  long long normalizer = 0, centralizer = 0, weyl = 0;
  long long u_size = 0;  // |U(a_c)|
  bool fibers_ok = false;
  bool abelian = false, in_h_perp = false;
};

struct FibrationReport {
  long long p = 0;
  long long h_order = 0, h_perp_size = 0, regular = 0, singular = 0, orbits = 0;
  std::vector<CartanClass> classes;
  bool orbits_refine = false;  // every H-orbit of regular elements lies in one U(a)
  bool disjoint = false, covers = false;
  long long union_size = 0;
  bool ok() const {
    bool f = true;
    for (auto &c : classes) f = f && c.fibers_ok && c.abelian && c.in_h_perp;
    return f && orbits_refine && disjoint && covers && union_size == regular;
  }
};

/// Exhaustive check of the fibration H/Z_H(a) x a^reg -> U(a) for sl2 and theta = Int(diag(-1,1)).
inline FibrationReport fibration_check(long long p) {
  FiniteLieAlgebra alg{Ring(p, 1), LieType::sl2, LieInvolution::InnerDiag};
  const Ring &R = alg.ring;
  FibrationReport rep;
  rep.p = p;

  // H = fixed points of theta in SL2(F_p), found by brute force over the group.
  const M2 J{p - 1, 0, 0, 1};
  std::vector<M2> H;
  for (long long a = 0; a < p; ++a)
    for (long long b = 0; b < p; ++b)
      for (long long c = 0; c < p; ++c)
        for (long long d = 0; d < p; ++d) {
          M2 g{a, b, c, d};
          if (R.det(g) == 1 && R.mul(J, g) == R.mul(g, J)) H.push_back(g);
        }
  rep.h_order = static_cast<long long>(H.size());

  auto hp = alg.h_perp();
  rep.h_perp_size = static_cast<long long>(hp.size());
  // X regular semisimple iff its discriminant tr^2 - 4 det is nonzero
  auto regular = [&](const M2 &x) { return R.red((x[0] + x[3]) * (x[0] + x[3]) - 4 * R.det(x)) != 0; };
  std::set<M2> reg;
  for (auto &x : hp) {
    if (regular(x)) reg.insert(x);
    else ++rep.singular;
  }
  rep.regular = static_cast<long long>(reg.size());

  // H-orbits on regular elements
  std::map<M2, int> orbit_of;
  for (auto &x : reg) {
    if (orbit_of.count(x)) continue;
    int id = static_cast<int>(rep.orbits++);
    for (auto &h : H) orbit_of[R.conj(h, x)] = id;
  }

  // Cartan subspaces a_c, c in F^x
  auto line = [&](long long c) {
    std::vector<M2> out;
    for (long long t = 0; t < p; ++t) out.push_back(R.red(M2{0, c * t, t, 0}));
    return out;
  };
  auto same_line = [&](const std::vector<M2> &a, const std::vector<M2> &b) {
    return std::set<M2>(a.begin(), a.end()) == std::set<M2>(b.begin(), b.end());
  };
  std::vector<bool> seen(p, false);
  std::map<M2, long long> covered;  // element -> class index
  bool disjoint = true;
  for (long long c = 1; c < p; ++c) {
    if (seen[c]) continue;
    CartanClass cls;
    cls.c = c;
    auto a = line(c);
    for (long long c2 = 1; c2 < p; ++c2) {
      auto b = line(c2);
      for (auto &h : H) {
        std::vector<M2> moved;
        for (auto &x : a) moved.push_back(R.conj(h, x));
        if (same_line(moved, b)) {
          cls.members.push_back(c2), seen[c2] = true;
          break;
        }
      }
    }
    cls.abelian = cls.in_h_perp = true;
    for (auto &x : a) {
      cls.in_h_perp = cls.in_h_perp && alg.apply_theta(x) == R.red(M2{-x[0], -x[1], -x[2], -x[3]});
      for (auto &y : a) cls.abelian = cls.abelian && R.mul(x, y) == R.mul(y, x);
    }
    for (auto &h : H) {
      std::vector<M2> moved;
      bool fixes = true;
      for (auto &x : a) moved.push_back(R.conj(h, x)), fixes = fixes && moved.back() == x;
      cls.centralizer += fixes;
      cls.normalizer += same_line(moved, a);
    }
    cls.weyl = cls.normalizer / cls.centralizer;
    // image multiplicities of (h, X) -> h^{-1} X h over H x a^reg
    std::map<M2, long long> mult;
    for (auto &h : H)
      for (auto &x : a)
        if (regular(x)) ++mult[R.conj(h, x)];
    cls.u_size = static_cast<long long>(mult.size());
    cls.fibers_ok = cls.normalizer % cls.centralizer == 0;
    for (auto &[x, m] : mult) {
      cls.fibers_ok = cls.fibers_ok && m == cls.weyl * cls.centralizer && reg.count(x);
      if (covered.count(x)) disjoint = false;
      covered[x] = static_cast<long long>(rep.classes.size());
    }
    rep.classes.push_back(cls);
  }
  rep.disjoint = disjoint;
  rep.union_size = static_cast<long long>(covered.size());
  rep.covers = rep.union_size == rep.regular;
  rep.orbits_refine = true;
  std::map<int, long long> orbit_class;
  for (auto &[x, o] : orbit_of) {
    if (!covered.count(x)) continue;
    auto it = orbit_class.find(o);
    if (it == orbit_class.end()) orbit_class[o] = covered[x];
    else if (it->second != covered[x]) rep.orbits_refine = false;
  }
  return rep;
}

// ---- Z[zeta_q] arithmetic

/// Element of Z[zeta_q] as a coefficient vector over zeta^0 .. zeta^{q-1}.
struct Cyclotomic {
  long long q = 1, p = 1;
  std::vector<long long> c;

  Cyclotomic(long long q_, long long p_) : q(q_), p(p_), c(q_, 0) {}
  void add(long long exponent, long long v) { c[mod_ll(exponent, q)] += v; }

  /// Remainder modulo the cyclotomic polynomial Phi_q(x) = sum_j x^{j q/p}.
  std::vector<long long> reduced() const {
    std::vector<long long> r = c;
    long long step = q / p, deg = q - step;  // deg Phi_q = phi(q)
    for (long long e = q - 1; e >= deg; --e) {
      long long v = r[e];
      if (!v) continue;
      // x^e = x^{e-deg} x^deg and x^deg = -sum_{j<p-1} x^{j step}
      for (long long j = 0; j + 1 < p; ++j) r[e - deg + j * step] -= v;
      r[e] = 0;
    }
    r.resize(deg);
    return r;
  }
  bool is_zero() const {
    for (auto x : reduced())
      if (x) return false;
    return true;
  }
  std::complex<double> value() const {
    std::complex<double> s = 0;
    for (long long e = 0; e < q; ++e)
      if (c[e]) s += static_cast<double>(c[e]) * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(q));
    return s;
  }
};

inline Cyclotomic operator-(Cyclotomic a, const Cyclotomic &b) {
  for (long long e = 0; e < a.q; ++e) a.c[e] -= b.c[e];
  return a;
}

// ---- modified Plancherel identity

/// Integer-valued function table on the algebra; values absent from the map are zero.
using FunctionTable = std::map<M2, long long>;

/// f^(Y) = sum_X f(X) psi(<X, Y>) with psi(x) = zeta_q^x, exactly.
inline Cyclotomic fourier(const FiniteLieAlgebra &alg, const FunctionTable &f, const M2 &y) {
  Cyclotomic s(alg.ring.q, alg.ring.p);
  for (auto &[x, v] : f)
    if (v) s.add(alg.ring.trace_form(x, y), v);
  return s;
}

inline FunctionTable random_function(const FiniteLieAlgebra &alg, std::mt19937_64 &rng, long long bound = 9) {
  std::uniform_int_distribution<long long> u(-bound, bound);
  FunctionTable f;
  for (auto &x : alg.elements()) f[x] = u(rng);
  return f;
}

inline M2 random_unit_matrix(const Ring &R, std::mt19937_64 &rng) {
  std::uniform_int_distribution<long long> u(0, R.q - 1);
  for (;;) {
    M2 g{u(rng), u(rng), u(rng), u(rng)};
    if (R.unit(R.det(g))) return g;
  }
}

struct PlancherelReport {
  bool exact = false;         // equality in Z[zeta_q]
  double max_deviation = 0;   // |lhs - rhs| in floating point
  bool equivariant = false;   // (f o Ad g)^ = f^ o Ad g on the probed Y
  long long h_size = 0, h_perp_size = 0;
  std::vector<long long> lhs;  // reduced lhs coordinates
  long long rhs = 0;
  bool ok(double tol = 1e-9) const { return exact && equivariant && max_deviation <= tol; }
};

/// Checks sum_{Y in h} f^(g^{-1} Y g) = |h| sum_{X in h_perp} f(g^{-1} X g).
///
/// `probes` bounds the number of Y used for the equivariance sub-check (0 = all of g).
inline PlancherelReport plancherel_check(const FiniteLieAlgebra &alg, const FunctionTable &f, const M2 &g,
                                         size_t probes = 0, uint64_t probe_seed = 0) {
  const Ring &R = alg.ring;
  if (!R.unit(R.det(g))) throw Error("conjugating matrix must have unit determinant");
  PlancherelReport rep;
  auto h = alg.h(), hp = alg.h_perp();
  rep.h_size = static_cast<long long>(h.size());
  rep.h_perp_size = static_cast<long long>(hp.size());
  auto fval = [&](const M2 &x) {
    auto it = f.find(x);
    return it == f.end() ? 0LL : it->second;
  };

  Cyclotomic lhs(R.q, R.p);
  for (auto &y : h) {
    auto t = fourier(alg, f, R.conj(g, y));
    for (long long e = 0; e < R.q; ++e) lhs.c[e] += t.c[e];
  }
  long long rhs = 0;
  for (auto &x : hp) rhs += fval(R.conj(g, x));
  rhs *= rep.h_size;
  Cyclotomic r(R.q, R.p);
  r.add(0, rhs);
  rep.exact = (lhs - r).is_zero();
  rep.max_deviation = std::abs(lhs.value() - std::complex<double>(static_cast<double>(rhs), 0));
  rep.lhs = lhs.reduced();
  rep.rhs = rhs;

  // (f o Ad g)(X) = f(g^{-1} X g)
  FunctionTable fg;
  for (auto &x : alg.elements()) fg[x] = fval(R.conj(g, x));
  auto ys = alg.elements();
  if (probes && probes < ys.size()) {
    std::mt19937_64 rng(probe_seed);
    std::shuffle(ys.begin(), ys.end(), rng);
    ys.resize(probes);
  }
  rep.equivariant = true;
  for (auto &y : ys)
    if (!(fourier(alg, fg, y) - fourier(alg, f, R.conj(g, y))).is_zero()) {
      rep.equivariant = false;
      break;
    }
  return rep;
}

/// Floating-point variant for complex-valued tables; returns |lhs - rhs|.
inline double plancherel_deviation(const FiniteLieAlgebra &alg, const std::map<M2, std::complex<double>> &f,
                                   const M2 &g) {
  const Ring &R = alg.ring;
  if (!R.unit(R.det(g))) throw Error("conjugating matrix must have unit determinant");
  auto h = alg.h(), hp = alg.h_perp();
  std::complex<double> lhs = 0, rhs = 0;
  for (auto &y : h) {
    M2 gy = R.conj(g, y);
    for (auto &[x, v] : f)
      lhs += v * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(R.trace_form(x, gy)) / static_cast<double>(R.q));
  }
  for (auto &x : hp) {
    auto it = f.find(R.conj(g, x));
    if (it != f.end()) rhs += it->second;
  }
  rhs *= static_cast<double>(h.size());
  return std::abs(lhs - rhs);
}

}  // namespace rlt
