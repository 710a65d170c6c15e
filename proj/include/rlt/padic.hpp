#pragma once

#include "rlt/rational.hpp"
#include "rlt/rootdata.hpp"

#include <climits>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rlt {

/// Raised when a computation cannot certify its result at the working precision.
struct PrecisionError : Error {
  explicit PrecisionError(const std::string &what) : Error("precision exhausted: " + what) {}
};

inline long long ipow(long long p, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

/// Element of Q_p as p^val * unit with `prec` p-adic digits of relative precision.
///
/// prec == 0 encodes an inexact zero O(p^val); val == kInf is the exact zero.
struct Padic {
  static constexpr long long kInf = LLONG_MAX;
  long long p = 3;
  long long val = kInf;
  long long unit = 0;
  int prec = 0;

  bool exact_zero() const { return val == kInf; }
  bool is_zero() const { return val == kInf || prec == 0; }
  long long abs_prec() const { return val == kInf ? kInf : val + prec; }
};

namespace detail {
inline long long mulmod(long long a, long long b, long long m) {
  return static_cast<long long>(static_cast<__int128>(a) * b % m);
}
inline long long invmod(long long a, long long m) {
  long long g = m, x = 0, x1 = 1, r = mod_ll(a, m);
  while (r) {
    long long q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw Error("invmod: not a unit");
  return mod_ll(x, m);
}
}  // namespace detail

inline Padic padic_zero(long long p) { return Padic{p, Padic::kInf, 0, 0}; }

/// p^v * u for an integer unit u.
inline Padic padic_make(long long p, int k, long long v, long long u) {
  if (u % p == 0) throw Error("padic_make: unit divisible by p");
  return Padic{p, v, mod_ll(u, ipow(p, k)), k};
}

inline Padic padic_from_q(long long p, int k, const Q &x) {
  if (x == 0) return padic_zero(p);
  Int n = boost::multiprecision::numerator(x), d = boost::multiprecision::denominator(x);
  long long v = 0;
  while (n % p == 0) n /= p, ++v;
  while (d % p == 0) d /= p, --v;
  long long pk = ipow(p, k);
  long long nu = static_cast<long long>(((n % pk) + pk) % pk), du = static_cast<long long>(((d % pk) + pk) % pk);
  return Padic{p, v, detail::mulmod(nu, detail::invmod(du, pk), pk), k};
}
inline Padic padic_from_int(long long p, int k, long long n) { return padic_from_q(p, k, Q(n)); }

inline Padic operator-(const Padic &a) {
  if (a.is_zero()) return a;
  long long pk = ipow(a.p, a.prec);
  return Padic{a.p, a.val, mod_ll(-a.unit, pk), a.prec};
}

inline Padic operator+(const Padic &x, const Padic &y) {
  if (x.exact_zero()) return y;
  if (y.exact_zero()) return x;
  const Padic &a = x.val <= y.val ? x : y;
  const Padic &b = x.val <= y.val ? y : x;
  long long n = std::min(a.abs_prec(), b.abs_prec());
  long long m = n - a.val;  // digits available relative to a.val
  if (m <= 0) return Padic{a.p, n, 0, 0};
  long long pm = ipow(a.p, static_cast<int>(m));
  long long s = a.unit % pm;
  long long shift = b.val - a.val;
  if (shift < m && b.prec > 0) s = mod_ll(s + detail::mulmod(ipow(a.p, static_cast<int>(shift)), b.unit % pm, pm), pm);
  if (s == 0) return Padic{a.p, n, 0, 0};
  int j = 0;
  while (s % a.p == 0) s /= a.p, ++j;
  int prec = static_cast<int>(m - j);
  return Padic{a.p, a.val + j, s % ipow(a.p, prec), prec};
}
inline Padic operator-(const Padic &a, const Padic &b) { return a + (-b); }

inline Padic operator*(const Padic &a, const Padic &b) {
  if (a.exact_zero() || b.exact_zero()) return padic_zero(a.p);
  int prec = std::min(a.prec, b.prec);
  if (prec == 0) return Padic{a.p, a.val + b.val, 0, 0};
  long long pk = ipow(a.p, prec);
  return Padic{a.p, a.val + b.val, detail::mulmod(a.unit % pk, b.unit % pk, pk), prec};
}

inline Padic inverse(const Padic &a) {
  if (a.is_zero()) throw PrecisionError("inverse of an element indistinguishable from zero");
  long long pk = ipow(a.p, a.prec);
  return Padic{a.p, -a.val, detail::invmod(a.unit, pk), a.prec};
}
inline Padic operator/(const Padic &a, const Padic &b) { return a * inverse(b); }

/// True when the difference vanishes to the available precision.
inline bool approx_equal(const Padic &a, const Padic &b) { return (a - b).is_zero(); }

inline std::string to_string(const Padic &a) {
  if (a.exact_zero()) return "0";
  if (a.prec == 0) return "O(" + std::to_string(a.p) + "^" + std::to_string(a.val) + ")";
  // symmetric unit representative
  long long pk = ipow(a.p, a.prec);
  long long u = a.unit > pk / 2 ? a.unit - pk : a.unit;
  if (a.val == 0) return std::to_string(u);
  return std::to_string(a.p) + "^" + std::to_string(a.val) + " * " + std::to_string(u);
}

/// Accepts "p^v * u", "p^v", rational literals "a/b" and integers.
inline Padic parse_padic(long long p, int k, std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  auto caret = s.find('^');
  if (caret == std::string::npos) return padic_from_q(p, k, parse_q(s));
  try {
    long long base = std::stoll(s.substr(0, caret));
    if (base != p) throw Error("entry '" + s + "' uses base " + std::to_string(base) + ", prime is " + std::to_string(p));
    auto star = s.find('*', caret);
    long long v = std::stoll(s.substr(caret + 1, star == std::string::npos ? std::string::npos : star - caret - 1));
    Q u = star == std::string::npos ? Q(1) : parse_q(s.substr(star + 1));
    Padic up = padic_from_q(p, k, u);
    if (up.exact_zero()) return up;
    up.val += v;
    return up;
  } catch (const std::logic_error &) {
    throw Error("cannot parse p-adic entry '" + s + "'");
  }
}

// ---- matrices

using PMat = std::vector<std::vector<Padic>>;

struct PadicContext {
  long long p = 3;
  int k = 8;
};

inline int max_prec(const PMat &a) {
  int k = 1;
  for (auto &row : a)
    for (auto &x : row) k = std::max(k, x.prec);
  return k;
}

inline PMat pm_identity(const PadicContext &c, size_t n) {
  PMat m(n, std::vector<Padic>(n, padic_zero(c.p)));
  for (size_t i = 0; i < n; ++i) m[i][i] = padic_from_int(c.p, c.k, 1);
  return m;
}
inline PMat pm_from_q(const PadicContext &c, const QMat &q) {
  PMat m;
  for (auto &row : q) {
    std::vector<Padic> r;
    for (auto &x : row) r.push_back(padic_from_q(c.p, c.k, x));
    m.push_back(r);
  }
  return m;
}
/// diag(p^nu_1, ..., p^nu_n)
inline PMat pm_torus(const PadicContext &c, const IVec &nu) {
  PMat m = pm_identity(c, nu.size());
  for (size_t i = 0; i < nu.size(); ++i) m[i][i].val = nu[i];
  return m;
}
inline PMat operator*(const PMat &a, const PMat &b) {
  size_t n = a.size(), m = b[0].size(), l = b.size();
  PMat r(n, std::vector<Padic>(m, padic_zero(a[0][0].p)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      for (size_t t = 0; t < l; ++t)
        if (!a[i][t].exact_zero() && !b[t][j].exact_zero()) r[i][j] = r[i][j] + a[i][t] * b[t][j];
  return r;
}
inline PMat pm_transpose(const PMat &a) {
  PMat r(a[0].size(), std::vector<Padic>(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}
inline bool approx_equal(const PMat &a, const PMat &b) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j)
      if (!approx_equal(a[i][j], b[i][j])) return false;
  return true;
}
inline bool is_integral(const PMat &a) {
  for (auto &row : a)
    for (auto &x : row)
      if (!x.exact_zero() && x.val < 0) return false;
  return true;
}

/// Valuation-ring arithmetic over finite-precision Q_p.
struct PadicField {
  using T = Padic;
  long long p;
  int k;
  T zero() const { return padic_zero(p); }
  T one() const { return padic_from_int(p, k, 1); }
  bool exact_zero(const T &x) const { return x.exact_zero(); }
  bool genuine(const T &x) const { return x.prec > 0; }
  long long val(const T &x) const { return x.val; }
  T unit_part(const T &x) const {
    T u = x;
    u.val = 0;
    return u;
  }
};

/// p-adic valuation of a nonzero integer.
inline long long vp_int(Int n, long long p) {
  long long v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

/// Exact arithmetic in Q with the p-adic valuation; never loses precision.
struct RationalField {
  using T = Q;
  long long p;
  T zero() const { return Q(0); }
  T one() const { return Q(1); }
  bool exact_zero(const T &x) const { return x == 0; }
  bool genuine(const T &) const { return true; }
  long long val(const T &x) const {
    return vp_int(boost::multiprecision::numerator(x), p) - vp_int(boost::multiprecision::denominator(x), p);
  }
  T unit_part(const T &x) const {
    long long v = val(x);
    Q pv = Q(Int(1));
    for (long long i = 0; i < std::llabs(v); ++i) pv *= p;
    return v >= 0 ? Q(x / pv) : Q(x * pv);
  }
};

template <class T> using Mat = std::vector<std::vector<T>>;

namespace detail {
/// Pivot with minimal valuation inside rows [r0, r1) x cols [c0, c1).
template <class F>
std::pair<size_t, size_t> min_val_entry(const F &f, const Mat<typename F::T> &a, size_t r0, size_t r1, size_t c0,
                                        size_t c1) {
  long long best = Padic::kInf;
  size_t bi = r0, bj = c0;
  bool best_exact = false;
  for (size_t i = r0; i < r1; ++i)
    for (size_t j = c0; j < c1; ++j) {
      const auto &x = a[i][j];
      if (f.exact_zero(x)) continue;
      bool genuine = f.genuine(x);
      long long v = f.val(x);
      if (v < best || (v == best && genuine && !best_exact)) best = v, bi = i, bj = j, best_exact = genuine;
    }
  if (best == Padic::kInf) throw Error("matrix is singular");
  if (!best_exact) throw PrecisionError("pivot valuation >= working precision");
  return {bi, bj};
}

template <class F> Mat<typename F::T> identity(const F &f, size_t n) {
  Mat<typename F::T> m(n, std::vector<typename F::T>(n, f.zero()));
  for (size_t i = 0; i < n; ++i) m[i][i] = f.one();
  return m;
}
}  // namespace detail

inline PadicField field_of(const PMat &g) { return PadicField{g[0][0].p, max_prec(g)}; }

template <class F> Mat<typename F::T> field_inverse(const F &f, const Mat<typename F::T> &g) {
  using T = typename F::T;
  size_t n = g.size();
  Mat<T> a = g, r = detail::identity(f, n);
  for (size_t t = 0; t < n; ++t) {
    auto [pi, pj] = detail::min_val_entry(f, a, t, n, t, t + 1);
    (void)pj;
    std::swap(a[t], a[pi]);
    std::swap(r[t], r[pi]);
    T inv = f.one() / a[t][t];
    for (size_t j = 0; j < n; ++j) a[t][j] = a[t][j] * inv, r[t][j] = r[t][j] * inv;
    for (size_t i = 0; i < n; ++i) {
      if (i == t || f.exact_zero(a[i][t])) continue;
      T c = a[i][t];
      for (size_t j = 0; j < n; ++j) {
        a[i][j] = a[i][j] - c * a[t][j];
        r[i][j] = r[i][j] - c * r[t][j];
      }
      a[i][t] = f.zero();
    }
  }
  return r;
}

inline PMat pm_inverse(const PMat &g) { return field_inverse(field_of(g), g); }

/// g = k1 * diag(p^lambda) * k2 with k1, k2 in GL_n(Z_p) and lambda non-increasing.
template <class T> struct CartanDecompositionT {
  Mat<T> k1;
  IVec lambda;
  Mat<T> k2;
};
using CartanDecomposition = CartanDecompositionT<Padic>;

/// Smith form over Z_p by full minimal-valuation pivoting.
template <class F> CartanDecompositionT<typename F::T> cartan_decomposition(const F &f, const Mat<typename F::T> &g) {
  using T = typename F::T;
  size_t n = g.size();
  Mat<T> a = g, linv = detail::identity(f, n), rinv = detail::identity(f, n);
  for (size_t t = 0; t < n; ++t) {
    auto [pi, pj] = detail::min_val_entry(f, a, t, n, t, n);
    std::swap(a[t], a[pi]);
    for (auto &row : linv) std::swap(row[t], row[pi]);
    for (auto &row : a) std::swap(row[t], row[pj]);
    std::swap(rinv[t], rinv[pj]);
    T piv_inv = f.one() / a[t][t];
    for (size_t i = t + 1; i < n; ++i) {
      if (f.exact_zero(a[i][t])) continue;
      T c = a[i][t] * piv_inv;
      for (size_t j = t; j < n; ++j) a[i][j] = a[i][j] - c * a[t][j];
      for (size_t r = 0; r < n; ++r) linv[r][t] = linv[r][t] + c * linv[r][i];
      a[i][t] = f.zero();
    }
    for (size_t j = t + 1; j < n; ++j) {
      if (f.exact_zero(a[t][j])) continue;
      T c = a[t][j] * piv_inv;
      a[t][j] = f.zero();
      for (size_t col = 0; col < n; ++col) rinv[t][col] = rinv[t][col] + c * rinv[j][col];
    }
  }
  // pivots come out with non-decreasing valuation; reverse to the dominant order
  CartanDecompositionT<T> out;
  out.k1 = Mat<T>(n, std::vector<T>(n));
  out.k2 = Mat<T>(n, std::vector<T>(n));
  out.lambda.resize(n);
  for (size_t t = 0; t < n; ++t) {
    size_t s = n - 1 - t;
    out.lambda[t] = f.val(a[s][s]);
    T u = f.unit_part(a[s][s]);
    for (size_t r = 0; r < n; ++r) out.k1[r][t] = linv[r][s] * u;
    out.k2[t] = rinv[s];
  }
  return out;
}

inline CartanDecomposition cartan_decomposition(const PMat &g) { return cartan_decomposition(field_of(g), g); }

/// Dominant coweight of the double coset K g K (non-increasing elementary-divisor valuations).
inline IVec cartan_invariant(const PMat &g) { return cartan_decomposition(g).lambda; }
inline IVec cartan_invariant(const QMat &g, long long p) { return cartan_decomposition(RationalField{p}, g).lambda; }

/// g = b * k with b upper triangular and k in GL_n(Z_p).
template <class T> struct IwasawaDecompositionT {
  Mat<T> b;
  Mat<T> k;
  IVec h;  // valuations of the diagonal of b
};
using IwasawaDecomposition = IwasawaDecompositionT<Padic>;

/// Column reduction from the last row up, pivoting on the smallest valuation.
template <class F> IwasawaDecompositionT<typename F::T> iwasawa_upper(const F &f, const Mat<typename F::T> &g) {
  using T = typename F::T;
  size_t n = g.size();
  Mat<T> a = g, rinv = detail::identity(f, n);
  for (size_t rr = n; rr-- > 0;) {
    auto [pi, pj] = detail::min_val_entry(f, a, rr, rr + 1, 0, rr + 1);
    (void)pi;
    for (auto &row : a) std::swap(row[pj], row[rr]);
    std::swap(rinv[pj], rinv[rr]);
    T piv_inv = f.one() / a[rr][rr];
    for (size_t c = 0; c < rr; ++c) {
      if (f.exact_zero(a[rr][c])) continue;
      T m = a[rr][c] * piv_inv;
      for (size_t i = 0; i < rr; ++i) a[i][c] = a[i][c] - m * a[i][rr];
      a[rr][c] = f.zero();
      for (size_t j = 0; j < n; ++j) rinv[rr][j] = rinv[rr][j] + m * rinv[c][j];
    }
  }
  IwasawaDecompositionT<T> out{a, rinv, IVec(n)};
  for (size_t i = 0; i < n; ++i) out.h[i] = f.val(a[i][i]);
  return out;
}

inline IwasawaDecomposition iwasawa_upper(const PMat &g) { return iwasawa_upper(field_of(g), g); }

/// Permutation matrix of a Weyl element of a GL_n / SL_n datum.
inline PMat weyl_matrix(const PadicContext &c, const RootDatum &d, int w) {
  const IMat &m = d.weyl[w];
  size_t n = m.size();
  PMat r(n, std::vector<Padic>(n, padic_zero(c.p)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (m[i][j] != 0 && m[i][j] != 1) throw Error("weyl_matrix: Weyl element is not a permutation");
      if (m[i][j] == 1) r[i][j] = padic_from_int(c.p, c.k, 1);
    }
  return r;
}

/// Iwasawa retraction H_B for the Borel of chamber w: H_{wB}(g) = w H_B(w^-1 g).
inline IVec iwasawa_HB(const RootDatum &d, const PMat &g, int w) {
  PadicContext c{g[0][0].p, max_prec(g)};
  if (w == 0) return iwasawa_upper(g).h;
  PMat winv = weyl_matrix(c, d, d.inv[w]);
  return act(d, w, iwasawa_upper(winv * g).h);
}
inline IVec iwasawa_HB(const RootDatum &d, const QMat &g, int w, long long p) {
  RationalField f{p};
  if (w == 0) return iwasawa_upper(f, g).h;
  return act(d, w, iwasawa_upper(f, matmul(to_q(d.weyl[d.inv[w]]), g)).h);
}

// ---- involutions on matrices

struct MatrixInvolution {
  enum class Kind { Inner, TransposeInverse };
  Kind kind = Kind::TransposeInverse;
  QMat param;  // epsilon for Inner, J for TransposeInverse
};

inline PMat apply_involution(const MatrixInvolution &t, const PMat &g) {
  PadicContext c{g[0][0].p, max_prec(g)};
  PMat e = pm_from_q(c, t.param), einv = pm_from_q(c, inverse(t.param));
  if (t.kind == MatrixInvolution::Kind::Inner) return e * g * einv;
  return e * pm_inverse(pm_transpose(g)) * einv;
}

inline QMat apply_involution(const MatrixInvolution &t, const QMat &g) {
  QMat einv = inverse(t.param);
  if (t.kind == MatrixInvolution::Kind::Inner) return matmul(t.param, matmul(g, einv));
  return matmul(t.param, matmul(inverse(transpose(g)), einv));
}

/// tau(g) = theta(g)^-1 g
inline PMat tau(const MatrixInvolution &t, const PMat &g) { return pm_inverse(apply_involution(t, g)) * g; }
inline QMat tau(const MatrixInvolution &t, const QMat &g) { return matmul(inverse(apply_involution(t, g)), g); }

/// theta_star on X_*(A) for the diagonal torus; throws if theta does not preserve it.
inline IMat induced_theta_star(const MatrixInvolution &t, size_t n, long long p) {
  PadicContext c{p, 4};
  IMat m(n, IVec(n, 0));
  for (size_t i = 0; i < n; ++i) {
    IVec e(n, 0);
    e[i] = 1;
    PMat img = apply_involution(t, pm_torus(c, e));
    for (size_t r = 0; r < n; ++r)
      for (size_t s = 0; s < n; ++s) {
        if (r == s) continue;
        if (!img[r][s].is_zero()) throw Error("involution does not preserve the diagonal torus");
      }
    for (size_t r = 0; r < n; ++r) m[r][i] = img[r][r].val;
  }
  return m;
}

inline Q building_distance_sq(const RootDatum &d, const PMat &g) { return norm_sq(d, to_q(cartan_invariant(g))); }
inline double building_distance(const RootDatum &d, const PMat &g) {
  return std::sqrt(to_double(building_distance_sq(d, g)));
}
inline Q building_distance_sq(const RootDatum &d, const QMat &g, long long p) {
  return norm_sq(d, to_q(cartan_invariant(g, p)));
}
inline double building_distance(const RootDatum &d, const QMat &g, long long p) {
  return std::sqrt(to_double(building_distance_sq(d, g, p)));
}

// ---- Im tau

enum class Tri { False, True, Inconclusive };

inline const char *to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    default: return "inconclusive";
  }
}

struct ImTauStrategy {
  enum class Kind { Declared, Search };
  Kind kind = Kind::Search;
  IMat generators;            // declared: Z-basis (rows) of a lattice L
  std::vector<IVec> cosets;   // declared: Im tau = union of coset + L (default {0})
  int radius = 3;             // search: entries of candidate g in [-radius, radius]
  int congruence = 0;         // search: p^-nu tau(g) diagonal unit mod p^congruence (0 = working precision)
};

struct ImTauResult {
  Tri verdict = Tri::Inconclusive;
  std::optional<QMat> witness;  // integer matrix g
  IVec shift;  // witness satisfies tau(witness) ~ p^(nu + shift) u, shift in (1 - theta_star) X_*
};

inline bool in_declared_lattice(const IMat &gens, const std::vector<IVec> &cosets, const IVec &nu) {
  return LatticeTest(gens, cosets, nu.size()).contains(nu);
}

/// Valuation-of-determinant obstruction: Inner gives det tau = 1, transpose-inverse gives det(g)^2.
inline bool imtau_det_obstructed(const MatrixInvolution &t, const IVec &nu) {
  long long s = 0;
  for (auto x : nu) s += x;
  if (t.kind == MatrixInvolution::Kind::Inner) return s != 0;
  return s % 2 != 0;
}

inline ImTauResult imtau_membership(const IVec &nu, const MatrixInvolution &t, const ImTauStrategy &st,
                                    const PadicContext &c) {
  ImTauResult res;
  if (st.kind == ImTauStrategy::Kind::Declared) {
    res.verdict = in_declared_lattice(st.generators, st.cosets, nu) ? Tri::True : Tri::False;
    return res;
  }
  if (imtau_det_obstructed(t, nu)) {
    res.verdict = Tri::False;
    return res;
  }
  size_t n = nu.size();
  IMat theta = induced_theta_star(t, n, c.p);
  // tau(g t) = theta(t)^-1 tau(g) t, so nu may be moved by (1 - theta_star) lambda.
  long long box = 0;
  for (auto x : nu) box = std::max(box, std::llabs(x));
  box = std::min<long long>(box, 2);
  std::vector<IVec> reps;
  {
    IVec lam(n, -box);
    for (;;) {
      IVec shift = sub(lam, matvec(theta, lam));
      reps.push_back(shift);
      size_t i = 0;
      while (i < n && lam[i] == box) lam[i++] = -box;
      if (i == n) break;
      ++lam[i];
    }
  }
  // smallest representatives first
  std::stable_sort(reps.begin(), reps.end(), [&](const IVec &a, const IVec &b) {
    long long na = 0, nb = 0;
    for (size_t i = 0; i < n; ++i) na += std::llabs(nu[i] + a[i]), nb += std::llabs(nu[i] + b[i]);
    return na < nb;
  });
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  int level = st.congruence > 0 ? st.congruence : c.k;
  int r = st.radius;
  size_t cells = n * n;
  RationalField F{c.p};
  for (auto &shift : reps) {
    IVec target = add(nu, shift);
    IVec e(cells, -r);
    for (;;) {
      QMat gq(n, QVec(n));
      for (size_t i = 0; i < cells; ++i) gq[i / n][i % n] = e[i];
      if (det(gq) != 0) {
        // p^-nu tau(g) must be a diagonal unit matrix modulo p^level; g is an integer matrix, so check exactly
        QMat m = tau(t, gq);
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i)
          for (size_t j = 0; j < n && ok; ++j) {
            const Q &x = m[i][j];
            if (i == j)
              ok = x != 0 && F.val(x) == target[i];
            else
              ok = x == 0 || F.val(x) - target[i] >= level;
          }
        if (ok) {
          res.verdict = Tri::True;
          res.witness = gq;
          res.shift = shift;
          return res;
        }
      }
      size_t i = 0;
      while (i < cells && e[i] == r) e[i++] = -r;
      if (i == cells) break;
      ++e[i];
    }
  }
  return res;
}

}  // namespace rlt
