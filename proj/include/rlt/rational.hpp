#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlt {

using Int = boost::multiprecision::cpp_int;
using Q = boost::multiprecision::cpp_rational;

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;
using QVec = std::vector<Q>;
using QMat = std::vector<QVec>;

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

inline Q qnum(const Q &x) { return boost::multiprecision::numerator(x); }
inline Q qden(const Q &x) { return boost::multiprecision::denominator(x); }
inline bool is_integer(const Q &x) { return boost::multiprecision::denominator(x) == 1; }

inline long long to_ll(const Q &x) {
  if (!is_integer(x)) throw Error("to_ll: non-integral rational");
  return static_cast<long long>(boost::multiprecision::numerator(x));
}

/// Largest integer <= x.
inline long long floor_q(const Q &x) {
  Int n = boost::multiprecision::numerator(x), d = boost::multiprecision::denominator(x);
  Int f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return static_cast<long long>(f);
}
inline long long ceil_q(const Q &x) { return -floor_q(-x); }

inline std::string to_string(const Q &x) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(x);
  if (boost::multiprecision::denominator(x) != 1) os << '/' << boost::multiprecision::denominator(x);
  return os.str();
}

/// Parses "a", "-a" or "a/b".
inline Q parse_q(const std::string &s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Q(Int(s));
    Int n(s.substr(0, slash)), d(s.substr(slash + 1));
    if (d == 0) throw Error("zero denominator in '" + s + "'");
    return Q(n, d);
  } catch (const std::runtime_error &) {
    throw Error("cannot parse rational '" + s + "'");
  }
}

inline double to_double(const Q &x) { return x.convert_to<double>(); }

// ---- vectors

inline QVec to_q(const IVec &v) { return QVec(v.begin(), v.end()); }

inline bool is_integral(const QVec &v) {
  return std::all_of(v.begin(), v.end(), [](const Q &x) { return is_integer(x); });
}

inline IVec to_ivec(const QVec &v) {
  IVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = to_ll(v[i]);
  return r;
}

template <class T> std::vector<T> add(const std::vector<T> &a, const std::vector<T> &b) {
  std::vector<T> r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}
template <class T> std::vector<T> sub(const std::vector<T> &a, const std::vector<T> &b) {
  std::vector<T> r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
template <class T, class S> std::vector<T> scale(const S &s, const std::vector<T> &a) {
  std::vector<T> r(a);
  for (auto &x : r) x *= s;
  return r;
}
template <class T> std::vector<T> neg(const std::vector<T> &a) {
  std::vector<T> r(a);
  for (auto &x : r) x = -x;
  return r;
}
template <class T> T dot(const std::vector<T> &a, const std::vector<T> &b) {
  T s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline Q dot(const IVec &a, const QVec &b) {
  Q s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline bool is_zero(const QVec &v) {
  return std::all_of(v.begin(), v.end(), [](const Q &x) { return x == 0; });
}

// ---- matrices (row-major)

template <class T> std::vector<T> matvec(const std::vector<std::vector<T>> &m, const std::vector<T> &v) {
  std::vector<T> r(m.size(), T(0));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
  return r;
}
inline QVec matvec(const IMat &m, const QVec &v) {
  QVec r(m.size(), Q(0));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
  return r;
}
template <class T>
std::vector<std::vector<T>> matmul(const std::vector<std::vector<T>> &a, const std::vector<std::vector<T>> &b) {
  size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  std::vector<std::vector<T>> r(n, std::vector<T>(m, T(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l)
      if (a[i][l] != 0)
        for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
  return r;
}
template <class T> std::vector<std::vector<T>> transpose(const std::vector<std::vector<T>> &a) {
  if (a.empty()) return {};
  std::vector<std::vector<T>> r(a[0].size(), std::vector<T>(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}
template <class T> std::vector<std::vector<T>> identity_matrix(size_t n) {
  std::vector<std::vector<T>> r(n, std::vector<T>(n, T(0)));
  for (size_t i = 0; i < n; ++i) r[i][i] = 1;
  return r;
}
inline QMat to_q(const IMat &m) {
  QMat r;
  for (auto &row : m) r.push_back(to_q(row));
  return r;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<size_t> rref(QMat &a) {
  std::vector<size_t> piv;
  size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Q inv = 1 / a[r][c];
    for (auto &x : a[r]) x *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Q f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

inline size_t rank(QMat a) { return rref(a).size(); }

/// Basis of {x : a x = 0}.
inline std::vector<QVec> nullspace(QMat a, size_t cols) {
  if (a.empty()) {
    std::vector<QVec> basis;
    for (size_t i = 0; i < cols; ++i) {
      QVec e(cols, Q(0));
      e[i] = 1;
      basis.push_back(e);
    }
    return basis;
  }
  auto piv = rref(a);
  std::vector<bool> is_piv(cols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<QVec> basis;
  for (size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    QVec v(cols, Q(0));
    v[f] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a[i][f];
    basis.push_back(v);
  }
  return basis;
}

/// Solves a x = b exactly; nullopt when inconsistent. Free variables are set to zero.
inline std::optional<QVec> solve(const QMat &a, const QVec &b) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  QMat aug(rows, QVec(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  QVec x(cols, Q(0));
  for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug[i][cols];
  return x;
}

inline QMat inverse(const QMat &a) {
  size_t n = a.size();
  QMat aug(n, QVec(2 * n, Q(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw Error("inverse: singular matrix");
  QMat r(n, QVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r[i][j] = aug[i][n + j];
  return r;
}

inline IMat to_imat(const QMat &m) {
  IMat r;
  for (auto &row : m) r.push_back(to_ivec(row));
  return r;
}

inline Q det(QMat a) {
  size_t n = a.size();
  Q d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Q f = a[i][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return d;
}

// ---- integer lattices

/// Smith normal form of an integer matrix a (m x n): u * a * v = diag(d), u and v unimodular.
struct SmithForm {
  IMat u, v;
  IVec d;  // nonzero invariant factors, d[i] | d[i+1]
};

inline SmithForm smith_normal_form(IMat a) {
  size_t m = a.size(), n = m ? a[0].size() : 0;
  IMat u = identity_matrix<long long>(m), v = identity_matrix<long long>(n);
  auto row_op = [&](size_t dst, size_t src, long long f) {  // row dst -= f * row src
    for (size_t j = 0; j < n; ++j) a[dst][j] -= f * a[src][j];
    for (size_t j = 0; j < m; ++j) u[dst][j] -= f * u[src][j];
  };
  auto col_op = [&](size_t dst, size_t src, long long f) {
    for (size_t i = 0; i < m; ++i) a[i][dst] -= f * a[i][src];
    for (size_t i = 0; i < n; ++i) v[i][dst] -= f * v[i][src];
  };
  auto swap_rows = [&](size_t i, size_t j) { std::swap(a[i], a[j]); std::swap(u[i], u[j]); };
  auto swap_cols = [&](size_t i, size_t j) {
    for (auto &r : a) std::swap(r[i], r[j]);
    for (auto &r : v) std::swap(r[i], r[j]);
  };
  IVec d;
  for (size_t t = 0; t < std::min(m, n); ++t) {
    // pivot: smallest nonzero absolute value in the remaining block
    for (;;) {
      long long best = 0;
      size_t bi = t, bj = t;
      for (size_t i = t; i < m; ++i)
        for (size_t j = t; j < n; ++j)
          if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) best = std::llabs(a[i][j]), bi = i, bj = j;
      if (best == 0) return {u, v, d};
      swap_rows(t, bi);
      swap_cols(t, bj);
      bool clean = true;
      for (size_t i = t + 1; i < m; ++i) {
        long long q = a[i][t] / a[t][t];
        if (q) row_op(i, t, q);
        if (a[i][t]) clean = false;
      }
      for (size_t j = t + 1; j < n; ++j) {
        long long q = a[t][j] / a[t][t];
        if (q) col_op(j, t, q);
        if (a[t][j]) clean = false;
      }
      if (!clean) continue;
      // divisibility of the rest of the block
      bool divides = true;
      for (size_t i = t + 1; i < m && divides; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (a[i][j] % a[t][t]) {
            for (size_t jj = 0; jj < n; ++jj) a[t][jj] += a[i][jj];
            for (size_t jj = 0; jj < m; ++jj) u[t][jj] += u[i][jj];
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a[t][t] < 0) {
      for (size_t j = 0; j < n; ++j) a[t][j] = -a[t][j];
      for (size_t j = 0; j < m; ++j) u[t][j] = -u[t][j];
    }
    d.push_back(a[t][t]);
  }
  return {u, v, d};
}

/// Integer basis (as rows) of the lattice {x in Z^n : a x = 0}.
inline IMat integer_kernel(const IMat &a, size_t n) {
  if (a.empty()) return identity_matrix<long long>(n);
  auto s = smith_normal_form(a);
  // a = u^-1 diag v^-1, so a x = 0 iff the first |d| coordinates of v^-1 x vanish.
  IMat basis;
  for (size_t j = s.d.size(); j < n; ++j) {
    IVec col(n);
    for (size_t i = 0; i < n; ++i) col[i] = s.v[i][j];
    basis.push_back(col);
  }
  return basis;
}

/// Membership in (cosets + span_Z(gens)); gens are rows. An empty coset list means {0}.
class LatticeTest {
 public:
  LatticeTest(const IMat &gens, std::vector<IVec> cosets, size_t dim) : cosets_(std::move(cosets)) {
    if (cosets_.empty()) cosets_.push_back(IVec(dim, 0));
    QMat b(dim, QVec(gens.size()));
    for (size_t j = 0; j < gens.size(); ++j)
      for (size_t i = 0; i < dim; ++i) b[i][j] = gens[j][i];
    if (gens.empty()) {
      left_ = {};
      residual_ = identity_matrix<Q>(dim);
      return;
    }
    if (rank(b) != gens.size()) throw Error("lattice generators are linearly dependent");
    QMat bt = transpose(b);
    left_ = matmul(inverse(matmul(bt, b)), bt);
    residual_ = identity_matrix<Q>(dim);
    QMat bl = matmul(b, left_);
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < dim; ++j) residual_[i][j] -= bl[i][j];
  }
  bool contains(const IVec &v) const {
    for (auto &c : cosets_) {
      QVec x = to_q(sub(v, c));
      if (!is_zero(matvec(residual_, x))) continue;
      if (left_.empty() || is_integral(matvec(left_, x))) return true;
    }
    return false;
  }

 private:
  std::vector<IVec> cosets_;
  QMat left_, residual_;
};

inline long long gcd_ll(long long a, long long b) {
  a = std::llabs(a), b = std::llabs(b);
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}
inline long long mod_ll(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace rlt
