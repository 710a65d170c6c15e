#pragma once

#include "rlt/rational.hpp"
#include "rlt/rootdata.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rlt {

// ---- exact convex-hull membership

namespace detail {
/// Phase-one simplex with Bland's rule: is {l >= 0 : a l = b} non-empty?
inline bool feasible(QMat a, QVec b) {
  size_t m = a.size(), n = m ? a[0].size() : 0;
  for (size_t i = 0; i < m; ++i)
    if (b[i] < 0) {
      for (auto &x : a[i]) x = -x;
      b[i] = -b[i];
    }
  // tableau: [a | I | b], objective = sum of artificials
  size_t cols = n + m;
  QMat t(m, QVec(cols + 1, Q(0)));
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1;
    t[i][cols] = b[i];
    basis[i] = n + i;
  }
  QVec cost(cols + 1, Q(0));  // reduced costs of minimizing sum(artificials)
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j <= cols; ++j)
      if (j < n || j == cols) cost[j] -= t[i][j];
  for (;;) {
    size_t enter = cols;
    for (size_t j = 0; j < cols; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    size_t leave = m;
    Q best;
    for (size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Q ratio = t[i][cols] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) leave = i, best = ratio;
    }
    if (leave == m) break;  // unbounded: cannot happen for phase one
    Q piv = t[leave][enter];
    for (auto &x : t[leave]) x /= piv;
    for (size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Q f = t[i][enter];
      for (size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    Q f = cost[enter];
    for (size_t j = 0; j <= cols; ++j) cost[j] -= f * t[leave][j];
    basis[leave] = enter;
  }
  return cost[cols] == 0;
}
}  // namespace detail

/// Exact test x in conv(vertices).
inline bool in_convex_hull(const std::vector<QVec> &vertices, const QVec &x) {
  if (vertices.empty()) return false;
  size_t dim = x.size(), m = vertices.size();
  QMat a(dim + 1, QVec(m));
  QVec b(dim + 1);
  for (size_t j = 0; j < m; ++j) {
    for (size_t i = 0; i < dim; ++i) a[i][j] = vertices[j][i];
    a[dim][j] = 1;
  }
  for (size_t i = 0; i < dim; ++i) b[i] = x[i];
  b[dim] = 1;
  return detail::feasible(a, b);
}

// ---- fans

enum class Level { A, AMinus };

inline const char *to_string(Level l) { return l == Level::A ? "A" : "A-"; }

/// Chambers of the Weyl fan of a (level A) or of its restriction to a^- (level A-).
struct Fan {
  Level level = Level::A;
  std::vector<FacetIndex> chambers;
  std::vector<QVec> interior;  // a point of each open chamber
  struct Wall {
    int a, b;
    QVec beta;  // separating direction, positive on chamber a
  };
  std::vector<Wall> walls;
};

inline Fan borel_fan(const RootDatum &d) {
  Fan f;
  for (size_t w = 0; w < d.order(); ++w) {
    f.chambers.push_back(FacetIndex{static_cast<int>(w), {}});
    f.interior.push_back(act(d, static_cast<int>(w), d.rho));
  }
  for (size_t w = 0; w < d.order(); ++w)
    for (int i = 0; i < d.rank; ++i) {
      int v = d.right[w][i];
      if (d.words[v].size() < d.words[w].size()) continue;  // each wall once
      f.walls.push_back({static_cast<int>(w), v, to_q(act(d, static_cast<int>(w), d.simple_coroots[i]))});
    }
  return f;
}

/// Orthogonal projection onto a^- (theta_star is an isometry, so this is (x - theta x) / 2).
inline QVec project_minus(const InvolutionSpec &t, const QVec &x) {
  QVec r = sub(x, apply_theta(t, x));
  for (auto &v : r) v /= 2;
  return r;
}

inline bool span_contains(const RootDatum &d, const FacetIndex &f, const std::vector<QVec> &vs) {
  IMat eq = facet_equations(d, f);
  for (auto &v : vs)
    for (auto &row : eq)
      if (dot(row, v) != 0) return false;
  return true;
}

/// Restricted fan: theta-split facets meeting a^- in an open subset; these index P(A)^-.
inline Fan minus_fan(const RootDatum &d, const InvolutionSpec &t) {
  Fan f;
  f.level = Level::AMinus;
  auto am = minus_space(d, t);
  for (auto &fc : theta_split_facets(d, t)) {
    if (!span_contains(d, fc, am)) continue;
    f.chambers.push_back(fc);
    f.interior.push_back(project_minus(t, facet_interior_point(d, fc)));
  }
  auto restriction = [&](const IVec &root) {
    QVec r;
    for (auto &b : am) r.push_back(dot(root, b));
    for (auto &x : r)
      if (x != 0) {
        Q s = x;  // first nonzero entry becomes 1, so r and -r agree
        for (auto &y : r) y /= s;
        break;
      }
    return r;
  };
  for (size_t i = 0; i < f.chambers.size(); ++i)
    for (size_t j = i + 1; j < f.chambers.size(); ++j) {
      std::set<QVec> hyperplanes;
      std::optional<QVec> beta;
      Q beta_norm;
      for (size_t k = 0; k < d.roots.size(); ++k) {
        Q si = dot(d.roots[k], f.interior[i]), sj = dot(d.roots[k], f.interior[j]);
        if ((si > 0) == (sj > 0)) continue;
        auto r = restriction(d.roots[k]);
        hyperplanes.insert(r);
        QVec b = project_minus(t, to_q(d.coroots[k]));
        if (si < 0) b = neg(b);
        Q n = norm_sq(d, b);
        if (!beta || n < beta_norm) beta = b, beta_norm = n;
      }
      if (hyperplanes.size() == 1)
        f.walls.push_back({static_cast<int>(i), static_cast<int>(j), *beta});
    }
  return f;
}

// ---- orthogonal sets

/// Family {x_P} indexed by the chambers of a fan.
struct OrthogonalSet {
  Level level = Level::A;
  std::vector<FacetIndex> index;
  std::vector<QVec> points;
};

/// Level-A set from points listed in Weyl-element order.
inline OrthogonalSet borel_set(const RootDatum &d, const std::vector<QVec> &points) {
  if (points.size() != d.order()) throw Error("orthogonal set: expected one point per chamber");
  OrthogonalSet s;
  for (size_t w = 0; w < d.order(); ++w) s.index.push_back(FacetIndex{static_cast<int>(w), {}});
  s.points = points;
  return s;
}

/// {w mu}: the family attached to g = e.
inline OrthogonalSet weyl_orbit_set(const RootDatum &d, const QVec &mu) {
  std::vector<QVec> pts;
  for (size_t w = 0; w < d.order(); ++w) pts.push_back(act(d, static_cast<int>(w), mu));
  return borel_set(d, pts);
}

struct NotOrthogonal : Error {
  FacetIndex a, b;
  NotOrthogonal(const std::string &what, FacetIndex a_, FacetIndex b_) : Error(what), a(a_), b(b_) {}
};

struct OrthoCertificate {
  struct Coefficient {
    FacetIndex a, b;
    Q r;
  };
  std::vector<Coefficient> coefficients;
  bool positive = true;
  bool special = true;
};

namespace detail {
/// Position of each fan chamber inside the set; throws on a missing chamber.
inline std::vector<size_t> align(const RootDatum &d, const Fan &fan, const OrthogonalSet &s) {
  if (s.level != fan.level) throw Error("orthogonal set: level mismatch");
  if (s.points.size() != s.index.size()) throw Error("orthogonal set: index/points size mismatch");
  std::map<std::vector<int>, size_t> by_key;
  for (size_t k = 0; k < s.index.size(); ++k)
    by_key[sign_vector(d, facet_interior_point(d, s.index[k]))] = k;
  std::vector<size_t> pos;
  for (auto &c : fan.chambers) {
    auto it = by_key.find(sign_vector(d, facet_interior_point(d, c)));
    if (it == by_key.end())
      throw Error("orthogonal set: missing chamber " + word_key(d, c.chamber));
    pos.push_back(it->second);
  }
  if (by_key.size() != fan.chambers.size()) throw Error("orthogonal set: points indexed by foreign chambers");
  return pos;
}

/// r with x = r * beta, or nullopt.
inline std::optional<Q> proportion(const QVec &x, const QVec &beta) {
  std::optional<Q> r;
  for (size_t i = 0; i < x.size(); ++i) {
    if (beta[i] == 0) {
      if (x[i] != 0) return std::nullopt;
      continue;
    }
    Q q = x[i] / beta[i];
    if (r && *r != q) return std::nullopt;
    r = q;
  }
  return r ? r : Q(0);
}
}  // namespace detail

inline OrthoCertificate validate_orthogonal(const OrthogonalSet &s, const RootDatum &d, const Fan &fan) {
  auto pos = detail::align(d, fan, s);
  OrthoCertificate cert;
  for (auto &w : fan.walls) {
    const QVec &xa = s.points[pos[w.a]], &xb = s.points[pos[w.b]];
    auto r = detail::proportion(sub(xa, xb), w.beta);
    if (!r)
      throw NotOrthogonal("difference not proportional to the separating coroot between chambers " +
                              word_key(d, fan.chambers[w.a].chamber) + " and " + word_key(d, fan.chambers[w.b].chamber),
                          fan.chambers[w.a], fan.chambers[w.b]);
    cert.coefficients.push_back({fan.chambers[w.a], fan.chambers[w.b], *r});
    if (*r < 0) cert.positive = false;
  }
  for (size_t c = 0; c < fan.chambers.size(); ++c)
    for (auto &root : d.roots) {
      Q side = dot(root, fan.interior[c]);
      if (side == 0) continue;
      Q v = dot(root, s.points[pos[c]]);
      if ((side > 0 && v < 0) || (side < 0 && v > 0)) cert.special = false;
    }
  return cert;
}

inline OrthoCertificate validate_orthogonal(const OrthogonalSet &s, const RootDatum &d) {
  if (s.level != Level::A) throw Error("validate_orthogonal: level A- needs the involution");
  return validate_orthogonal(s, d, borel_fan(d));
}

// ---- Hull{...}^*

struct HullQuery {
  QVec point;
  IVec star_class;
};

/// Common Lambda_G image of the lattice points among the set; nullopt if none is a lattice point.
inline std::optional<IVec> set_star_class(const RootDatum &d, const OrthogonalSet &s) {
  std::optional<IVec> cls;
  for (auto &x : s.points) {
    if (!in_lattice(d, x)) continue;
    IVec c = lambda_class(d, to_ivec(x));
    if (cls && *cls != c) throw Error("orthogonal set: points lie in different Lambda_G classes");
    cls = c;
  }
  return cls;
}

/// Membership oracle for Hull{x_P}^*, prepared once per set.
///
/// Positive level-A sets use x <=_B x_B for every B. Other sets fall back to
/// exact vertex-hull linear programming and report it through `fallback`.
class Hull {
 public:
  Hull(const RootDatum &d, const OrthogonalSet &s, IVec star_class, std::optional<bool> positive = std::nullopt)
      : d_(&d), star_(std::move(star_class)), vertices_(s.points) {
    bool pos;
    if (positive)
      pos = *positive;
    else if (s.level == Level::A)
      pos = validate_orthogonal(s, d).positive;
    else
      pos = false;
    fallback_ = s.level != Level::A || !pos;
    if (fallback_) return;
    // c = L w^-1 (x_w - q) must be >= 0, and (1 - C L) w^-1 (x_w - q) = 0.
    QMat cor(d.dim, QVec(d.rank));
    for (int j = 0; j < d.rank; ++j)
      for (int k = 0; k < d.dim; ++k) cor[k][j] = d.simple_coroots[j][k];
    QMat ct = transpose(cor);
    QMat left = matmul(inverse(matmul(ct, cor)), ct);  // rank x dim
    QMat proj = identity_matrix<Q>(d.dim);
    QMat cl = matmul(cor, left);
    for (int i = 0; i < d.dim; ++i)
      for (int j = 0; j < d.dim; ++j) proj[i][j] -= cl[i][j];
    for (size_t k = 0; k < s.index.size(); ++k) {
      int w = s.index[k].chamber;
      QMat winv = to_q(d.weyl[d.inv[w]]);
      coord_.push_back(matmul(left, winv));
      residual_.push_back(matmul(proj, winv));
    }
  }

  bool fallback() const { return fallback_; }
  const IVec &star_class() const { return star_; }

  bool contains(const QVec &q) const {
    if (in_lattice(*d_, q) && lambda_class(*d_, to_ivec(q)) != star_) return false;
    if (fallback_) return in_convex_hull(vertices_, q);
    for (size_t k = 0; k < vertices_.size(); ++k) {
      QVec diff = sub(vertices_[k], q);
      for (auto &x : matvec(residual_[k], diff))
        if (x != 0) return false;
      for (auto &c : matvec(coord_[k], diff))
        if (c < 0) return false;
    }
    return true;
  }
  bool contains(const IVec &q) const { return contains(to_q(q)); }

 private:
  const RootDatum *d_;
  IVec star_;
  std::vector<QVec> vertices_;
  bool fallback_ = false;
  std::vector<QMat> coord_, residual_;
};

struct HullVerdict {
  bool inside = false;
  bool fallback = false;
};

inline HullVerdict hull_check(const OrthogonalSet &s, const HullQuery &q, const RootDatum &d) {
  Hull h(d, s, q.star_class);
  return {h.contains(q.point), h.fallback()};
}

inline bool hull_member(const OrthogonalSet &s, const HullQuery &q, const RootDatum &d) {
  return hull_check(s, q, d).inside;
}

// ---- the minus operation

/// Which coordinates of a theta-split facet the minimum is taken in.
///
/// Coroot: the projected simple coroots of the facet (default).
/// Ray: the generating coweights of the facet's one-dimensional faces.
enum class MinusBasis { Coroot, Ray };

/// c_i = min(b_i, b_tau(i)).
inline QVec minus_coordinates(const QVec &b, const std::vector<int> &tau) {
  if (b.size() != tau.size()) throw Error("minus: coordinate/permutation size mismatch");
  QVec c(b.size());
  for (size_t i = 0; i < b.size(); ++i) c[i] = std::min(b[i], b[tau[i]]);
  return c;
}

/// Coordinate basis of span(f) modulo a_G.
inline std::vector<QVec> facet_basis(const RootDatum &d, const FacetIndex &f, MinusBasis mode) {
  if (mode == MinusBasis::Coroot) return facet_coroot_basis(d, f);
  std::vector<QVec> out;
  for (int i = 0; i < d.rank; ++i) {
    if (std::find(f.zeroed.begin(), f.zeroed.end(), i) != f.zeroed.end()) continue;
    QVec e(d.rank, Q(0));
    e[i] = 1;
    auto c = solve(to_q(d.pairing), e);  // fundamental coweight inside the coroot span
    QVec x(d.dim, Q(0));
    for (int j = 0; j < d.rank; ++j)
      for (int k = 0; k < d.dim; ++k) x[k] += (*c)[j] * d.simple_coroots[j][k];
    out.push_back(act(d, f.chamber, x));
  }
  return out;
}

/// tau with -theta(e_i) = e_tau(i); throws for a non-simplicial theta-split facet.
inline std::vector<int> basis_permutation(const RootDatum &d, const InvolutionSpec &t, const FacetIndex &f,
                                          const std::vector<QVec> &basis) {
  if (!is_theta_split(d, t, f)) throw Error("minus: facet is not theta-split");
  std::vector<int> tau(basis.size(), -1);
  for (size_t i = 0; i < basis.size(); ++i) {
    QVec img = neg(apply_theta(t, basis[i]));
    for (size_t j = 0; j < basis.size(); ++j)
      if (basis[j] == img) tau[i] = static_cast<int>(j);
    if (tau[i] < 0) throw Error("minus: non-simplicial theta-split facet, -theta does not permute its basis");
  }
  return tau;
}

/// x^- for x in span(f): minimise the facet coordinates, keep the a_G component.
inline QVec minus_point(const RootDatum &d, const InvolutionSpec &t, const FacetIndex &f, const QVec &x,
                        MinusBasis mode = MinusBasis::Coroot) {
  auto basis = facet_basis(d, f, mode);
  auto tau = basis_permutation(d, t, f, basis);
  auto center = center_basis(d);
  QMat a(d.dim, QVec(basis.size() + center.size()));
  for (size_t j = 0; j < basis.size(); ++j)
    for (int k = 0; k < d.dim; ++k) a[k][j] = basis[j][k];
  for (size_t j = 0; j < center.size(); ++j)
    for (int k = 0; k < d.dim; ++k) a[k][basis.size() + j] = center[j][k];
  auto coef = solve(a, x);
  if (!coef || matvec(a, *coef) != x) throw Error("minus: point is not in the span of the facet");
  QVec b(coef->begin(), coef->begin() + static_cast<long>(basis.size()));
  QVec c = minus_coordinates(b, tau);
  QVec out(d.dim, Q(0));
  for (size_t j = 0; j < basis.size(); ++j) out = add(out, scale(c[j], basis[j]));
  for (size_t j = 0; j < center.size(); ++j) out = add(out, scale((*coef)[basis.size() + j], center[j]));
  return out;
}

/// x_P: projection of x_B onto span(C_P) for the chamber B of P's facet.
inline QVec parabolic_point(const RootDatum &d, const OrthogonalSet &s, const FacetIndex &f) {
  if (s.level != Level::A) throw Error("parabolic_point: needs a level-A set");
  for (size_t k = 0; k < s.index.size(); ++k)
    if (s.index[k].chamber == f.chamber) return project_to_facet(d, s.points[k], f);
  throw Error("orthogonal set: missing chamber " + word_key(d, f.chamber));
}

/// {x_P^- : P in P(A)^-}, a family at level A-.
inline OrthogonalSet minus_set(const OrthogonalSet &s, const RootDatum &d, const InvolutionSpec &t,
                               MinusBasis mode = MinusBasis::Coroot) {
  Fan fan = minus_fan(d, t);
  OrthogonalSet out;
  out.level = Level::AMinus;
  for (auto &f : fan.chambers) {
    out.index.push_back(f);
    out.points.push_back(minus_point(d, t, f, parabolic_point(d, s, f), mode));
  }
  return out;
}

struct RestrictedHullReport {
  bool equal = true;
  std::optional<QVec> counterexample;
  bool left = false, right = false;  // memberships at the counterexample
  size_t probes = 0;
};

/// Hull{x_B}^* cap a^- against Hull{x_P^-}^* on the given probes.
inline RestrictedHullReport restricted_hull_equal(const OrthogonalSet &s, const InvolutionSpec &t, const RootDatum &d,
                                                  const std::vector<QVec> &probes, const IVec &star_class,
                                                  MinusBasis mode = MinusBasis::Coroot) {
  Hull lhs(d, s, star_class);
  Hull rhs(d, minus_set(s, d, t, mode), star_class);
  RestrictedHullReport rep;
  for (auto &p : probes) {
    if (apply_theta(t, p) != neg(p)) throw Error("restricted_hull_equal: probe is not in a^-");
    ++rep.probes;
    bool l = lhs.contains(p), r = rhs.contains(p);
    if (l != r) {
      rep.equal = false;
      rep.counterexample = p;
      rep.left = l, rep.right = r;
      return rep;
    }
  }
  return rep;
}

}  // namespace rlt
