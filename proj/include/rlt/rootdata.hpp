#pragma once

#include "rlt/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rlt {

/// A based root datum with coweights in a fixed integer basis of X_*(A).
///
/// Roots are stored as integer functionals on the basis (pairing = dot
/// product). The Weyl group is materialized by closure under the simple
/// reflections; element 0 is the identity and words are reduced.
struct RootDatum {
  std::string name;
  int dim = 0;   // basis dimension of X_*(A)
  int rank = 0;  // number of simple roots
  IMat simple_roots;
  IMat simple_coroots;
  IMat constraints;  // rows c with c.x = 0 cut X_*(A) out of Z^dim (empty: all of Z^dim)
  IMat pairing;      // pairing[i][j] = <alpha_i, coroot_j>

  std::vector<IMat> weyl;              // action on coweights
  std::vector<std::vector<int>> words; // reduced words, letters 0-based
  std::vector<std::vector<int>> right; // right[w][i] = index of w * s_i
  std::vector<int> inv;
  int longest = 0;

  QMat form, form_inv;  // W-invariant inner product on the coweight space
  IMat roots;           // positive roots
  IMat coroots;         // coroots[k] belongs to roots[k]
  QVec rho;             // interior point of the dominant chamber
  std::map<std::vector<int>, int> chamber_by_signs;
  SmithForm lambda_snf;  // of the simple coroot matrix (dim x rank)

  size_t order() const { return weyl.size(); }
};

inline constexpr size_t kDefaultWeylBound = 2000;

namespace detail {
inline IMat reflection(const IVec &root, const IVec &coroot) {
  size_t n = root.size();
  IMat s = identity_matrix<long long>(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) s[i][j] -= coroot[i] * root[j];
  return s;
}
inline IVec flatten(const IMat &m) {
  IVec r;
  for (auto &row : m) r.insert(r.end(), row.begin(), row.end());
  return r;
}
inline std::vector<int> signs(const IMat &roots, const QVec &x) {
  std::vector<int> s;
  s.reserve(roots.size());
  for (auto &r : roots) {
    Q v = dot(r, x);
    s.push_back(v > 0 ? 1 : (v < 0 ? -1 : 0));
  }
  return s;
}
inline IVec row_times(const IVec &row, const IMat &m) {  // row * m
  IVec r(m.empty() ? 0 : m[0].size(), 0);
  for (size_t i = 0; i < row.size(); ++i)
    for (size_t j = 0; j < r.size(); ++j) r[j] += row[i] * m[i][j];
  return r;
}
}  // namespace detail

inline RootDatum make_root_datum(std::string name, IMat simple_roots, IMat simple_coroots, IMat constraints = {},
                                 size_t weyl_bound = kDefaultWeylBound) {
  RootDatum d;
  d.name = std::move(name);
  d.rank = static_cast<int>(simple_roots.size());
  if (d.rank == 0 || simple_coroots.size() != simple_roots.size())
    throw Error("root datum: need equally many simple roots and coroots");
  d.dim = static_cast<int>(simple_roots[0].size());
  if (d.rank > 4) throw Error("root datum: rank " + std::to_string(d.rank) + " exceeds 4");
  for (auto &v : simple_roots)
    if (static_cast<int>(v.size()) != d.dim) throw Error("root datum: root length mismatch");
  for (auto &v : simple_coroots)
    if (static_cast<int>(v.size()) != d.dim) throw Error("root datum: coroot length mismatch");
  for (auto &c : constraints)
    if (static_cast<int>(c.size()) != d.dim) throw Error("root datum: constraint length mismatch");
  d.simple_roots = std::move(simple_roots);
  d.simple_coroots = std::move(simple_coroots);
  d.constraints = std::move(constraints);

  d.pairing.assign(d.rank, IVec(d.rank));
  for (int i = 0; i < d.rank; ++i)
    for (int j = 0; j < d.rank; ++j) {
      long long v = 0;
      for (int k = 0; k < d.dim; ++k) v += d.simple_roots[i][k] * d.simple_coroots[j][k];
      d.pairing[i][j] = v;
      if (i == j && v != 2) throw Error("root datum: <alpha_i, coroot_i> != 2");
      if (i != j && v > 0) throw Error("root datum: positive off-diagonal pairing");
    }
  for (int i = 0; i < d.rank; ++i)
    for (int j = 0; j < i; ++j)
      if ((d.pairing[i][j] == 0) != (d.pairing[j][i] == 0)) throw Error("root datum: pairing sign pattern");
  if (rank(to_q(d.pairing)) != static_cast<size_t>(d.rank)) throw Error("root datum: degenerate pairing");
  for (auto &c : d.constraints)
    for (auto &cr : d.simple_coroots)
      if (dot(c, cr) != 0) throw Error("root datum: coroot violates lattice constraint");

  // Weyl group by breadth-first closure; BFS order keeps words reduced.
  std::vector<IMat> s;
  for (int i = 0; i < d.rank; ++i) s.push_back(detail::reflection(d.simple_roots[i], d.simple_coroots[i]));
  std::map<IVec, int> index;
  d.weyl.push_back(identity_matrix<long long>(d.dim));
  d.words.push_back({});
  index[detail::flatten(d.weyl[0])] = 0;
  for (size_t head = 0; head < d.weyl.size(); ++head) {
    for (int i = 0; i < d.rank; ++i) {
      IMat m = matmul(d.weyl[head], s[i]);
      auto key = detail::flatten(m);
      if (index.count(key)) continue;
      if (d.weyl.size() >= weyl_bound)
        throw Error("root datum: Weyl group exceeds bound " + std::to_string(weyl_bound));
      index[key] = static_cast<int>(d.weyl.size());
      d.weyl.push_back(m);
      auto w = d.words[head];
      w.push_back(i);
      d.words.push_back(w);
    }
  }
  size_t n = d.weyl.size();
  d.right.assign(n, std::vector<int>(d.rank));
  d.inv.assign(n, 0);
  for (size_t w = 0; w < n; ++w) {
    for (int i = 0; i < d.rank; ++i) d.right[w][i] = index.at(detail::flatten(matmul(d.weyl[w], s[i])));
    int u = 0;  // reversed word
    for (auto it = d.words[w].rbegin(); it != d.words[w].rend(); ++it) u = index.at(detail::flatten(matmul(d.weyl[u], s[*it])));
    d.inv[w] = u;
    if (d.words[w].size() > d.words[d.longest].size()) d.longest = static_cast<int>(w);
  }

  // W-average of the basis dot product.
  d.form.assign(d.dim, QVec(d.dim, Q(0)));
  for (auto &w : d.weyl) {
    auto wtw = matmul(transpose(w), w);
    for (int i = 0; i < d.dim; ++i)
      for (int j = 0; j < d.dim; ++j) d.form[i][j] += wtw[i][j];
  }
  for (auto &row : d.form)
    for (auto &x : row) x /= static_cast<long long>(n);
  d.form_inv = inverse(d.form);

  // rho: coroot-span point with <alpha_i, rho> = 1.
  auto c = solve(to_q(d.pairing), QVec(d.rank, Q(1)));
  d.rho.assign(d.dim, Q(0));
  for (int j = 0; j < d.rank; ++j)
    for (int k = 0; k < d.dim; ++k) d.rho[k] += (*c)[j] * d.simple_coroots[j][k];

  // positive roots with their coroots: root alpha_i o w^-1, coroot w alpha_i^v
  std::set<IVec> seen;
  for (size_t w = 0; w < n; ++w) {
    const IMat &winv = d.weyl[d.inv[w]];
    for (int i = 0; i < d.rank; ++i) {
      IVec r = detail::row_times(d.simple_roots[i], winv);
      if (dot(r, d.rho) <= 0 || seen.count(r)) continue;
      seen.insert(r);
      d.roots.push_back(r);
      d.coroots.push_back(matvec(d.weyl[w], d.simple_coroots[i]));
    }
  }
  for (size_t w = 0; w < n; ++w) d.chamber_by_signs[detail::signs(d.roots, matvec(d.weyl[w], d.rho))] = static_cast<int>(w);

  IMat cor(d.dim, IVec(d.rank));
  for (int j = 0; j < d.rank; ++j)
    for (int k = 0; k < d.dim; ++k) cor[k][j] = d.simple_coroots[j][k];
  d.lambda_snf = smith_normal_form(cor);
  return d;
}

/// Type tags: A1, A2, A3, B2, C2, A1xA1, GL<n>, SL<n>.
/// A_n and SL<n> use epsilon coordinates with coordinate sum zero.
inline RootDatum datum_from_tag(const std::string &tag, size_t weyl_bound = kDefaultWeylBound) {
  auto gl_roots = [](int n) {
    IMat r;
    for (int i = 0; i + 1 < n; ++i) {
      IVec v(n, 0);
      v[i] = 1, v[i + 1] = -1;
      r.push_back(v);
    }
    return r;
  };
  auto parse_n = [&](size_t off) {
    try {
      return std::stoi(tag.substr(off));
    } catch (...) {
      throw Error("unknown root datum type '" + tag + "'");
    }
  };
  if (tag == "A1") return make_root_datum(tag, {{2}}, {{1}}, {}, weyl_bound);
  if (tag == "A1xA1") return make_root_datum(tag, {{2, 0}, {0, 2}}, {{1, 0}, {0, 1}}, {}, weyl_bound);
  if (tag == "B2") return make_root_datum(tag, {{1, -1}, {0, 1}}, {{1, -1}, {0, 2}}, {}, weyl_bound);
  if (tag == "C2") return make_root_datum(tag, {{1, -1}, {0, 2}}, {{1, -1}, {0, 1}}, {}, weyl_bound);
  if (tag.size() >= 2 && tag[0] == 'A' && tag.find('x') == std::string::npos) {
    int n = parse_n(1) + 1;
    return make_root_datum(tag, gl_roots(n), gl_roots(n), {IVec(n, 1)}, weyl_bound);
  }
  if (tag.rfind("GL", 0) == 0) {
    int n = parse_n(2);
    if (n < 2) throw Error("GL<n> needs n >= 2");
    return make_root_datum(tag, gl_roots(n), gl_roots(n), {}, weyl_bound);
  }
  if (tag.rfind("SL", 0) == 0) {
    int n = parse_n(2);
    if (n < 2) throw Error("SL<n> needs n >= 2");
    return make_root_datum(tag, gl_roots(n), gl_roots(n), {IVec(n, 1)}, weyl_bound);
  }
  throw Error("unknown root datum type '" + tag + "'");
}

// ---- Weyl group action

inline IVec act(const RootDatum &d, int w, const IVec &x) { return matvec(d.weyl[w], x); }
inline QVec act(const RootDatum &d, int w, const QVec &x) { return matvec(d.weyl[w], x); }

inline int multiply(const RootDatum &d, int a, int b) {  // index of a*b
  int r = a;
  for (int letter : d.words[b]) r = d.right[r][letter];
  return r;
}

inline std::string word_key(const RootDatum &d, int w) {
  if (d.words[w].empty()) return "e";
  std::string s;
  for (int l : d.words[w]) s += std::to_string(l + 1);
  return s;
}

inline int chamber_from_key(const RootDatum &d, const std::string &key) {
  if (key == "e" || key.empty()) return 0;
  int w = 0;
  for (char c : key) {
    int l = c - '1';
    if (l < 0 || l >= d.rank) throw Error("bad Weyl word '" + key + "'");
    w = d.right[w][l];
  }
  return w;
}

inline bool in_lattice(const RootDatum &d, const IVec &x) {
  for (auto &c : d.constraints)
    if (dot(c, x) != 0) return false;
  return true;
}
inline bool in_lattice(const RootDatum &d, const QVec &x) { return is_integral(x) && in_lattice(d, to_ivec(x)); }

inline bool dominant(const RootDatum &d, const QVec &x) {
  for (auto &a : d.simple_roots)
    if (dot(a, x) < 0) return false;
  return true;
}
inline bool dominant(const RootDatum &d, const IVec &x) { return dominant(d, to_q(x)); }

/// x is dominant for the chamber w C_0.
inline bool dominant_for(const RootDatum &d, int w, const QVec &x) { return dominant(d, act(d, d.inv[w], x)); }

inline std::set<IVec> weyl_orbit(const RootDatum &d, const IVec &mu) {
  std::set<IVec> orbit;
  for (size_t w = 0; w < d.order(); ++w) orbit.insert(act(d, static_cast<int>(w), mu));
  return orbit;
}

/// Returns (dominant element, index of w with w * nu = dominant element).
inline std::pair<IVec, int> dominant_representative(const RootDatum &d, const IVec &nu) {
  IVec x = nu;
  std::vector<int> letters;  // applied left to right: x = s_{l_k} ... s_{l_1} nu
  for (size_t guard = 0; guard <= d.order() * static_cast<size_t>(d.rank); ++guard) {
    int bad = -1;
    for (int i = 0; i < d.rank; ++i)
      if (dot(d.simple_roots[i], x) < 0) {
        bad = i;
        break;
      }
    if (bad < 0) {
      int w = 0;
      for (auto it = letters.rbegin(); it != letters.rend(); ++it) w = d.right[w][*it];
      return {x, w};
    }
    long long c = dot(d.simple_roots[bad], x);
    for (int k = 0; k < d.dim; ++k) x[k] -= c * d.simple_coroots[bad][k];
    letters.push_back(bad);
  }
  throw Error("dominant_representative: no convergence");
}

/// Image of x in Lambda_G = X_*(A) / coroot lattice: torsion residues then free coordinates.
inline IVec lambda_class(const RootDatum &d, const IVec &x) {
  auto ux = matvec(d.lambda_snf.u, x);
  IVec cls;
  for (size_t i = 0; i < d.lambda_snf.d.size(); ++i)
    if (d.lambda_snf.d[i] != 1) cls.push_back(mod_ll(ux[i], d.lambda_snf.d[i]));
  for (size_t i = d.lambda_snf.d.size(); i < ux.size(); ++i) cls.push_back(ux[i]);
  return cls;
}

/// Squared norm for the W-invariant form.
inline Q norm_sq(const RootDatum &d, const QVec &x) { return dot(x, matvec(d.form, x)); }
inline Q inner(const RootDatum &d, const QVec &x, const QVec &y) { return dot(x, matvec(d.form, y)); }

// ---- facets

/// The facet w C_J, where C_J is the face of the dominant chamber on which the roots in J vanish.
struct FacetIndex {
  int chamber = 0;
  std::vector<int> zeroed;  // sorted simple-root indices
  bool operator==(const FacetIndex &o) const { return chamber == o.chamber && zeroed == o.zeroed; }
  bool operator<(const FacetIndex &o) const {
    return std::tie(chamber, zeroed) < std::tie(o.chamber, o.zeroed);
  }
};

inline QVec facet_interior_point(const RootDatum &d, const FacetIndex &f) {
  QVec target(d.rank, Q(1));
  for (int j : f.zeroed) target[j] = 0;
  auto c = solve(to_q(d.pairing), target);
  QVec x(d.dim, Q(0));
  for (int j = 0; j < d.rank; ++j)
    for (int k = 0; k < d.dim; ++k) x[k] += (*c)[j] * d.simple_coroots[j][k];
  return act(d, f.chamber, x);
}

inline std::vector<int> sign_vector(const RootDatum &d, const QVec &x) { return detail::signs(d.roots, x); }

/// Chamber containing a regular point.
inline int chamber_of(const RootDatum &d, const QVec &x) {
  auto it = d.chamber_by_signs.find(sign_vector(d, x));
  if (it == d.chamber_by_signs.end()) throw Error("chamber_of: point is not regular");
  return it->second;
}

/// All facets, each with a minimal-length chamber representative.
inline std::vector<FacetIndex> all_facets(const RootDatum &d) {
  std::map<std::vector<int>, FacetIndex> by_key;
  std::vector<FacetIndex> out;
  for (int mask = 0; mask < (1 << d.rank); ++mask) {
    std::vector<int> z;
    for (int j = 0; j < d.rank; ++j)
      if (mask >> j & 1) z.push_back(j);
    for (size_t w = 0; w < d.order(); ++w) {
      FacetIndex f{static_cast<int>(w), z};
      auto key = sign_vector(d, facet_interior_point(d, f));
      if (by_key.emplace(key, f).second) out.push_back(f);
    }
  }
  return out;
}

inline FacetIndex canonical_facet(const RootDatum &d, const FacetIndex &f) {
  auto key = sign_vector(d, facet_interior_point(d, f));
  for (size_t w = 0; w < d.order(); ++w) {
    FacetIndex g{static_cast<int>(w), f.zeroed};
    if (sign_vector(d, facet_interior_point(d, g)) == key) return g;
  }
  return f;
}

/// Functionals (rows) whose common kernel is the linear span of the facet.
inline IMat facet_equations(const RootDatum &d, const FacetIndex &f) {
  IMat rows;
  const IMat &winv = d.weyl[d.inv[f.chamber]];
  for (int j : f.zeroed) rows.push_back(detail::row_times(d.simple_roots[j], winv));
  return rows;
}

/// Orthogonal projection (W-invariant form) onto the common kernel of the rows of r.
inline QVec project_kernel(const RootDatum &d, const IMat &r, const QVec &x) {
  if (r.empty()) return x;
  QMat rq = to_q(r);
  QMat gi_rt = matmul(d.form_inv, transpose(rq));  // dim x m
  QMat m = matmul(rq, gi_rt);
  QVec rx = matvec(rq, x);
  QVec y = matvec(inverse(m), rx);
  return sub(x, matvec(gi_rt, y));
}

inline QVec project_to_facet(const RootDatum &d, const QVec &x, const FacetIndex &f) {
  return project_kernel(d, facet_equations(d, f), x);
}

/// mu_P: projection of a chamber-dominant point onto the facet span.
inline QVec facet_projection(const RootDatum &d, const QVec &mu_B, const FacetIndex &f) {
  if (!dominant_for(d, f.chamber, mu_B)) throw Error("facet_projection: point is not dominant for the facet's chamber");
  return project_to_facet(d, mu_B, f);
}
inline QVec facet_projection(const RootDatum &d, const IVec &mu_B, const FacetIndex &f) {
  return facet_projection(d, to_q(mu_B), f);
}

/// Basis of a_G = common kernel of all roots.
inline std::vector<QVec> center_basis(const RootDatum &d) { return nullspace(to_q(d.simple_roots), d.dim); }

// ---- involutions

struct InvolutionSpec {
  IMat theta_star;  // action on X_*(A)
};

inline QVec apply_theta(const InvolutionSpec &t, const QVec &x) { return matvec(t.theta_star, x); }
inline IVec apply_theta(const InvolutionSpec &t, const IVec &x) { return matvec(t.theta_star, x); }

/// theta_star^2 = 1, permutes the coroots, preserves the lattice and the invariant form.
inline void validate_involution(const RootDatum &d, const InvolutionSpec &t) {
  if (static_cast<int>(t.theta_star.size()) != d.dim) throw Error("involution: theta_star has wrong size");
  for (auto &row : t.theta_star)
    if (static_cast<int>(row.size()) != d.dim) throw Error("involution: theta_star has wrong size");
  if (matmul(t.theta_star, t.theta_star) != identity_matrix<long long>(d.dim))
    throw Error("involution: theta_star^2 != identity");
  std::set<IVec> all;
  for (auto &c : d.coroots) all.insert(c), all.insert(neg(c));
  for (auto &c : d.coroots)
    if (!all.count(apply_theta(t, c))) throw Error("involution: theta_star does not permute the coroots");
  QMat tq = to_q(t.theta_star);
  if (matmul(transpose(tq), matmul(d.form, tq)) != d.form) throw Error("involution: theta_star is not an isometry");
  for (auto &c : d.constraints) {
    // X_*(A) must be preserved: theta maps the constraint kernel into itself
    for (auto &b : integer_kernel(d.constraints, d.dim))
      if (dot(c, apply_theta(t, b)) != 0) throw Error("involution: theta_star does not preserve X_*(A)");
  }
}

/// Chamber theta(C_w).
inline int theta_chamber(const RootDatum &d, const InvolutionSpec &t, int w) {
  return chamber_of(d, apply_theta(t, act(d, w, d.rho)));
}

inline bool is_theta_split(const RootDatum &d, const InvolutionSpec &t, const FacetIndex &f) {
  QVec x = facet_interior_point(d, f);
  return sign_vector(d, apply_theta(t, x)) == sign_vector(d, neg(x));
}

inline std::vector<FacetIndex> theta_split_facets(const RootDatum &d, const InvolutionSpec &t) {
  std::vector<FacetIndex> out;
  for (auto &f : all_facets(d))
    if (is_theta_split(d, t, f)) out.push_back(f);
  return out;
}

/// Basis of a^- (the -1 eigenspace of theta_star).
inline std::vector<QVec> minus_space(const RootDatum &d, const InvolutionSpec &t) {
  QMat m = to_q(t.theta_star);
  for (int i = 0; i < d.dim; ++i) m[i][i] += 1;
  return nullspace(m, d.dim);
}

/// The facet's coordinate basis: projections of its chamber's simple coroots w alpha_i^v, i not in J.
inline std::vector<QVec> facet_coroot_basis(const RootDatum &d, const FacetIndex &f) {
  std::vector<QVec> out;
  for (int i = 0; i < d.rank; ++i) {
    if (std::find(f.zeroed.begin(), f.zeroed.end(), i) != f.zeroed.end()) continue;
    out.push_back(project_to_facet(d, to_q(act(d, f.chamber, d.simple_coroots[i])), f));
  }
  return out;
}

/// tau with -theta(e_i) = e_{tau(i)} on the facet basis; throws when -theta does not permute it.
inline std::vector<int> facet_ray_permutation(const RootDatum &d, const InvolutionSpec &t, const FacetIndex &f) {
  if (!is_theta_split(d, t, f)) throw Error("facet is not theta-split");
  auto basis = facet_coroot_basis(d, f);
  std::vector<int> tau(basis.size(), -1);
  for (size_t i = 0; i < basis.size(); ++i) {
    QVec img = neg(apply_theta(t, basis[i]));
    for (size_t j = 0; j < basis.size(); ++j)
      if (basis[j] == img) tau[i] = static_cast<int>(j);
    if (tau[i] < 0) throw Error("non-simplicial theta-split facet: -theta does not permute the facet basis");
  }
  return tau;
}

}  // namespace rlt
