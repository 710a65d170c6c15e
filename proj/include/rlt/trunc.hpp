#pragma once

#include "rlt/latcount.hpp"
#include "rlt/orthoset.hpp"
#include "rlt/padic.hpp"
#include "rlt/parallel.hpp"
#include "rlt/rational.hpp"
#include "rlt/rootdata.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rlt {

/// A matrix group with an involution, realised over Q_p on the diagonal torus.
struct Realization {
  RootDatum datum;
  InvolutionSpec theta;
  MatrixInvolution matrix_theta;
  PadicContext ctx;
  ImTauStrategy imtau;
  std::vector<int> levi;  // simple roots of the standard Levi M
};

/// Basis of a_M^- = {x : theta x = -x, alpha_j(x) = 0 for j in M}.
inline std::vector<QVec> split_center(const Realization &r) {
  QMat sys;
  for (int j : r.levi) sys.push_back(to_q(r.datum.simple_roots[j]));
  QMat theta_plus = to_q(r.theta.theta_star);
  for (int i = 0; i < r.datum.dim; ++i) theta_plus[i][i] += 1;
  for (auto &row : theta_plus) sys.push_back(row);
  return nullspace(sys, r.datum.dim);
}

/// Checks theta_star against the matrix involution and M = Z_G(A_M^-).
inline void validate_realization(const Realization &r) {
  validate_involution(r.datum, r.theta);
  if (induced_theta_star(r.matrix_theta, static_cast<size_t>(r.datum.dim), r.ctx.p) != r.theta.theta_star)
    throw Error("realization: matrix involution does not induce theta_star on the diagonal torus");
  for (int j : r.levi)
    if (j < 0 || j >= r.datum.rank) throw Error("realization: Levi root index out of range");
  // roots vanishing on a_M^- must be exactly the roots of M
  auto amm = split_center(r);
  QMat levi_roots;
  for (int j : r.levi) levi_roots.push_back(to_q(r.datum.simple_roots[j]));
  size_t levi_rank = levi_roots.empty() ? 0 : rank(levi_roots);
  for (auto &root : r.datum.roots) {
    bool vanishes = true;
    for (auto &b : amm) vanishes = vanishes && dot(root, b) == 0;
    QMat with = levi_roots;
    with.push_back(to_q(root));
    bool in_m = rank(with) == levi_rank;
    if (vanishes != in_m) throw Error("realization: M is not the centralizer of its theta-split center");
  }
}

inline bool in_split_center(const Realization &r, const IVec &nu) {
  if (!in_lattice(r.datum, nu)) return false;
  if (apply_theta(r.theta, nu) != neg(nu)) return false;
  for (int j : r.levi)
    if (dot(r.datum.simple_roots[j], nu) != 0) return false;
  return true;
}

/// Lower/upper bounds; equal unless the Im tau oracle was inconclusive.
struct Count {
  long long lower = 0, upper = 0;
  bool exact() const { return lower == upper; }
  bool operator==(const Count &o) const { return lower == o.lower && upper == o.upper; }
};

inline std::string to_string(const Count &c) {
  return c.exact() ? std::to_string(c.lower) : "[" + std::to_string(c.lower) + ", " + std::to_string(c.upper) + "]";
}

/// The weight-factor family x_B depends on mu only through mu_B; the regularity threshold was missed.
struct BelowRegularity : Error {
  explicit BelowRegularity(const std::string &what) : Error("below regularity threshold: " + what) {}
};

inline Tri imtau(const Realization &r, const IVec &nu) { return imtau_membership(nu, r.matrix_theta, r.imtau, r.ctx).verdict; }

// Group elements in the weight-factor code are rational matrices handled exactly,
// so deep valuations along mu1 + d mu2 never exhaust a fixed precision.

inline IVec cartan(const Realization &r, const QMat &g) { return cartan_invariant(g, r.ctx.p); }
inline Q distance_sq(const Realization &r, const QMat &g) { return building_distance_sq(r.datum, g, r.ctx.p); }
inline double distance(const Realization &r, const QMat &g) { return building_distance(r.datum, g, r.ctx.p); }

/// diag(p^nu) over Q.
inline QMat torus_q(long long p, const IVec &nu) {
  QMat m = to_q(identity_matrix<long long>(nu.size()));
  for (size_t i = 0; i < nu.size(); ++i) {
    Q x = 1;
    for (long long k = 0; k < std::llabs(nu[i]); ++k) x *= p;
    m[i][i] = nu[i] >= 0 ? x : Q(1 / x);
  }
  return m;
}

// ---- omega-bar

inline bool omega_bar(const Realization &r, const QMat &g, const IVec &mu) {
  if (!dominant(r.datum, mu)) throw Error("omega_bar: mu is not dominant");
  Hull hull(r.datum, weyl_orbit_set(r.datum, to_q(mu)), lambda_class(r.datum, mu), true);
  return hull.contains(cartan(r, tau(r.matrix_theta, g)));
}

namespace detail {
/// Enumerates nu in X_*(A_M^-) with |nu_i| bounded by the W-invariant norm bound.
inline void for_each_split_coweight(const Realization &r, double norm_bound,
                                    const std::function<void(const IVec &)> &f) {
  const RootDatum &d = r.datum;
  IVec lo(d.dim), hi(d.dim);
  for (int i = 0; i < d.dim; ++i) {
    // |x_i| <= |x|_E * sqrt(form_inv_ii)
    long long b = static_cast<long long>(std::ceil(norm_bound * std::sqrt(to_double(d.form_inv[i][i])) + 1e-9));
    lo[i] = -b, hi[i] = b;
  }
  for_each_box_point(lo, hi, [&](const IVec &nu) {
    if (in_split_center(r, nu)) f(nu);
  });
}
}  // namespace detail

/// Counts nu in X_*(A_M^-) cap Im tau with Cartan(theta(g)^-1 p^nu g) in Hull{W mu}^*.
inline Count omega_M(const Realization &r, const QMat &g, const IVec &mu) {
  if (!dominant(r.datum, mu)) throw Error("omega_M: mu is not dominant");
  const RootDatum &d = r.datum;
  QMat tg = apply_involution(r.matrix_theta, g);
  QMat tginv = inverse(tg);
  Hull hull(d, weyl_orbit_set(d, to_q(mu)), lambda_class(d, mu), true);
  // a contributing nu has |nu|_E <= d(g) + d(theta g) + |mu|_E
  double bound = distance(r, g) + distance(r, tg) + std::sqrt(to_double(norm_sq(d, to_q(mu))));
  // star class of nu: class(mu) + H_G(theta g) - H_G(g)
  IVec want = lambda_class(d, add(add(mu, cartan(r, tg)), neg(cartan(r, g))));
  Count c;
  detail::for_each_split_coweight(r, bound, [&](const IVec &nu) {
    if (lambda_class(d, nu) != want) return;
    if (!hull.contains(cartan(r, matmul(tginv, matmul(torus_q(r.ctx.p, nu), g))))) return;
    Tri t = imtau(r, nu);
    if (t == Tri::True) ++c.lower, ++c.upper;
    if (t == Tri::Inconclusive) ++c.upper;
  });
  return c;
}

/// H_{B_w}(g) for every chamber w, indexed by Weyl element.
inline std::vector<IVec> iwasawa_all(const Realization &r, const QMat &g) {
  std::vector<IVec> out;
  for (size_t w = 0; w < r.datum.order(); ++w) out.push_back(iwasawa_HB(r.datum, g, static_cast<int>(w), r.ctx.p));
  return out;
}

/// {mu_B - H_B(g) + H_Bbar(theta g)} at level A.
inline OrthogonalSet asymptotic_family(const Realization &r, const QMat &g, const IVec &mu) {
  const RootDatum &d = r.datum;
  auto hg = iwasawa_all(r, g);
  auto htg = iwasawa_all(r, apply_involution(r.matrix_theta, g));
  std::vector<QVec> pts;
  for (size_t w = 0; w < d.order(); ++w) {
    int wbar = multiply(d, static_cast<int>(w), d.longest);
    pts.push_back(to_q(add(sub(act(d, static_cast<int>(w), mu), hg[w]), htg[wbar])));
  }
  return borel_set(d, pts);
}

struct AsymptoticCount {
  Count count;
  bool fallback = false;  // hull decided by vertex LP (non-positive family)
};

namespace detail {
inline Count count_in_hull(const Realization &r, const Hull &hull, const std::vector<QVec> &vertices) {
  Count c;
  auto [lo, hi] = vertex_box(vertices);
  for_each_box_point(lo, hi, [&](const IVec &nu) {
    if (!in_split_center(r, nu) || !hull.contains(nu)) return;
    Tri t = imtau(r, nu);
    if (t == Tri::True) ++c.lower, ++c.upper;
    if (t == Tri::Inconclusive) ++c.upper;
  });
  return c;
}
}  // namespace detail

/// #{nu in X_*(A_M^-) cap Im tau : nu in Hull{mu_B - H_B(g) + H_Bbar(theta g)}^*}.
inline AsymptoticCount omega_M_asymp(const Realization &r, const QMat &g, const IVec &mu) {
  const RootDatum &d = r.datum;
  OrthogonalSet fam = asymptotic_family(r, g, mu);
  OrthoCertificate cert;
  try {
    cert = validate_orthogonal(fam, d);
  } catch (const NotOrthogonal &e) {
    throw BelowRegularity(e.what());
  }
  auto star = set_star_class(d, fam);
  Hull hull(d, fam, *star, cert.positive);
  return {detail::count_in_hull(r, hull, fam.points), hull.fallback()};
}

/// {(mu_P)^- - H_P(g) + H_Pbar(theta g) : P in P(A)^-} at level A-.
inline OrthogonalSet theta_split_family(const Realization &r, const QMat &g, const IVec &mu,
                                        MinusBasis mode = MinusBasis::Coroot) {
  const RootDatum &d = r.datum;
  Fan fan = minus_fan(d, r.theta);
  auto hg = iwasawa_all(r, g);
  auto htg = iwasawa_all(r, apply_involution(r.matrix_theta, g));
  OrthogonalSet out;
  out.level = Level::AMinus;
  for (auto &f : fan.chambers) {
    int w = f.chamber, wbar = multiply(d, w, d.longest);
    QVec mu_p = facet_projection(d, act(d, w, mu), f);
    QVec h = sub(project_to_facet(d, to_q(htg[wbar]), f), project_to_facet(d, to_q(hg[w]), f));
    out.index.push_back(f);
    out.points.push_back(add(minus_point(d, r.theta, f, mu_p, mode), h));
  }
  return out;
}

/// The same count computed through theta-split parabolics only.
inline AsymptoticCount theta_split_asymp(const Realization &r, const QMat &g, const IVec &mu,
                                         MinusBasis mode = MinusBasis::Coroot) {
  const RootDatum &d = r.datum;
  OrthogonalSet full = asymptotic_family(r, g, mu);
  try {
    validate_orthogonal(full, d);
  } catch (const NotOrthogonal &e) {
    throw BelowRegularity(e.what());
  }
  auto star = set_star_class(d, full);
  OrthogonalSet fam = theta_split_family(r, g, mu, mode);
  Hull hull(d, fam, *star);
  return {detail::count_in_hull(r, hull, fam.points), hull.fallback()};
}

// ---- weight reports

struct WeightReport {
  bool omega_bar = false;
  Count omega_M, omega_M_asymp, theta_split_asymp;
  bool asymp_defined = false;  // false below the regularity threshold
  bool fallback = false;
  Q regularity_margin;  // min_alpha <alpha, mu> - c (1 + d(g) + d(theta g)), when c is supplied
};

inline WeightReport weight_report(const Realization &r, const QMat &g, const IVec &mu, std::optional<double> c = {}) {
  WeightReport rep;
  rep.omega_bar = omega_bar(r, g, mu);
  rep.omega_M = omega_M(r, g, mu);
  try {
    auto a = omega_M_asymp(r, g, mu);
    auto b = theta_split_asymp(r, g, mu);
    rep.omega_M_asymp = a.count;
    rep.theta_split_asymp = b.count;
    rep.fallback = a.fallback;
    rep.asymp_defined = true;
  } catch (const BelowRegularity &) {
  }
  if (c) {
    Q m;
    bool first = true;
    for (auto &root : r.datum.simple_roots) {
      Q v = dot(root, to_q(mu));
      if (first || v < m) m = v, first = false;
    }
    double scale = 1 + distance(r, g) + distance(r, apply_involution(r.matrix_theta, g));
    rep.regularity_margin = m - Q(static_cast<long long>(std::floor(*c * scale * 1e6))) / 1000000;
  }
  return rep;
}

// ---- geometric lemma and asymptotics

inline IVec ray_point(const IVec &mu1, const IVec &mu2, long long d) { return add(mu1, scale(d, mu2)); }

inline bool regular(const RootDatum &d, const IVec &mu) {
  for (auto &root : d.simple_roots)
    if (dot(root, mu) <= 0) return false;
  return true;
}

struct LemmaSample {
  double scale = 0;  // 1 + d(g) + d(theta g)
  std::optional<long long> d_star;  // least d with agreement on [d, dmax]
  bool monotone = true;  // no agreement followed by disagreement below d_star
  std::vector<long long> omega, asymp, split;  // -1 where undefined
};

struct LemmaReport {
  std::vector<LemmaSample> training, fresh;
  double C = 0;
  bool all_agree = true;      // every sample has a d_star
  bool fresh_within = true;   // fresh d_star - 1 < C * scale
  size_t fresh_strict = 0;    // fresh samples with d_star > C * scale
  double fresh_max_ratio = 0;
  long long dmin = 0, dmax = 0;
};

namespace detail {
inline LemmaSample lemma_sample(const Realization &r, const QMat &g, const IVec &mu1, const IVec &mu2, long long dmin,
                                long long dmax) {
  LemmaSample s;
  s.scale = 1 + distance(r, g) + distance(r, apply_involution(r.matrix_theta, g));
  std::vector<bool> agree;
  for (long long d = dmin; d <= dmax; ++d) {
    IVec mu = ray_point(mu1, mu2, d);
    Count w = omega_M(r, g, mu);
    long long a = -1, b = -1;
    try {
      a = omega_M_asymp(r, g, mu).count.lower;
      b = theta_split_asymp(r, g, mu).count.lower;
    } catch (const BelowRegularity &) {
    }
    bool ok = w.exact() && a >= 0 && w.lower == a && a == b;
    s.omega.push_back(w.exact() ? w.lower : -1);
    s.asymp.push_back(a);
    s.split.push_back(b);
    agree.push_back(ok);
  }
  long long k = static_cast<long long>(agree.size());
  while (k > 0 && agree[k - 1]) --k;
  if (k < static_cast<long long>(agree.size())) s.d_star = dmin + k;
  for (long long i = 0; i < k; ++i)
    if (agree[i]) s.monotone = false;
  return s;
}
}  // namespace detail

/// Least d* with omega_M = omega_M^asymp = theta_split_asymp on [d*, dmax], and the constant
/// C with d* <= C (1 + d(g) + d(theta g)) fitted on `training` and tested on `fresh`.
inline LemmaReport verify_geometric_lemma(const Realization &r, const std::vector<QMat> &training,
                                          const std::vector<QMat> &fresh, const IVec &mu1, const IVec &mu2,
                                          long long dmin, long long dmax, unsigned jobs = 1) {
  if (!dominant(r.datum, mu1)) throw Error("verify_geometric_lemma: mu1 is not dominant");
  if (!regular(r.datum, mu2)) throw Error("verify_geometric_lemma: mu2 is not regular");
  LemmaReport rep;
  rep.dmin = dmin, rep.dmax = dmax;
  auto sample = [&](const std::vector<QMat> &gs) {
    return parallel_map<LemmaSample>(gs.size(), jobs, [&](size_t i) {
      return detail::lemma_sample(r, gs[i], mu1, mu2, dmin, dmax);
    });
  };
  rep.training = sample(training);
  rep.fresh = sample(fresh);
  for (auto &s : rep.training) {
    if (!s.d_star) {
      rep.all_agree = false;
      continue;
    }
    rep.C = std::max(rep.C, static_cast<double>(*s.d_star) / s.scale);
  }
  for (auto &s : rep.fresh) {
    if (!s.d_star) {
      rep.all_agree = false;
      rep.fresh_within = false;
      continue;
    }
    // d_star is the first agreeing d on an integer grid, so the true threshold lies in (d_star - 1, d_star].
    double ds = static_cast<double>(*s.d_star);
    rep.fresh_max_ratio = std::max(rep.fresh_max_ratio, ds / s.scale);
    if (ds > rep.C * s.scale + 1e-12) ++rep.fresh_strict;
    if (ds - 1 >= rep.C * s.scale - 1e-12) rep.fresh_within = false;
  }
  return rep;
}

/// dim a_M^- + rank Lambda_G.
inline int nu_degree_bound(const Realization &r) {
  int lattice_rank = r.datum.dim - static_cast<int>(r.datum.constraints.empty() ? 0 : rank(to_q(r.datum.constraints)));
  int free_rank = lattice_rank - r.datum.rank;
  return static_cast<int>(split_center(r).size()) + std::max(free_rank, 0);
}

/// nu_M(g, mu1 + d mu2) as the polynomial through omega_M^asymp on the window.
inline PolyFit nu_M_fit(const Realization &r, const QMat &g, const IVec &mu1, const IVec &mu2, long long lo,
                        long long hi, int min_held_out = 5) {
  return fit_polynomial(
      [&](long long d) -> std::optional<Q> {
        try {
          Count c = omega_M_asymp(r, g, ray_point(mu1, mu2, d)).count;
          if (!c.exact()) return std::nullopt;
          return Q(c.lower);
        } catch (const BelowRegularity &) {
          return std::nullopt;
        }
      },
      lo, hi, nu_degree_bound(r), min_held_out);
}

struct LimitSample {
  bool fitted = false;
  Polynomial nu;
  std::vector<long long> omega;
  std::vector<Q> diff;  // omega - nu at d = 0..dmax
  std::optional<long long> tail_start;  // least d with diff = 0 on [d, dmax]
  double log_norm = 0;                  // d(g) stands in for log |g|
};

struct LimitReport {
  std::vector<LimitSample> training, fresh;
  double a = 0;
  int r = 0;
  bool tails_vanish = true;
  bool envelope_holds = true;  // fresh |omega - nu| < a (1 + log|g| + |mu|)^r + 1
  size_t fresh_strict = 0;     // fresh samples exceeding a (1 + log|g| + |mu|)^r itself
  double fresh_max_ratio = 0;
  std::optional<size_t> failing_sample;
};

namespace detail {
inline LimitSample limit_sample(const Realization &r, const QMat &g, const IVec &mu1, const IVec &mu2, long long dmax) {
  LimitSample s;
  s.log_norm = distance(r, g);
  auto fit = nu_M_fit(r, g, mu1, mu2, 0, dmax);
  if (!fit.ok) return s;
  s.fitted = true;
  s.nu = fit.poly;
  for (long long d = 0; d <= dmax; ++d) {
    Count c = omega_M(r, g, ray_point(mu1, mu2, d));
    s.omega.push_back(c.lower);
    s.diff.push_back(Q(c.lower) - s.nu(Q(d)));
  }
  long long k = static_cast<long long>(s.diff.size());
  while (k > 0 && s.diff[k - 1] == 0) --k;
  if (k < static_cast<long long>(s.diff.size())) s.tail_start = k;
  return s;
}

inline double envelope_base(const Realization &r, const LimitSample &s, const IVec &mu1, const IVec &mu2, int power,
                            size_t d) {
  double norm = std::sqrt(to_double(norm_sq(r.datum, to_q(ray_point(mu1, mu2, static_cast<long long>(d))))));
  return std::pow(1 + s.log_norm + norm, power);
}

inline double envelope_ratio(const Realization &r, const LimitSample &s, const IVec &mu1, const IVec &mu2, int power) {
  double worst = 0;
  for (size_t d = 0; d < s.diff.size(); ++d)
    worst = std::max(worst, std::abs(to_double(s.diff[d])) / envelope_base(r, s, mu1, mu2, power, d));
  return worst;
}

/// The integer |omega - nu| stays within one unit of a (1 + log|g| + |mu|)^r.
inline bool envelope_within(const Realization &r, const LimitSample &s, const IVec &mu1, const IVec &mu2, int power,
                            double a) {
  for (size_t d = 0; d < s.diff.size(); ++d)
    if (std::abs(to_double(s.diff[d])) - 1 >= a * envelope_base(r, s, mu1, mu2, power, d) - 1e-12) return false;
  return true;
}
}  // namespace detail

/// omega_M - nu_M along the ray: vanishing tails and the envelope a (1 + log|g| + |mu|)^r.
inline LimitReport main_limit_check(const Realization &r, const std::vector<QMat> &training,
                                    const std::vector<QMat> &fresh, const IVec &mu1, const IVec &mu2, long long dmax,
                                    unsigned jobs = 1) {
  LimitReport rep;
  rep.r = static_cast<int>(split_center(r).size());
  auto sample = [&](const std::vector<QMat> &gs) {
    return parallel_map<LimitSample>(gs.size(), jobs, [&](size_t i) {
      return detail::limit_sample(r, gs[i], mu1, mu2, dmax);
    });
  };
  rep.training = sample(training);
  rep.fresh = sample(fresh);
  size_t idx = 0;
  for (auto *group : {&rep.training, &rep.fresh})
    for (auto &s : *group) {
      if ((!s.fitted || !s.tail_start) && !rep.failing_sample) rep.failing_sample = idx;
      if (!s.fitted || !s.tail_start) rep.tails_vanish = false;
      ++idx;
    }
  for (auto &s : rep.training) rep.a = std::max(rep.a, detail::envelope_ratio(r, s, mu1, mu2, rep.r));
  for (auto &s : rep.fresh) {
    double ratio = detail::envelope_ratio(r, s, mu1, mu2, rep.r);
    rep.fresh_max_ratio = std::max(rep.fresh_max_ratio, ratio);
    if (ratio > rep.a + 1e-12) ++rep.fresh_strict;
    if (!detail::envelope_within(r, s, mu1, mu2, rep.r, rep.a)) rep.envelope_holds = false;
  }
  return rep;
}

// ---- random group elements

/// g = k1 diag(p^a) n k2 with small random a, a unipotent n with entries of valuation >= -spread,
/// and random k1, k2 in GL_n(Z_p) built from integer elementary matrices. With `special` the
/// result has determinant 1.
inline QMat random_group_element(const PadicContext &c, size_t n, std::mt19937_64 &rng, int spread = 2,
                                 bool special = false) {
  std::uniform_int_distribution<int> small(-spread, spread);
  std::uniform_int_distribution<long long> unit(1, c.p - 1);
  std::uniform_int_distribution<long long> entry(-static_cast<long long>(c.p) * c.p, static_cast<long long>(c.p) * c.p);
  auto random_k = [&]() {
    QMat k = to_q(identity_matrix<long long>(n));
    for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
      size_t i = rng() % n, j = rng() % n;
      if (i == j) {
        if (special) continue;
        Q u = unit(rng);
        for (auto &x : k[i]) x *= u;
        continue;
      }
      long long f = entry(rng);
      for (size_t col = 0; col < n; ++col) k[i][col] += f * k[j][col];
    }
    return k;
  };
  QMat a = to_q(identity_matrix<long long>(n));
  int total = 0;
  for (size_t i = 0; i < n; ++i) {
    int e = small(rng);
    if (special && i + 1 == n) e = -total;
    total += e;
    a[i][i] = e >= 0 ? Q(ipow(c.p, e)) : Q(1) / Q(ipow(c.p, -e));
  }
  QMat u = to_q(identity_matrix<long long>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      int e = small(rng);
      Q x = entry(rng);
      u[i][j] = e >= 0 ? x * Q(ipow(c.p, e)) : x / Q(ipow(c.p, -e));
    }
  return matmul(random_k(), matmul(a, matmul(u, random_k())));
}

}  // namespace rlt
