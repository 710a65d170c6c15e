// rlt: command-line driver for the library; see README.md for the command list.

#include "rlt/config.hpp"
#include "rlt/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <random>

#ifndef RLT_FIXTURE_DIR
#define RLT_FIXTURE_DIR "fixtures"
#endif

using namespace rlt;

namespace {

struct Usage : Error {
  using Error::Error;
};

struct Globals {
  std::string config, fixture, format = "jsonl";
  std::optional<long long> prime;
  std::optional<int> precision, search_radius;
  uint64_t seed = 1;
  unsigned jobs = 1;
};

// command-line values that override params
struct Flags {
  std::string matrix, mu, mu1, mu2, nu, function, algebra, lie_involution, chamber;
  std::optional<long long> p, level, samples, fresh, dmin, dmax, lo, hi;
};

struct Run {
  RunConfig rc;
  Reporter &rep;
  Globals &gl;
  Flags &fl;
};

IVec parse_ivec(const std::string &s) {
  IVec v;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stoll(cell));
    } catch (...) {
      throw Usage("bad integer vector '" + s + "'");
    }
  }
  return v;
}

IVec ivec_param(const Run &r, const std::string &flag, const char *key, std::optional<IVec> def = {}) {
  if (!flag.empty()) return parse_ivec(flag);
  if (r.rc.params.contains(key)) return ivec_from_json(r.rc.params[key], std::string("$.params.") + key);
  if (def) return *def;
  throw ConfigError(std::string("$.params.") + key, "missing (or pass it on the command line)");
}

long long ll_param(const Run &r, std::optional<long long> flag, const char *key, long long def) {
  if (flag) return *flag;
  if (r.rc.params.contains(key)) {
    auto &v = r.rc.params[key];
    if (!v.is_number_integer()) throw ConfigError(std::string("$.params.") + key, "expected an integer");
    return v.get<long long>();
  }
  return def;
}

std::string str_param(const Run &r, const std::string &flag, const char *key, const std::string &def) {
  if (!flag.empty()) return flag;
  if (r.rc.params.contains(key)) return r.rc.params[key].get<std::string>();
  return def;
}

QMat matrix_param(const Run &r) {
  if (!r.fl.matrix.empty()) return parse_matrix(r.fl.matrix);
  if (r.rc.params.contains("g")) return qmat_from_json(r.rc.params["g"], "$.params.g");
  return to_q(identity_matrix<long long>(static_cast<size_t>(r.rc.datum.dim)));
}

void check_dim(const Run &r, const IVec &v, const char *what) {
  if (static_cast<int>(v.size()) != r.rc.datum.dim)
    throw ConfigError(what, "expected " + std::to_string(r.rc.datum.dim) + " entries");
}

void check_matrix(const Run &r, const QMat &g) {
  if (static_cast<int>(g.size()) != r.rc.datum.dim) throw ConfigError("g", "matrix size does not match the group");
  if (det(g) == 0) throw ConfigError("g", "matrix is singular");
  if (!r.rc.datum.constraints.empty() && det(g) != 1)
    throw ConfigError("g", "determinant must be 1 for " + r.rc.datum.name);
}

const Realization &realization(const Run &r) {
  if (!r.rc.realization) throw ConfigError("$.realization.involution", "this command needs a matrix involution");
  return *r.rc.realization;
}

long long prime_of(const Run &r) {
  if (r.rc.realization) return r.rc.realization->ctx.p;
  auto &real = r.rc.raw["realization"];
  return real.contains("prime") ? real["prime"].get<long long>() : 5;
}

std::vector<QMat> random_elements(const Realization &re, size_t n, std::mt19937_64 &rng) {
  std::vector<QMat> out;
  bool special = !re.datum.constraints.empty();
  for (size_t i = 0; i < n; ++i)
    out.push_back(random_group_element(re.ctx, static_cast<size_t>(re.datum.dim), rng, 2, special));
  return out;
}

OrthogonalSet set_param(const Run &r) {
  const RootDatum &d = r.rc.datum;
  if (r.rc.params.contains("set")) return borel_set_from_json(d, r.rc.params["set"], "$.params.set");
  IVec mu = ivec_param(r, r.fl.mu, "mu");
  check_dim(r, mu, "mu");
  return weyl_orbit_set(d, to_q(mu));
}

IVec star_param(const Run &r, const OrthogonalSet &s) {
  if (r.rc.params.contains("star_class")) return ivec_from_json(r.rc.params["star_class"], "$.params.star_class");
  auto c = set_star_class(r.rc.datum, s);
  if (!c) throw ConfigError("$.params.star_class", "no lattice point in the set; give the class explicitly");
  return *c;
}

// ---- commands; each returns false when a verification failed or an oracle was inconclusive

bool cmd_rootdata(Run &r) {
  const RootDatum &d = r.rc.datum;
  r.rep.emit("rootdata.make_root_datum", to_json(d));
  if (!r.rc.theta) return true;
  const InvolutionSpec &t = *r.rc.theta;
  json facets = json::array();
  for (auto &f : theta_split_facets(d, t)) facets.push_back(to_json(d, f));
  json ms = json::array();
  for (auto &v : minus_space(d, t)) ms.push_back(to_json(v));
  r.rep.emit("rootdata.theta_split_facets", json{{"theta_star", to_json(t.theta_star)}, {"facets", facets},
                                                  {"minus_space", ms}});
  Fan fan = minus_fan(d, t);
  json ch = json::array(), walls = json::array();
  for (auto &f : fan.chambers) ch.push_back(to_json(d, f));
  for (auto &w : fan.walls) walls.push_back(json{{"a", w.a}, {"b", w.b}, {"beta", to_json(w.beta)}});
  r.rep.emit("orthoset.minus_fan", json{{"chambers", ch}, {"walls", walls}});
  return true;
}

std::vector<QVec> default_probes(const RootDatum &d, const InvolutionSpec &t, const OrthogonalSet &s, size_t cap) {
  auto [lo, hi] = vertex_box(s.points);
  for (size_t i = 0; i < lo.size(); ++i) --lo[i], ++hi[i];
  std::vector<QVec> out;
  for_each_box_point(lo, hi, [&](const IVec &x) {
    if (out.size() < cap && apply_theta(t, x) == neg(x)) out.push_back(to_q(x));
  });
  return out;
}

bool cmd_orthoset(Run &r) {
  const RootDatum &d = r.rc.datum;
  OrthogonalSet s = set_param(r);
  bool ok = true;
  try {
    auto cert = validate_orthogonal(s, d);
    json j = to_json(d, cert);
    j["set"] = to_json(d, s);
    r.rep.emit("orthoset.validate_orthogonal", j);
  } catch (const NotOrthogonal &e) {
    r.rep.emit("orthoset.validate_orthogonal",
               json{{"valid", false}, {"message", e.what()}, {"a", to_json(d, e.a)}, {"b", to_json(d, e.b)}});
    return false;
  }
  IVec star = star_param(r, s);
  if (r.rc.params.contains("queries")) {
    auto &qs = r.rc.params["queries"];
    if (!qs.is_array()) throw ConfigError("$.params.queries", "expected an array of points");
    for (size_t i = 0; i < qs.size(); ++i) {
      QVec x = qvec_from_json(qs[i], "$.params.queries[" + std::to_string(i) + "]");
      auto v = hull_check(s, HullQuery{x, star}, d);
      r.rep.emit("orthoset.hull_member", json{{"point", to_json(x)}, {"member", v.inside}, {"fallback", v.fallback}},
                 i);
    }
  }
  if (!r.rc.theta) return ok;
  const InvolutionSpec &t = *r.rc.theta;
  std::string basis = str_param(r, "", "minus_basis", "coroot");
  if (basis != "coroot" && basis != "ray") throw ConfigError("$.params.minus_basis", "expected coroot or ray");
  MinusBasis mode = basis == "ray" ? MinusBasis::Ray : MinusBasis::Coroot;
  OrthogonalSet ms = minus_set(s, d, t, mode);
  json j;
  j["minus_basis"] = basis;
  j["set"] = to_json(d, ms);
  try {
    auto cert = validate_orthogonal(ms, d, minus_fan(d, t));
    j["valid"] = true;
    j["positive"] = cert.positive;
  } catch (const NotOrthogonal &e) {
    j["valid"] = false;
    j["message"] = e.what();
    ok = false;
  }
  r.rep.emit("orthoset.minus_set", j);
  auto probes = default_probes(d, t, s, 100);
  auto eq = restricted_hull_equal(s, t, d, probes, star, mode);
  json e{{"equal", eq.equal}, {"probes", eq.probes}};
  if (eq.counterexample) {
    e["counterexample"] = to_json(*eq.counterexample);
    e["in_restricted_hull"] = eq.left;
    e["in_minus_hull"] = eq.right;
  }
  r.rep.emit("orthoset.restricted_hull_equal", e);
  return ok && eq.equal;
}

bool cmd_cartan(Run &r) {
  QMat g = matrix_param(r);
  check_matrix(r, g);
  long long p = prime_of(r);
  RationalField f{p};
  auto c = cartan_decomposition(f, g);
  QMat back = matmul(c.k1, matmul(torus_q(p, c.lambda), c.k2));
  auto in_k = [&](const QMat &k) {
    for (auto &row : k)
      for (auto &x : row)
        if (x != 0 && f.val(x) < 0) return false;
    return f.val(det(k)) == 0;
  };
  bool ok = back == g && in_k(c.k1) && in_k(c.k2) && dominant(r.rc.datum, c.lambda);
  r.rep.emit("padic.cartan_invariant",
             json{{"g", to_json(g)}, {"prime", p}, {"lambda", to_json(c.lambda)},
                  {"distance", building_distance(r.rc.datum, g, p)}, {"k1", to_json(c.k1)}, {"k2", to_json(c.k2)},
                  {"reconstructs", back == g}, {"k_integral", in_k(c.k1) && in_k(c.k2)}});
  return ok;
}

bool cmd_hb(Run &r) {
  QMat g = matrix_param(r);
  check_matrix(r, g);
  long long p = prime_of(r);
  const RootDatum &d = r.rc.datum;
  std::vector<int> ws;
  if (!r.fl.chamber.empty()) ws.push_back(chamber_from_key(d, r.fl.chamber));
  else
    for (size_t w = 0; w < d.order(); ++w) ws.push_back(static_cast<int>(w));
  for (int w : ws)
    r.rep.emit("padic.iwasawa_HB", json{{"chamber", word_key(d, w)}, {"H", to_json(iwasawa_HB(d, g, w, p))}},
               static_cast<size_t>(w));
  return true;
}

bool cmd_tau(Run &r) {
  const Realization &re = realization(r);
  QMat g = matrix_param(r);
  check_matrix(r, g);
  QMat tg = apply_involution(re.matrix_theta, g), t = tau(re.matrix_theta, g);
  r.rep.emit("padic.tau", json{{"g", to_json(g)}, {"theta_g", to_json(tg)}, {"tau", to_json(t)},
                               {"cartan_tau", to_json(cartan(re, t))}});
  if (r.fl.nu.empty()) return true;
  IVec nu = parse_ivec(r.fl.nu);
  check_dim(r, nu, "nu");
  auto res = imtau_membership(nu, re.matrix_theta, re.imtau, re.ctx);
  json j{{"nu", to_json(nu)}, {"verdict", to_string(res.verdict)}};
  if (res.witness) {
    j["witness"] = to_json(*res.witness);
    j["shift"] = to_json(res.shift);
  }
  r.rep.emit("padic.imtau_membership", j);
  return res.verdict != Tri::Inconclusive;
}

bool cmd_omega(Run &r) {
  const Realization &re = realization(r);
  QMat g = matrix_param(r);
  check_matrix(r, g);
  IVec mu = ivec_param(r, r.fl.mu, "mu");
  check_dim(r, mu, "mu");
  auto w = weight_report(re, g, mu);
  json j{{"g", to_json(g)}, {"mu", to_json(mu)}, {"omega_bar", w.omega_bar}, {"omega_M", to_json(w.omega_M)}};
  if (w.asymp_defined) {
    j["omega_M_asymp"] = to_json(w.omega_M_asymp);
    j["theta_split_asymp"] = to_json(w.theta_split_asymp);
    j["hull_fallback"] = w.fallback;
  } else {
    j["omega_M_asymp"] = nullptr;
    j["below_regularity"] = true;
  }
  r.rep.emit("trunc.weight_report", j);
  return w.omega_M.exact() && (!w.asymp_defined || (w.omega_M_asymp.exact() && w.theta_split_asymp.exact()));
}

json lemma_row(const LemmaSample &s, double C, bool fresh) {
  json j{{"sample", fresh ? "fresh" : "training"}, {"scale", s.scale}};
  j["d_star"] = s.d_star ? json(*s.d_star) : json(nullptr);
  if (fresh) j["bound"] = C * s.scale;
  j["monotone"] = s.monotone;
  return j;
}

bool cmd_verify_lemma(Run &r) {
  const Realization &re = realization(r);
  IVec mu1 = ivec_param(r, r.fl.mu1, "mu1", IVec(re.datum.dim, 0)), mu2 = ivec_param(r, r.fl.mu2, "mu2");
  check_dim(r, mu1, "mu1"), check_dim(r, mu2, "mu2");
  long long n = ll_param(r, r.fl.samples, "samples", 100), m = ll_param(r, r.fl.fresh, "fresh", 50);
  long long dmin = ll_param(r, r.fl.dmin, "dmin", 0), dmax = ll_param(r, r.fl.dmax, "dmax", 40);
  if (n < 1 || m < 0 || dmax < dmin) throw ConfigError("$.params", "need samples >= 1, fresh >= 0, dmin <= dmax");
  std::mt19937_64 rng(r.gl.seed);
  auto train = random_elements(re, static_cast<size_t>(n), rng);
  auto fresh = random_elements(re, static_cast<size_t>(m), rng);
  auto rep = verify_geometric_lemma(re, train, fresh, mu1, mu2, dmin, dmax, r.gl.jobs);
  size_t i = 0;
  for (auto &s : rep.training) r.rep.emit("trunc.verify_geometric_lemma", lemma_row(s, rep.C, false), i++);
  for (auto &s : rep.fresh) r.rep.emit("trunc.verify_geometric_lemma", lemma_row(s, rep.C, true), i++);
  r.rep.emit("trunc.verify_geometric_lemma",
             json{{"summary", true}, {"C", rep.C}, {"all_agree", rep.all_agree}, {"fresh_within", rep.fresh_within},
                  {"fresh_strict", rep.fresh_strict}, {"fresh_max_ratio", rep.fresh_max_ratio}, {"dmin", dmin}, {"dmax", dmax}});
  return rep.all_agree && rep.fresh_within;
}

bool cmd_nu_fit(Run &r) {
  const Realization &re = realization(r);
  QMat g = matrix_param(r);
  check_matrix(r, g);
  IVec mu1 = ivec_param(r, r.fl.mu1, "mu1", IVec(re.datum.dim, 0)), mu2 = ivec_param(r, r.fl.mu2, "mu2");
  check_dim(r, mu1, "mu1"), check_dim(r, mu2, "mu2");
  long long lo = ll_param(r, r.fl.lo, "lo", 0), hi = ll_param(r, r.fl.hi, "hi", 12);
  auto fit = nu_M_fit(re, g, mu1, mu2, lo, hi);
  json j = to_json(fit);
  j["degree_bound"] = nu_degree_bound(re);
  r.rep.emit("trunc.nu_M_fit", j);
  return fit.ok;
}

bool cmd_limit_check(Run &r) {
  const Realization &re = realization(r);
  IVec mu1 = ivec_param(r, r.fl.mu1, "mu1", IVec(re.datum.dim, 0)), mu2 = ivec_param(r, r.fl.mu2, "mu2");
  check_dim(r, mu1, "mu1"), check_dim(r, mu2, "mu2");
  long long n = ll_param(r, r.fl.samples, "samples", 50), m = ll_param(r, r.fl.fresh, "fresh", 20);
  long long dmax = ll_param(r, r.fl.dmax, "dmax", 30);
  std::mt19937_64 rng(r.gl.seed);
  auto train = random_elements(re, static_cast<size_t>(n), rng);
  auto fresh = random_elements(re, static_cast<size_t>(m), rng);
  auto rep = main_limit_check(re, train, fresh, mu1, mu2, dmax, r.gl.jobs);
  size_t i = 0;
  for (auto *group : {&rep.training, &rep.fresh})
    for (auto &s : *group) {
      json j{{"sample", group == &rep.training ? "training" : "fresh"}, {"fitted", s.fitted}};
      if (s.fitted) j["nu_M"] = to_string(s.nu);
      j["tail_start"] = s.tail_start ? json(*s.tail_start) : json(nullptr);
      r.rep.emit("trunc.main_limit_check", j, i++);
    }
  r.rep.emit("trunc.main_limit_check", json{{"summary", true}, {"a", rep.a}, {"r", rep.r},
                                            {"tails_vanish", rep.tails_vanish},
                                            {"envelope_holds", rep.envelope_holds},
                                            {"fresh_strict", rep.fresh_strict},
                                            {"fresh_max_ratio", rep.fresh_max_ratio}});
  return rep.tails_vanish && rep.envelope_holds;
}

CountingLattice lattice_param(const Run &r) {
  if (!r.rc.params.contains("lattice")) return {};
  return lattice_from_json(r.rc.params["lattice"], "$.params.lattice");
}

bool cmd_count(Run &r) {
  const RootDatum &d = r.rc.datum;
  OrthogonalSet s = set_param(r);
  validate_orthogonal(s, d);
  IVec star = star_param(r, s);
  auto lat = lattice_param(r);
  long long n = count_points(s, lat, star, d);
  r.rep.emit("latcount.count_points", json{{"count", n}, {"star_class", to_json(star)}, {"lattice_index", to_string(Q(lat.index()))}});
  return true;
}

bool cmd_fit(Run &r) {
  const RootDatum &d = r.rc.datum;
  IVec mu1 = ivec_param(r, r.fl.mu1, "mu1", IVec(d.dim, 0)), mu2 = ivec_param(r, r.fl.mu2, "mu2");
  check_dim(r, mu1, "mu1"), check_dim(r, mu2, "mu2");
  long long lo = ll_param(r, r.fl.lo, "lo", 0), hi = ll_param(r, r.fl.hi, "hi", 12);
  int max_degree = static_cast<int>(ll_param(r, std::nullopt, "max_degree", d.dim));
  auto lat = lattice_param(r);
  auto fit = polynomiality_check(
      [&](long long t) {
        IVec mu = ray_point(mu1, mu2, t);
        return std::make_pair(weyl_orbit_set(d, to_q(mu)), lambda_class(d, mu));
      },
      lat, d, lo, hi, max_degree);
  json j = to_json(fit);
  j["max_degree"] = max_degree;
  r.rep.emit("latcount.polynomiality_check", j);
  return fit.ok;
}

long long finite_prime(const Run &r) {
  if (r.fl.p) return *r.fl.p;
  if (r.gl.prime) return *r.gl.prime;
  return ll_param(r, std::nullopt, "p", 3);
}

bool cmd_fibration(Run &r) {
  auto rep = fibration_check(finite_prime(r));
  json cls = json::array();
  for (auto &c : rep.classes)
    cls.push_back(json{{"c", c.c}, {"members", c.members}, {"normalizer", c.normalizer},
                       {"centralizer", c.centralizer}, {"weyl", c.weyl}, {"u_size", c.u_size},
                       {"fibers_ok", c.fibers_ok}, {"abelian", c.abelian}, {"in_h_perp", c.in_h_perp}});
  r.rep.emit("finfield.fibration_check",
             json{{"p", rep.p}, {"h_order", rep.h_order}, {"h_perp_size", rep.h_perp_size}, {"regular", rep.regular},
                  {"singular", rep.singular}, {"orbits", rep.orbits}, {"classes", cls},
                  {"orbits_refine", rep.orbits_refine}, {"disjoint", rep.disjoint}, {"covers", rep.covers},
                  {"union_size", rep.union_size}, {"ok", rep.ok()}});
  return rep.ok();
}

bool cmd_plancherel(Run &r) {
  long long p = finite_prime(r);
  int k = static_cast<int>(ll_param(r, r.fl.level, "level", 1));
  std::string alg_name = str_param(r, r.fl.algebra, "algebra", "sl2");
  std::string inv_name = str_param(r, r.fl.lie_involution, "lie_involution", "inner_diag");
  if (alg_name != "sl2" && alg_name != "gl2") throw ConfigError("algebra", "expected sl2 or gl2");
  if (inv_name != "inner_diag" && inv_name != "transpose") throw ConfigError("lie_involution", "expected inner_diag or transpose");
  FiniteLieAlgebra alg{Ring(p, k), alg_name == "sl2" ? LieType::sl2 : LieType::gl2,
                       inv_name == "inner_diag" ? LieInvolution::InnerDiag : LieInvolution::Transpose};
  long long n = ll_param(r, r.fl.samples, "samples", 1);
  std::mt19937_64 rng(r.gl.seed);
  std::optional<FunctionTable> given;
  if (!r.fl.function.empty()) given = function_table_from_json(alg, read_json_file(r.fl.function), r.fl.function);
  std::optional<M2> gfix;
  if (!r.fl.matrix.empty()) {
    QMat m = parse_matrix(r.fl.matrix);
    if (m.size() != 2) throw ConfigError("matrix", "expected a 2x2 matrix");
    gfix = alg.ring.red(M2{to_ll(m[0][0]), to_ll(m[0][1]), to_ll(m[1][0]), to_ll(m[1][1])});
  }
  bool ok = true;
  double worst = 0;
  for (long long i = 0; i < n; ++i) {
    FunctionTable f = given ? *given : random_function(alg, rng);
    M2 g = gfix ? *gfix : random_unit_matrix(alg.ring, rng);
    auto rep = plancherel_check(alg, f, g, 64, r.gl.seed + static_cast<uint64_t>(i));
    // complex-valued table for the floating-point path
    std::map<M2, std::complex<double>> fc;
    std::normal_distribution<double> nd;
    for (auto &x : alg.elements()) fc[x] = {nd(rng), nd(rng)};
    double dev = std::max(rep.max_deviation, plancherel_deviation(alg, fc, g));
    worst = std::max(worst, dev);
    bool pass = rep.exact && rep.equivariant && dev <= 1e-9;
    ok = ok && pass;
    r.rep.emit("finfield.plancherel_check",
               json{{"g", json::array({g[0], g[1], g[2], g[3]})}, {"exact", rep.exact},
                    {"equivariant", rep.equivariant}, {"max_deviation", dev}, {"rhs", rep.rhs},
                    {"h_size", rep.h_size}, {"h_perp_size", rep.h_perp_size}},
               static_cast<size_t>(i));
  }
  r.rep.emit("finfield.plancherel_check", json{{"summary", true}, {"p", p}, {"level", k}, {"algebra", alg_name},
                                               {"lie_involution", inv_name}, {"samples", n},
                                               {"max_deviation", worst}, {"ok", ok}});
  return ok;
}

const std::map<std::string, std::pair<std::string, bool (*)(Run &)>> &commands() {
  static const std::map<std::string, std::pair<std::string, bool (*)(Run &)>> m{
      {"rootdata", {"rootdata", cmd_rootdata}},       {"orthoset", {"orthoset", cmd_orthoset}},
      {"cartan", {"padic", cmd_cartan}},              {"hb", {"padic", cmd_hb}},
      {"tau", {"padic", cmd_tau}},                    {"omega", {"trunc", cmd_omega}},
      {"verify-lemma", {"trunc", cmd_verify_lemma}},  {"nu-fit", {"trunc", cmd_nu_fit}},
      {"limit-check", {"trunc", cmd_limit_check}},    {"count", {"latcount", cmd_count}},
      {"fit", {"latcount", cmd_fit}},                 {"fibration", {"finfield", cmd_fibration}},
      {"plancherel", {"finfield", cmd_plancherel}},
  };
  return m;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"rlt: root data, p-adic truncation and finite-level checks"};
  app.require_subcommand(1);
  Globals gl;
  Flags fl;
  std::string group;
  app.add_option("--config", gl.config, "JSON run configuration")->envname("RLT_CONFIG");
  app.add_option("--fixture", gl.fixture, "bundled fixture name (e.g. gl2_ti_p5)")->envname("RLT_FIXTURE");
  app.add_option("--prime", gl.prime, "override the realization prime")->envname("RLT_PRIME");
  app.add_option("--precision", gl.precision, "p-adic working precision")->envname("RLT_PRECISION");
  app.add_option("--seed", gl.seed, "random seed")->envname("RLT_SEED");
  app.add_option("--jobs", gl.jobs, "worker threads for sweeps")->envname("RLT_JOBS")->check(CLI::Range(1u, 1024u));
  app.add_option("--format", gl.format, "report format")->envname("RLT_FORMAT")->check(CLI::IsMember({"jsonl", "csv"}));
  app.add_option("--search-radius", gl.search_radius, "Im tau search radius")->envname("RLT_SEARCH_RADIUS");
  app.add_option("--group", group, "root datum tag (A2, B2, GL3, ...)")->envname("RLT_GROUP");
  app.fallthrough();

  std::string chosen;
  for (auto &[name, entry] : commands()) {
    auto *sub = app.add_subcommand(name);
    sub->callback([&chosen, n = name] { chosen = n; });
    if (name == "cartan" || name == "hb" || name == "tau" || name == "omega" || name == "nu-fit" ||
        name == "plancherel")
      sub->add_option("--matrix", fl.matrix, "matrix as \"a,b;c,d\"");
    if (name == "omega" || name == "orthoset" || name == "count") sub->add_option("--mu", fl.mu, "coweight \"a,b,...\"");
    if (name == "verify-lemma" || name == "nu-fit" || name == "limit-check" || name == "fit") {
      sub->add_option("--mu1", fl.mu1, "ray base point");
      sub->add_option("--mu2", fl.mu2, "ray direction");
    }
    if (name == "tau") sub->add_option("--nu", fl.nu, "test nu in Im tau");
    if (name == "hb") sub->add_option("--chamber", fl.chamber, "Weyl word of the Borel (default: all)");
    if (name == "verify-lemma" || name == "limit-check" || name == "plancherel")
      sub->add_option("--samples", fl.samples, "number of samples");
    if (name == "verify-lemma" || name == "limit-check") sub->add_option("--fresh", fl.fresh, "fresh samples");
    if (name == "verify-lemma") sub->add_option("--dmin", fl.dmin, "first d");
    if (name == "verify-lemma" || name == "limit-check") sub->add_option("--dmax", fl.dmax, "last d");
    if (name == "nu-fit" || name == "fit") {
      sub->add_option("--lo", fl.lo, "first d of the window");
      sub->add_option("--hi", fl.hi, "last d of the window");
    }
    if (name == "fibration" || name == "plancherel") sub->add_option("-p,--p", fl.p, "odd prime");
    if (name == "plancherel") {
      sub->add_option("--level", fl.level, "work modulo p^level");
      sub->add_option("--algebra", fl.algebra, "sl2 or gl2");
      sub->add_option("--involution", fl.lie_involution, "inner_diag or transpose");
      sub->add_option("--function", fl.function, "JSON map \"a,b,c,d\" -> integer");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  auto &[module, fn] = commands().at(chosen);
  Reporter rep(std::cout, gl.format == "csv" ? Format::Csv : Format::Jsonl);
  try {
    json raw = json::object();
    if (!gl.config.empty() && !gl.fixture.empty()) throw Usage("--config and --fixture are exclusive");
    if (!gl.config.empty()) raw = read_json_file(gl.config);
    if (!gl.fixture.empty()) raw = read_json_file(std::string(RLT_FIXTURE_DIR) + "/" + gl.fixture + ".json");
    if (!group.empty()) {
      if (!raw.contains("realization")) raw["realization"] = json::object();
      raw["realization"]["group"] = group;
    }
    Run run{load_config(raw, Overrides{gl.prime, gl.precision, gl.search_radius}), rep, gl, fl};
    rep.emit("cli.run", json{{"command", chosen}, {"seed", gl.seed}, {"config", run.rc.raw}});
    bool ok = fn(run);
    rep.emit("cli.result", json{{"command", chosen}, {"ok", ok}});
    rep.finish();
    return ok ? 0 : 1;
  } catch (const Usage &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError &e) {
    std::cerr << "config error (" << module << "): " << e.what() << "\n";
    return 2;
  } catch (const PrecisionError &e) {
    rep.emit("cli.error", json{{"module", module}, {"kind", "precision"}, {"message", e.what()}});
    rep.finish();
    std::cerr << module << ": precision error: " << e.what() << "\n";
    return 1;
  } catch (const Error &e) {
    rep.emit("cli.error", json{{"module", module}, {"message", e.what()}});
    rep.finish();
    std::cerr << module << ": " << e.what() << "\n";
    return 1;
  }
}
