// Acceptance suite: one PASS/FAIL line per criterion. `acceptance 3 5` runs a subset.

#include "oracles/oracles.hpp"
#include "rlt/config.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <iostream>
#include <sstream>

#ifndef RLT_FIXTURE_DIR
#define RLT_FIXTURE_DIR "fixtures"
#endif

using namespace rlt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Realization fixture(const std::string &name) {
  auto rc = load_config(read_json_file(std::string(RLT_FIXTURE_DIR) + "/" + name + ".json"));
  if (!rc.realization) throw Error("fixture " + name + " has no realization");
  return *rc.realization;
}

InvolutionSpec fixture_theta(const std::string &name) {
  auto rc = load_config(read_json_file(std::string(RLT_FIXTURE_DIR) + "/" + name + ".json"));
  return *rc.theta;
}

std::string fmt(const char *f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// 1. hull_member against brute-force convex hull membership
Outcome hull_oracle() {
  std::mt19937_64 rng(101);
  long long sets = 0, queries = 0, mismatches = 0, fallbacks = 0, inside = 0;
  for (std::string tag : {"A1", "A1xA1", "A2", "B2"}) {
    RootDatum d = datum_from_tag(tag);
    for (int n = 0; n < 250; ++n) {
      auto pts = oracle::random_positive_set(d, rng);
      OrthogonalSet s = borel_set(d, pts);
      auto cert = validate_orthogonal(s, d);
      if (!cert.positive) return {false, tag + ": generator produced a non-positive set"};
      IVec ref = to_ivec(pts[0]);
      IVec star = lambda_class(d, ref);
      Hull hull(d, s, star);
      fallbacks += hull.fallback();
      auto [lo, hi] = vertex_box(pts);
      std::vector<IVec> qs;
      for (auto &p : pts) qs.push_back(to_ivec(p));
      for (int k = 0; k < 40; ++k) {
        IVec x(d.dim);
        for (int i = 0; i < d.dim; ++i) x[i] = lo[i] - 1 + static_cast<long long>(rng() % (hi[i] - lo[i] + 3));
        if (!d.constraints.empty()) {
          long long sum = 0;
          for (int i = 0; i + 1 < d.dim; ++i) sum += x[i];
          x[d.dim - 1] = -sum;
        }
        qs.push_back(x);
      }
      for (auto &x : qs) {
        bool a = hull_member(s, HullQuery{to_q(x), star}, d);
        bool b = oracle::in_hull_star(d, pts, ref, x);
        mismatches += a != b;
        inside += b;
        ++queries;
      }
      ++sets;
    }
  }
  std::ostringstream os;
  os << sets << " sets, " << queries << " queries (" << inside << " inside), " << mismatches << " mismatches, "
     << fallbacks << " LP fallbacks";
  return {mismatches == 0 && sets >= 1000, os.str()};
}

// lattice points of a^- on a grid covering the restricted hull
std::vector<QVec> minus_probes(const RootDatum &d, const InvolutionSpec &t, const std::vector<QVec> &pts) {
  IMat plus = t.theta_star;
  for (int i = 0; i < d.dim; ++i) plus[i][i] += 1;
  IMat rows = plus;
  for (auto &c : d.constraints) rows.push_back(c);
  IMat basis = integer_kernel(rows, static_cast<size_t>(d.dim));
  std::vector<QVec> cols;
  for (auto &b : basis) cols.push_back(to_q(b));
  size_t k = basis.size();
  std::vector<long long> lo(k, 0), hi(k, 0);
  bool first = true;
  for (auto &p : pts) {
    auto c = oracle::solve_columns(cols, project_minus(t, p));
    if (!c) continue;
    for (size_t i = 0; i < k; ++i) {
      long long f = floor_q((*c)[i]), g = ceil_q((*c)[i]);
      lo[i] = first ? f : std::min(lo[i], f);
      hi[i] = first ? g : std::max(hi[i], g);
    }
    first = false;
  }
  std::vector<QVec> out;
  auto point = [&](const std::vector<long long> &coef) {
    QVec x(d.dim, Q(0));
    for (size_t i = 0; i < k; ++i)
      for (int j = 0; j < d.dim; ++j) x[j] += Q(coef[i] * basis[i][j]);
    out.push_back(x);
  };
  if (k == 1) {
    long long mid = (lo[0] + hi[0]) / 2;
    for (long long s = -50; s < 50; ++s) point({mid + s});
  } else if (k == 2) {
    for (long long a = 0; a < 10; ++a)
      for (long long b = 0; b < 10; ++b) {
        long long sa = std::max<long long>(1, (hi[0] - lo[0] + 2 + 8) / 9), sb = std::max<long long>(1, (hi[1] - lo[1] + 2 + 8) / 9);
        point({lo[0] - 1 + a * sa, lo[1] - 1 + b * sb});
      }
  } else {
    throw Error("minus_probes: only dim a^- <= 2 is supported");
  }
  return out;
}

// 2. minus_set is orthogonal at level A- and the restricted hulls agree
Outcome theta_split_refinement() {
  std::mt19937_64 rng(202);
  std::ostringstream os;
  bool pass = true;
  for (std::string name : {"gl2_ti_p5", "example1_sl2", "gl3_reversal"}) {
    auto rc = load_config(read_json_file(std::string(RLT_FIXTURE_DIR) + "/" + name + ".json"));
    const RootDatum &d = rc.datum;
    const InvolutionSpec &t = *rc.theta;
    Fan fan = minus_fan(d, t);
    long long ok_sets = 0, bad_ortho = 0, bad_hull = 0, probes = 0, inside = 0, special = 0, bad_special = 0;
    std::string first_bad;
    for (int n = 0; n < 500; ++n) {
      auto pts = oracle::random_positive_set(d, rng);
      OrthogonalSet s = borel_set(d, pts);
      IVec star = lambda_class(d, to_ivec(pts[0]));
      bool is_special = validate_orthogonal(s, d).special;
      special += is_special;
      try {
        auto cert = validate_orthogonal(minus_set(s, d, t), d, fan);
        if (!cert.positive) ++bad_ortho;
      } catch (const NotOrthogonal &) {
        ++bad_ortho;
        continue;
      }
      auto grid = minus_probes(d, t, pts);
      auto rep = restricted_hull_equal(s, t, d, grid, star);
      probes += static_cast<long long>(rep.probes);
      Hull h(d, s, star);
      for (auto &x : grid) inside += h.contains(x);
      if (!rep.equal) {
        ++bad_hull;
        bad_special += is_special;
        if (first_bad.empty() && rep.counterexample) {
          std::ostringstream ce;
          ce << " first at x = (";
          for (size_t i = 0; i < rep.counterexample->size(); ++i) ce << (i ? "," : "") << (*rep.counterexample)[i];
          ce << ") with x_e = (";
          for (int i = 0; i < d.dim; ++i) ce << (i ? "," : "") << pts[0][i];
          ce << ")";
          first_bad = ce.str();
        }
      } else {
        ++ok_sets;
      }
    }
    os << name << ": " << ok_sets << "/500 ok (" << inside << " of " << probes << " probes inside; special sets "
       << special - bad_special << "/" << special << " ok, non-special " << (500 - special) - (bad_hull - bad_special)
       << "/" << 500 - special << " ok" << first_bad << "); ";
    pass = pass && bad_ortho == 0 && bad_hull == 0;
  }
  return {pass, os.str()};
}

// 3. Cartan and Iwasawa at precision 8
Outcome cartan_iwasawa() {
  std::mt19937_64 rng(303);
  long long total = 0, bad = 0;
  std::string first_bad;
  for (int n : {2, 3})
    for (long long p : {3LL, 5LL}) {
      RootDatum d = datum_from_tag("GL" + std::to_string(n));
      PadicContext c{p, 8};
      std::uniform_int_distribution<long long> ent(-static_cast<long long>(p * p), p * p);
      auto random_k = [&]() {
        QMat k = to_q(identity_matrix<long long>(static_cast<size_t>(n)));
        for (int s = 0; s < 3 * n; ++s) {
          size_t i = rng() % n, j = rng() % n;
          if (i == j) {
            Q u(1 + static_cast<long long>(rng() % (p - 1)));
            for (auto &x : k[i]) x *= u;
            continue;
          }
          long long f = ent(rng);
          for (int col = 0; col < n; ++col) k[i][col] += f * k[j][col];
        }
        return k;
      };
      for (int it = 0; it < 125; ++it, ++total) {
        QMat gq = random_group_element(c, static_cast<size_t>(n), rng, 1);
        PMat g = pm_from_q(c, gq);
        std::string why;
        try {
          auto cd = cartan_decomposition(g);
          if (cd.lambda != oracle::cartan(gq, p)) why = "cartan != determinantal divisors";
          PMat back = cd.k1 * pm_torus(c, cd.lambda) * cd.k2;
          if (why.empty() && !approx_equal(back, g)) why = "k1 p^lambda k2 != g";
          for (auto *k : {&cd.k1, &cd.k2})
            if (why.empty() && !(is_integral(*k) && is_integral(pm_inverse(*k)))) why = "Cartan factor not in K";
          QMat k1 = random_k(), k2 = random_k();
          if (why.empty() && cartan_invariant(pm_from_q(c, matmul(k1, matmul(gq, k2)))) != cd.lambda)
            why = "not bi-K-invariant";
          auto iw = iwasawa_upper(g);
          if (why.empty() && iw.h != oracle::iwasawa_upper(gq, p)) why = "H_B != bottom-row minors";
          if (why.empty() && !approx_equal(iw.b * iw.k, g)) why = "b k != g";
          if (why.empty() && !(is_integral(iw.k) && is_integral(pm_inverse(iw.k)))) why = "Iwasawa factor not in K";
          IVec nu(n);
          for (auto &x : nu) x = static_cast<long long>(rng() % 7) - 3;
          PMat ag = pm_torus(c, nu) * g;
          PMat gk = g * pm_from_q(c, k2);
          for (size_t w = 0; w < d.order() && why.empty(); ++w) {
            IVec h = iwasawa_HB(d, g, static_cast<int>(w));
            if (iwasawa_HB(d, ag, static_cast<int>(w)) != add(h, nu)) why = "H_B not left-A-equivariant";
            else if (iwasawa_HB(d, gk, static_cast<int>(w)) != h) why = "H_B not right-K-invariant";
          }
        } catch (const PrecisionError &e) {
          why = std::string("precision: ") + e.what();
        }
        if (!why.empty()) {
          ++bad;
          if (first_bad.empty()) first_bad = "GL" + std::to_string(n) + " p=" + std::to_string(p) + ": " + why;
        }
      }
    }
  std::ostringstream os;
  os << total << " matrices, " << bad << " failures";
  if (!first_bad.empty()) os << " (first: " << first_bad << ")";
  return {bad == 0 && total >= 500, os.str()};
}

// 4. geometric lemma on GL2(Q5) with transpose-inverse
Outcome geometric_lemma() {
  Realization r = fixture("gl2_ti_p5");
  std::mt19937_64 rng(404);
  std::vector<QMat> train, fresh;
  for (int i = 0; i < 100; ++i) train.push_back(random_group_element(r.ctx, 2, rng));
  for (int i = 0; i < 50; ++i) fresh.push_back(random_group_element(r.ctx, 2, rng));
  auto rep = verify_geometric_lemma(r, train, fresh, {0, 0}, {1, -1}, 0, 40);
  long long worst = 0;
  for (auto *g : {&rep.training, &rep.fresh})
    for (auto &s : *g)
      if (s.d_star) worst = std::max(worst, *s.d_star);
  std::ostringstream os;
  os << "100 + 50 samples, d <= 40, max d* = " << worst << ", C = " << fmt("%.4f", rep.C)
     << ", fresh max ratio " << fmt("%.4f", rep.fresh_max_ratio) << " (" << rep.fresh_strict
     << " strictly above C, all within one grid step: " << (rep.fresh_within ? "yes" : "no") << ")"
     << (rep.all_agree ? "" : ", some sample never agrees");
  return {rep.all_agree && rep.fresh_within, os.str()};
}

// 5. polynomiality of nu_M
Outcome nu_polynomial() {
  Realization r = fixture("gl2_ti_p5");
  QMat e = to_q(identity_matrix<long long>(2));
  auto fit = nu_M_fit(r, e, {0, 0}, {1, -1}, 0, 12);
  // exact polynomial 2d + 1
  bool at_e = fit.ok && fit.poly.coef == QVec{Q(1), Q(2)} && fit.held_out.size() >= 5;
  int dim_amm = static_cast<int>(split_center(r).size());
  std::mt19937_64 rng(505);
  int good = 0;
  for (int i = 0; i < 20; ++i) {
    auto f = nu_M_fit(r, random_group_element(r.ctx, 2, rng), {0, 0}, {1, -1}, 0, 16);
    good += f.ok && f.poly.degree() <= dim_amm && f.held_out.size() >= 5;
  }
  std::ostringstream os;
  os << "g = e: " << (fit.ok ? to_string(fit.poly) : "no fit") << " with " << fit.held_out.size()
     << " held-out values; random g: " << good << "/20 exact with degree <= " << dim_amm;
  return {at_e && good == 20, os.str()};
}

// 6. main limit: vanishing tails and the polynomial envelope
Outcome main_limit() {
  Realization r = fixture("gl2_ti_p5");
  std::mt19937_64 rng(606);
  std::vector<QMat> train, fresh;
  for (int i = 0; i < 50; ++i) train.push_back(random_group_element(r.ctx, 2, rng));
  for (int i = 0; i < 25; ++i) fresh.push_back(random_group_element(r.ctx, 2, rng));
  auto rep = main_limit_check(r, train, fresh, {0, 0}, {1, -1}, 30);
  long long worst = 0;
  for (auto *g : {&rep.training, &rep.fresh})
    for (auto &s : *g)
      if (s.tail_start) worst = std::max(worst, *s.tail_start);
  std::ostringstream os;
  os << "50 + 25 samples, tails vanish from d = " << worst << " at the latest, a = " << fmt("%.4f", rep.a)
     << ", r = " << rep.r << ", fresh max ratio " << fmt("%.4f", rep.fresh_max_ratio) << " (" << rep.fresh_strict
     << " strictly above a, all within one unit: " << (rep.envelope_holds ? "yes" : "no") << ")";
  return {rep.tails_vanish && rep.envelope_holds, os.str()};
}

// 7. finite fibration for p = 3, 5, 7
Outcome fibration() {
  std::ostringstream os;
  bool pass = true;
  for (long long p : {3LL, 5LL, 7LL}) {
    auto rep = fibration_check(p);
    // expected shape: (p-1)^2 regular elements, F^x / F^x4 classes, |W_H| = #mu_4(F_p) / 2
    long long fourth = std::gcd(4LL, p - 1);
    bool shape = rep.regular == (p - 1) * (p - 1) && static_cast<long long>(rep.classes.size()) == fourth;
    for (auto &c : rep.classes) shape = shape && c.weyl == fourth / 2;
    pass = pass && rep.ok() && shape;
    os << "p=" << p << ": " << rep.regular << " regular, " << rep.classes.size() << " classes, |W_H| = "
       << (rep.classes.empty() ? 0 : rep.classes[0].weyl) << (rep.ok() && shape ? "; " : " MISMATCH; ");
  }
  return {pass, os.str()};
}

// 8. modified Plancherel identity
Outcome plancherel() {
  std::mt19937_64 rng(808);
  std::ostringstream os;
  bool pass = true;
  double worst = 0;
  long long runs = 0;
  for (auto [p, k] : std::vector<std::pair<long long, int>>{{3, 1}, {3, 2}, {5, 1}})
    for (auto [type, inv] : std::vector<std::pair<LieType, LieInvolution>>{
             {LieType::sl2, LieInvolution::InnerDiag}, {LieType::gl2, LieInvolution::Transpose}}) {
      FiniteLieAlgebra alg{Ring(p, k), type, inv};
      for (int i = 0; i < 100; ++i, ++runs) {
        auto f = random_function(alg, rng);
        M2 g = random_unit_matrix(alg.ring, rng);
        auto rep = plancherel_check(alg, f, g, 16, rng());
        worst = std::max(worst, rep.max_deviation);
        pass = pass && rep.ok();
      }
    }
  os << runs << " random functions over (3,1), (3,2), (5,1) for sl2 and gl2, max deviation "
     << fmt("%.2e", worst) << ", exact in Z[zeta]";
  return {pass && worst <= 1e-9, os.str()};
}

}  // namespace

int main(int argc, char **argv) {
  struct Criterion {
    int id;
    const char *name;
    std::function<Outcome()> run;
    double budget;  // seconds
  };
  std::vector<Criterion> all{
      {1, "hull oracle equivalence", hull_oracle, 60},
      {2, "theta-split refinement", theta_split_refinement, 0},
      {3, "Cartan/Iwasawa correctness", cartan_iwasawa, 0},
      {4, "geometric lemma agreement", geometric_lemma, 0},
      {5, "polynomiality of nu_M", nu_polynomial, 0},
      {6, "main limit", main_limit, 0},
      {7, "finite Weyl integration fibration", fibration, 10},
      {8, "modified Plancherel identity", plancherel, 60},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  bool all_pass = true;
  for (auto &c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0 && secs > c.budget) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", c.budget) + " s budget";
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail << " ("
              << fmt("%.1f", secs) << " s)" << std::endl;
  }
  return all_pass ? 0 : 1;
}
