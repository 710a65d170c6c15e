#include "rlt/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace rlt {

namespace {

const json &require(const json &j, const char *key, const std::string &path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key, "missing");
  return *it;
}

void check_keys(const json &j, const std::set<std::string> &allowed, const std::string &path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (auto &[k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(path + "." + k, "unknown key");
}

long long ll_from_json(const json &j, const std::string &path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long long>();
}

template <class V, class F>
std::vector<V> list_from_json(const json &j, const std::string &path, F &&elem) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  std::vector<V> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(elem(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void check_rectangular(size_t rows, size_t cols, const std::vector<size_t> &lens, const std::string &path) {
  (void)rows;
  for (auto l : lens)
    if (l != cols) throw ConfigError(path, "rows have different lengths");
}

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

Q q_from_json(const json &j, const std::string &path) {
  if (j.is_number_integer()) return Q(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_q(j.get<std::string>());
    } catch (const std::exception &e) {
      throw ConfigError(path, std::string("bad rational: ") + e.what());
    }
  }
  throw ConfigError(path, "expected an integer or a rational string \"n/d\"");
}

json q_to_json(const Q &x) {
  if (is_integer(x)) {
    Int n = boost::multiprecision::numerator(x);
    if (n >= std::numeric_limits<long long>::min() && n <= std::numeric_limits<long long>::max())
      return static_cast<long long>(n);
  }
  return to_string(x);
}

IVec ivec_from_json(const json &j, const std::string &path) { return list_from_json<long long>(j, path, ll_from_json); }

IMat imat_from_json(const json &j, const std::string &path) {
  IMat m = list_from_json<IVec>(j, path, ivec_from_json);
  std::vector<size_t> lens;
  for (auto &r : m) lens.push_back(r.size());
  if (!m.empty()) check_rectangular(m.size(), m[0].size(), lens, path);
  return m;
}

QVec qvec_from_json(const json &j, const std::string &path) { return list_from_json<Q>(j, path, q_from_json); }

QMat qmat_from_json(const json &j, const std::string &path) {
  QMat m = list_from_json<QVec>(j, path, qvec_from_json);
  std::vector<size_t> lens;
  for (auto &r : m) lens.push_back(r.size());
  if (!m.empty()) check_rectangular(m.size(), m[0].size(), lens, path);
  return m;
}

json to_json(const IVec &v) { return json(v); }
json to_json(const IMat &m) {
  json a = json::array();
  for (auto &r : m) a.push_back(to_json(r));
  return a;
}
json to_json(const QVec &v) {
  json a = json::array();
  for (auto &x : v) a.push_back(q_to_json(x));
  return a;
}
json to_json(const QMat &m) {
  json a = json::array();
  for (auto &r : m) a.push_back(to_json(r));
  return a;
}

QMat parse_matrix(const std::string &s) {
  QMat m;
  std::stringstream rows(s);
  std::string row;
  while (std::getline(rows, row, ';')) {
    QVec r;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t"));
      cell.erase(cell.find_last_not_of(" \t") + 1);
      r.push_back(parse_q(cell));
    }
    m.push_back(r);
  }
  if (m.empty()) throw ConfigError("matrix", "empty matrix");
  for (auto &r : m)
    if (r.size() != m.size()) throw ConfigError("matrix", "matrix must be square");
  return m;
}

RootDatum datum_from_json(const json &j, const std::string &path) {
  if (j.is_string()) {
    try {
      return datum_from_tag(j.get<std::string>());
    } catch (const Error &e) {
      throw ConfigError(path, e.what());
    }
  }
  check_keys(j, {"name", "simple_roots", "simple_coroots", "constraints"}, path);
  std::string name = j.contains("name") ? j["name"].get<std::string>() : "custom";
  IMat roots = imat_from_json(require(j, "simple_roots", path), path + ".simple_roots");
  IMat coroots = imat_from_json(require(j, "simple_coroots", path), path + ".simple_coroots");
  IMat cons = j.contains("constraints") ? imat_from_json(j["constraints"], path + ".constraints") : IMat{};
  try {
    return make_root_datum(name, roots, coroots, cons);
  } catch (const Error &e) {
    throw ConfigError(path, e.what());
  }
}

json to_json(const RootDatum &d) {
  json j;
  j["name"] = d.name;
  j["dim"] = d.dim;
  j["rank"] = d.rank;
  j["simple_roots"] = to_json(d.simple_roots);
  j["simple_coroots"] = to_json(d.simple_coroots);
  j["pairing"] = to_json(d.pairing);
  j["positive_roots"] = to_json(d.roots);
  j["positive_coroots"] = to_json(d.coroots);
  j["weyl_order"] = d.order();
  j["longest_word"] = word_key(d, d.longest);
  j["lambda_invariant_factors"] = to_json(d.lambda_snf.d);
  j["form"] = to_json(d.form);
  return j;
}

json to_json(const RootDatum &d, const FacetIndex &f) {
  json j;
  j["chamber"] = word_key(d, f.chamber);
  j["zeroed"] = f.zeroed;
  return j;
}

OrthogonalSet borel_set_from_json(const RootDatum &d, const json &j, const std::string &path) {
  if (!j.is_object()) throw ConfigError(path, "expected a map from Weyl words to points");
  std::vector<std::optional<QVec>> pts(d.order());
  for (auto &[k, v] : j.items()) {
    int w;
    try {
      w = chamber_from_key(d, k);
    } catch (const Error &e) {
      throw ConfigError(path + "." + k, e.what());
    }
    QVec x = qvec_from_json(v, path + "." + k);
    if (static_cast<int>(x.size()) != d.dim) throw ConfigError(path + "." + k, "point has wrong dimension");
    if (pts[w]) throw ConfigError(path + "." + k, "chamber listed twice");
    pts[w] = x;
  }
  std::vector<QVec> out;
  for (size_t w = 0; w < d.order(); ++w) {
    if (!pts[w]) throw ConfigError(path, "missing chamber " + word_key(d, static_cast<int>(w)));
    out.push_back(*pts[w]);
  }
  return borel_set(d, out);
}

json to_json(const RootDatum &d, const OrthogonalSet &s) {
  json j;
  j["level"] = to_string(s.level);
  json pts = json::array();
  for (size_t k = 0; k < s.points.size(); ++k) {
    json e = to_json(d, s.index[k]);
    e["point"] = to_json(s.points[k]);
    pts.push_back(e);
  }
  j["points"] = pts;
  return j;
}

json to_json(const RootDatum &d, const OrthoCertificate &c) {
  json j;
  j["positive"] = c.positive;
  j["special"] = c.special;
  json cs = json::array();
  for (auto &k : c.coefficients)
    cs.push_back(json{{"a", to_json(d, k.a)}, {"b", to_json(d, k.b)}, {"r", q_to_json(k.r)}});
  j["coefficients"] = cs;
  return j;
}

MatrixInvolution involution_from_json(const json &j, const std::string &path) {
  check_keys(j, {"kind", "param"}, path);
  MatrixInvolution t;
  std::string kind = require(j, "kind", path).get<std::string>();
  if (kind == "inner") t.kind = MatrixInvolution::Kind::Inner;
  else if (kind == "transpose_inverse") t.kind = MatrixInvolution::Kind::TransposeInverse;
  else throw ConfigError(path + ".kind", "expected \"inner\" or \"transpose_inverse\"");
  t.param = qmat_from_json(require(j, "param", path), path + ".param");
  if (t.param.empty() || t.param.size() != t.param[0].size()) throw ConfigError(path + ".param", "must be square");
  if (det(t.param) == 0) throw ConfigError(path + ".param", "must be invertible");
  return t;
}

ImTauStrategy imtau_from_json(const json &j, const std::string &path) {
  check_keys(j, {"strategy", "generators", "cosets", "radius", "congruence"}, path);
  ImTauStrategy s;
  std::string kind = require(j, "strategy", path).get<std::string>();
  if (kind == "declared") {
    s.kind = ImTauStrategy::Kind::Declared;
    s.generators = imat_from_json(require(j, "generators", path), path + ".generators");
    if (j.contains("cosets")) s.cosets = imat_from_json(j["cosets"], path + ".cosets");
  } else if (kind == "search") {
    s.kind = ImTauStrategy::Kind::Search;
  } else {
    throw ConfigError(path + ".strategy", "expected \"declared\" or \"search\"");
  }
  if (j.contains("radius")) s.radius = static_cast<int>(ll_from_json(j["radius"], path + ".radius"));
  if (j.contains("congruence")) s.congruence = static_cast<int>(ll_from_json(j["congruence"], path + ".congruence"));
  if (s.radius < 0) throw ConfigError(path + ".radius", "must be >= 0");
  return s;
}

CountingLattice lattice_from_json(const json &j, const std::string &path) {
  check_keys(j, {"generators", "cosets", "torsion"}, path);
  CountingLattice l;
  if (j.contains("generators")) l.generators = imat_from_json(j["generators"], path + ".generators");
  if (j.contains("cosets")) l.cosets = imat_from_json(j["cosets"], path + ".cosets");
  if (j.contains("torsion")) l.torsion = ivec_from_json(j["torsion"], path + ".torsion");
  for (auto t : l.torsion)
    if (t < 1) throw ConfigError(path + ".torsion", "orders must be positive");
  return l;
}

json to_json(const Count &c) {
  if (c.exact()) return c.lower;
  return json{{"lower", c.lower}, {"upper", c.upper}};
}

json to_json(const Polynomial &p) {
  json j;
  j["text"] = to_string(p);
  j["coefficients"] = to_json(p.coef);
  j["binomial_coordinates"] = to_json(binomial_coordinates(p));
  return j;
}

json to_json(const PolyFit &f) {
  json j;
  j["ok"] = f.ok;
  if (f.ok) j["polynomial"] = to_json(f.poly);
  j["nodes"] = f.nodes;
  j["held_out"] = f.held_out;
  if (f.first_failure) j["first_failure"] = *f.first_failure;
  if (!f.message.empty()) j["message"] = f.message;
  return j;
}

RunConfig load_config(const json &in, const Overrides &o) {
  RunConfig rc;
  rc.raw = in.is_null() ? json::object() : in;
  if (!rc.raw.is_object()) throw ConfigError("$", "config must be an object");
  check_keys(rc.raw, {"realization", "params"}, "$");
  json &real = rc.raw["realization"];
  if (real.is_null()) real = json::object();
  check_keys(real, {"group", "prime", "precision", "involution", "theta_star", "levi", "imtau"}, "$.realization");
  if (o.prime) real["prime"] = *o.prime;
  if (o.precision) real["precision"] = *o.precision;
  if (o.search_radius) {
    if (!real.contains("imtau")) real["imtau"] = json{{"strategy", "search"}};
    real["imtau"]["radius"] = *o.search_radius;
  }
  if (!real.contains("group")) real["group"] = "GL2";
  rc.datum = datum_from_json(real["group"], "$.realization.group");

  long long p = real.contains("prime") ? ll_from_json(real["prime"], "$.realization.prime") : 5;
  int k = real.contains("precision") ? static_cast<int>(ll_from_json(real["precision"], "$.realization.precision")) : 20;
  if (!is_prime(p)) throw ConfigError("$.realization.prime", std::to_string(p) + " is not prime");
  if (k < 1) throw ConfigError("$.realization.precision", "must be >= 1");

  std::optional<MatrixInvolution> mt;
  if (real.contains("involution")) mt = involution_from_json(real["involution"], "$.realization.involution");
  if (real.contains("theta_star")) {
    rc.theta = InvolutionSpec{imat_from_json(real["theta_star"], "$.realization.theta_star")};
  } else if (mt) {
    try {
      rc.theta = InvolutionSpec{induced_theta_star(*mt, static_cast<size_t>(rc.datum.dim), p)};
    } catch (const Error &e) {
      throw ConfigError("$.realization.involution", e.what());
    }
  }
  if (rc.theta) {
    try {
      validate_involution(rc.datum, *rc.theta);
    } catch (const Error &e) {
      throw ConfigError("$.realization.theta_star", e.what());
    }
  }
  if (mt) {
    if (mt->param.size() != static_cast<size_t>(rc.datum.dim))
      throw ConfigError("$.realization.involution.param", "size does not match the group");
    Realization r{rc.datum, *rc.theta, *mt, PadicContext{p, k}, ImTauStrategy{}, {}};
    if (real.contains("levi")) {
      for (auto x : ivec_from_json(real["levi"], "$.realization.levi")) r.levi.push_back(static_cast<int>(x));
    }
    if (real.contains("imtau")) r.imtau = imtau_from_json(real["imtau"], "$.realization.imtau");
    try {
      validate_realization(r);
    } catch (const Error &e) {
      throw ConfigError("$.realization", e.what());
    }
    rc.realization = r;
  }
  rc.params = rc.raw.contains("params") ? rc.raw["params"] : json::object();
  if (!rc.params.is_object()) throw ConfigError("$.params", "expected an object");
  return rc;
}

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError(path, e.what());
  }
}

FunctionTable function_table_from_json(const FiniteLieAlgebra &alg, const json &j, const std::string &path) {
  if (!j.is_object()) throw ConfigError(path, "expected a map \"a,b,c,d\" -> integer");
  std::set<M2> valid;
  for (auto &x : alg.elements()) valid.insert(x);
  FunctionTable f;
  for (auto &[k, v] : j.items()) {
    IVec e;
    std::stringstream ss(k);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        e.push_back(std::stoll(cell));
      } catch (...) {
        throw ConfigError(path + "." + k, "bad entry");
      }
    }
    if (e.size() != 4) throw ConfigError(path + "." + k, "expected four entries a,b,c,d");
    M2 x = alg.ring.red(M2{e[0], e[1], e[2], e[3]});
    if (!valid.count(x)) throw ConfigError(path + "." + k, "not an element of " + to_string(alg.type));
    f[x] = ll_from_json(v, path + "." + k);
  }
  return f;
}

}  // namespace rlt
