#pragma once

#include "rlt/finfield.hpp"
#include "rlt/latcount.hpp"
#include "rlt/trunc.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace rlt {

using json = nlohmann::ordered_json;

/// Raised for malformed configuration; `path` locates the offending key.
struct ConfigError : Error {
  std::string path;
  ConfigError(const std::string &path_, const std::string &what) : Error(path_ + ": " + what), path(path_) {}
};

// ---- scalars and matrices

Q q_from_json(const json &j, const std::string &path);
json q_to_json(const Q &x);  // integers as numbers, other rationals as "n/d"
IVec ivec_from_json(const json &j, const std::string &path);
IMat imat_from_json(const json &j, const std::string &path);
QVec qvec_from_json(const json &j, const std::string &path);
QMat qmat_from_json(const json &j, const std::string &path);
json to_json(const IVec &v);
json to_json(const IMat &m);
json to_json(const QVec &v);
json to_json(const QMat &m);

/// "1,2;3,4" or "1/2,0;0,3" -> rows.
QMat parse_matrix(const std::string &s);

// ---- structures

RootDatum datum_from_json(const json &j, const std::string &path);
json to_json(const RootDatum &d);
json to_json(const RootDatum &d, const FacetIndex &f);  // {"chamber": word, "zeroed": [...]}

/// {"chamber-word": point, ...}; the identity chamber is "e".
OrthogonalSet borel_set_from_json(const RootDatum &d, const json &j, const std::string &path);
json to_json(const RootDatum &d, const OrthogonalSet &s);
json to_json(const RootDatum &d, const OrthoCertificate &c);

MatrixInvolution involution_from_json(const json &j, const std::string &path);
ImTauStrategy imtau_from_json(const json &j, const std::string &path);
CountingLattice lattice_from_json(const json &j, const std::string &path);
json to_json(const Count &c);
json to_json(const Polynomial &p);
json to_json(const PolyFit &f);

/// Fully validated run configuration.
struct RunConfig {
  json raw;                       // exactly as read, after overrides
  std::optional<Realization> realization;  // present when a matrix involution is configured
  RootDatum datum;
  std::optional<InvolutionSpec> theta;
  json params;                    // command parameters, validated per command
};

/// Overrides: prime, precision and search radius replace the corresponding realization keys.
struct Overrides {
  std::optional<long long> prime;
  std::optional<int> precision;
  std::optional<int> search_radius;
};

RunConfig load_config(const json &j, const Overrides &o = {});
json read_json_file(const std::string &path);

// ---- finite-level tables

/// {"a,b,c,d": value} with entries reduced mod p^k; absent keys are zero.
FunctionTable function_table_from_json(const FiniteLieAlgebra &alg, const json &j, const std::string &path);

}  // namespace rlt
