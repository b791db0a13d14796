#ifndef UNISTOCH_IO_HPP
#define UNISTOCH_IO_HPP

#include <json.hpp>

#include "unistoch/dilation.hpp"
#include "unistoch/stochastic.hpp"
#include "unistoch/types.hpp"

namespace unistoch::io {

using json = nlohmann::json;

// Scenario- or fixture-level structural problem: malformed literal, missing
// field, unresolved reference. Distinct from ValidationError so the CLI can
// map it to its own exit code.
class ScenarioError : public Error {
public:
  explicit ScenarioError(const std::string& what) : Error(what) {}
};

// Matrix literals are JSON arrays of rows. A complex entry is a [re, im]
// pair; a real entry is a bare number. Complex parsers accept both forms.
cmat parse_cmat(const json& j, const std::string& who);
rmat parse_rmat(const json& j, const std::string& who);
rvec parse_rvec(const json& j, const std::string& who);
cvec parse_cvec(const json& j, const std::string& who);

json dump_cmat(const cmat& m);   // always [re, im] pairs
json dump_rmat(const rmat& m);   // bare numbers
json dump_rvec(const rvec& v);
json dump_cvec(const cvec& v);

// Process files: {dim, anchor_time, initial, samples: [{t, gamma}]}.
Process parse_process(const json& j, double tol = Tolerance{}.alg);
json dump_process(const Process& p);

// Kraus files: {operators: [matrix, ...], t}.
KrausSet parse_kraus(const json& j, double tol = Tolerance{}.alg);
json dump_kraus(const KrausSet& ks);

// Dilated systems: {system_dim, internal_dim, gamma_index, evolution, t,
// internal_pvm?}; the internal PVM defaults to the configuration PVM.
DilatedSystem parse_dilated(const json& j, double tol = Tolerance{}.alg);
json dump_dilated(const DilatedSystem& ds);

json load_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace unistoch::io

#endif
