#include "unistoch/io.hpp"

#include <fstream>
#include <sstream>

namespace unistoch::io {

namespace {

complex parse_centry(const json& e, const std::string& who) {
  if (e.is_number()) return complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return complex(e[0].get<double>(), e[1].get<double>());
  }
  throw ScenarioError(who + ": entry must be a number or a [re, im] pair, got " + e.dump());
}

double parse_rentry(const json& e, const std::string& who) {
  if (e.is_number()) return e.get<double>();
  throw ScenarioError(who + ": entry must be a real number, got " + e.dump());
}

void check_rows(const json& j, const std::string& who) {
  if (!j.is_array() || j.empty()) {
    throw ScenarioError(who + ": matrix literal must be a non-empty array of rows");
  }
}

}  // namespace

cmat parse_cmat(const json& j, const std::string& who) {
  check_rows(j, who);
  const size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ScenarioError(who + ": rows must be non-empty arrays");
  }
  const size_t cols = j[0].size();
  cmat m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ScenarioError(who + ": ragged matrix literal at row " + std::to_string(i));
    }
    for (size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          parse_centry(j[i][k], who);
    }
  }
  return m;
}

rmat parse_rmat(const json& j, const std::string& who) {
  check_rows(j, who);
  const size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ScenarioError(who + ": rows must be non-empty arrays");
  }
  const size_t cols = j[0].size();
  rmat m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ScenarioError(who + ": ragged matrix literal at row " + std::to_string(i));
    }
    for (size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          parse_rentry(j[i][k], who);
    }
  }
  return m;
}

rvec parse_rvec(const json& j, const std::string& who) {
  if (!j.is_array() || j.empty()) {
    throw ScenarioError(who + ": vector literal must be a non-empty array");
  }
  rvec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parse_rentry(j[i], who);
  }
  return v;
}

cvec parse_cvec(const json& j, const std::string& who) {
  if (!j.is_array() || j.empty()) {
    throw ScenarioError(who + ": vector literal must be a non-empty array");
  }
  cvec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parse_centry(j[i], who);
  }
  return v;
}

json dump_cmat(const cmat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json dump_rmat(const rmat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json dump_rvec(const rvec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json dump_cvec(const cvec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(json::array({v(i).real(), v(i).imag()}));
  }
  return out;
}

Process parse_process(const json& j, double tol) {
  if (!j.is_object()) throw ScenarioError("process: expected an object");
  for (const char* field : {"dim", "initial", "samples"}) {
    if (!j.contains(field)) {
      throw ScenarioError(std::string("process: missing field '") + field + "'");
    }
  }
  const auto dim = j.at("dim").get<Eigen::Index>();
  const double anchor = j.value("anchor_time", 0.0);
  ProbVector initial(parse_rvec(j.at("initial"), "process.initial"), tol);
  std::vector<TransitionMatrix> samples;
  for (const json& s : j.at("samples")) {
    if (!s.is_object() || !s.contains("t") || !s.contains("gamma")) {
      throw ScenarioError("process: each sample needs 't' and 'gamma'");
    }
    samples.emplace_back(parse_rmat(s.at("gamma"), "process.sample.gamma"),
                         s.at("t").get<double>(), anchor, tol);
  }
  return Process(dim, anchor, std::move(initial), std::move(samples), tol);
}

json dump_process(const Process& p) {
  json samples = json::array();
  for (const TransitionMatrix& s : p.samples()) {
    samples.push_back({{"t", s.target_time()}, {"gamma", dump_rmat(s.gamma())}});
  }
  return {{"dim", p.dim()},
          {"anchor_time", p.anchor_time()},
          {"initial", dump_rvec(p.initial().values())},
          {"samples", std::move(samples)}};
}

KrausSet parse_kraus(const json& j, double tol) {
  if (!j.is_object() || !j.contains("operators")) {
    throw ScenarioError("kraus: expected an object with 'operators'");
  }
  std::vector<cmat> ops;
  for (const json& op : j.at("operators")) {
    ops.push_back(parse_cmat(op, "kraus.operator"));
  }
  return KrausSet(std::move(ops), j.value("t", 0.0), tol);
}

json dump_kraus(const KrausSet& ks) {
  json ops = json::array();
  for (const cmat& k : ks.operators()) ops.push_back(dump_cmat(k));
  return {{"operators", std::move(ops)}, {"t", ks.target_time()}};
}

DilatedSystem parse_dilated(const json& j, double tol) {
  if (!j.is_object()) throw ScenarioError("dilated: expected an object");
  for (const char* field : {"system_dim", "internal_dim", "gamma_index", "evolution"}) {
    if (!j.contains(field)) {
      throw ScenarioError(std::string("dilated: missing field '") + field + "'");
    }
  }
  const auto n = j.at("system_dim").get<Eigen::Index>();
  const auto d = j.at("internal_dim").get<Eigen::Index>();
  PVM internal = configuration_pvm(std::max<Eigen::Index>(d, 1));
  if (j.contains("internal_pvm")) {
    std::vector<cmat> projs;
    for (const json& p : j.at("internal_pvm")) {
      projs.push_back(parse_cmat(p, "dilated.internal_pvm"));
    }
    internal = PVM(std::move(projs), tol);
  }
  return DilatedSystem(n, d, std::move(internal), j.at("gamma_index").get<Eigen::Index>(),
                       parse_cmat(j.at("evolution"), "dilated.evolution"), j.value("t", 0.0),
                       tol);
}

json dump_dilated(const DilatedSystem& ds) {
  json pvm = json::array();
  for (const cmat& p : ds.internal_pvm().projectors()) pvm.push_back(dump_cmat(p));
  return {{"system_dim", ds.system_dim()},
          {"internal_dim", ds.internal_dim()},
          {"gamma_index", ds.gamma_index()},
          {"evolution", dump_cmat(ds.evolution())},
          {"internal_pvm", std::move(pvm)},
          {"t", ds.target_time()}};
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open file: " + path);
  // Exceptions from json::parse carry byte/line positions; let them surface.
  return json::parse(in);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ScenarioError("cannot open file for writing: " + path);
  out << contents;
}

}  // namespace unistoch::io
