#include "wehrl/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <locale>
#include <sstream>

namespace wehrl {

namespace {

json complex_vector(const Eigen::VectorXcd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v[i].real(), v[i].imag()});
  return a;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

PolynomialState state_from_json(const json& j, std::ostream* warn) {
  try {
    if (!j.is_object()) throw FormatError("state file: expected a JSON object");
    const int N = j.at("N").get<int>();
    const int M = j.at("M").get<int>();
    const Params params(N, M);
    const auto& c = j.at("coeffs");
    if (!c.is_array() || c.size() != params.d())
      throw FormatError("state file: coeffs must hold d = " + std::to_string(params.d()) + " entries");
    Eigen::VectorXcd raw(params.d());
    for (std::size_t i = 0; i < params.d(); ++i) {
      const auto& e = c[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw FormatError("state file: coefficient " + std::to_string(i) + " is not [re, im]");
      raw[i] = cplx(e[0].get<double>(), e[1].get<double>());
    }
    const double norm = raw.norm();
    if (!std::isfinite(norm) || norm == 0.0) throw FormatError("state file: zero or non-finite vector");
    if (warn && std::abs(norm - 1.0) > 1e-6)
      *warn << "warning: state norm is " << fmt(norm) << "; normalising\n";
    // Unit to rounding: keep the bits, so written files reload exactly.
    if (std::abs(norm - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon())
      return PolynomialState(params, raw);
    return from_coefficients(params, raw);
  } catch (const json::exception& e) {
    throw FormatError(std::string("state file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("state file: ") + e.what());
  }
}

json state_to_json(const PolynomialState& state) {
  json j;
  j["N"] = state.params().N();
  j["M"] = state.params().M();
  j["coeffs"] = complex_vector(state.coeffs());
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("error writing " + path);
}

PolynomialState read_state_file(const std::string& path, std::ostream* warn) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  return state_from_json(j, warn);
}

void write_state_file(const std::string& path, const PolynomialState& state) {
  write_text_file(path, dump(state_to_json(state)));
}

json to_json(const Estimate& e) { return {{"value", e.value}, {"error", e.error}}; }

json to_json(const DistanceResult& d) {
  return {{"T", d.T},
          {"D_euclid", d.D_euclid},
          {"dist_geodesic", d.dist_geodesic},
          {"argmax_v", complex_vector(d.argmax_v)},
          {"n_starts_used", d.n_starts_used},
          {"converged", d.converged}};
}

json to_json(const HessianCoefficients& h) {
  json by = json::object(), err = json::object();
  for (int K = 1; K < static_cast<int>(h.by_degree.size()); ++K) {
    by[std::to_string(K)] = h.by_degree[K];
    err[std::to_string(K)] = h.error[K];
  }
  return {{"N", h.params.N()}, {"M", h.params.M()}, {"phi", h.phi_id}, {"by_degree", by}, {"error", err}};
}

json to_json(const FarFieldCheck& c) {
  return {{"deficit", c.deficit.value},
          {"deficit_stderr", c.deficit.error},
          {"T", c.T},
          {"bound", c.bound},
          {"pass", c.pass}};
}

json to_json(const ScanReport& r) {
  json recs = json::array();
  for (const auto& s : r.records) {
    json j = {{"seed_index", s.seed_index},
              {"t", s.t},
              {"deficit", s.deficit},
              {"deficit_stderr", s.deficit_stderr},
              {"T", s.T},
              {"D_euclid", s.D_euclid},
              {"dist_geodesic", s.dist_geodesic},
              {"ratio", s.ratio ? json(*s.ratio) : json(nullptr)}};
    if (!s.error.empty()) j["error"] = s.error;
    recs.push_back(std::move(j));
  }
  json agg = {{"min_ratio", r.min_ratio ? json(*r.min_ratio) : json(nullptr)},
              {"argmin", r.argmin ? json(*r.argmin) : json(nullptr)},
              {"count", r.count},
              {"failures", r.failures},
              {"samples", r.records.size()}};
  return {{"N", r.params.N()},
          {"M", r.params.M()},
          {"phi", r.phi_id},
          {"sampler", r.sampler},
          {"scheme", r.scheme},
          {"seed", r.seed},
          {"starts", r.n_starts},
          {"aggregate", agg},
          {"records", recs}};
}

std::string scan_report_csv(const ScanReport& r) {
  std::ostringstream os;
  os << "seed_index,t,deficit,deficit_stderr,T,D_euclid,dist_geodesic,ratio,error\n";
  for (const auto& s : r.records) {
    os << s.seed_index << ',' << fmt(s.t) << ',' << fmt(s.deficit) << ',' << fmt(s.deficit_stderr) << ','
       << fmt(s.T) << ',' << fmt(s.D_euclid) << ',' << fmt(s.dist_geodesic) << ','
       << (s.ratio ? fmt(*s.ratio) : std::string()) << ',';
    if (!s.error.empty()) {
      std::string e = s.error;
      for (auto& ch : e)
        if (ch == '"') ch = '\'';
      os << '"' << e << '"';
    }
    os << '\n';
  }
  return os.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace wehrl
