// wehrl: command-line front end.
//
// Exit codes: 0 ok, 1 invariant failure, 2 usage, 3 I/O.

#include <omp.h>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wehrl/combinatorics.hpp"
#include "wehrl/geometry.hpp"
#include "wehrl/hessian.hpp"
#include "wehrl/io.hpp"
#include "wehrl/measure.hpp"
#include "wehrl/phi.hpp"
#include "wehrl/stability.hpp"
#include "wehrl/state_space.hpp"
#include "wehrl/verify.hpp"

using namespace wehrl;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int N = 1;
  int M = 2;
  std::string phi = "pow:2";
  std::string scheme;  // empty: default for (N, M, phi)
  std::uint64_t seed = 0;
  int starts = 32;
  std::size_t samples = 100;
  std::string out = "-";
  std::string format = "json";
  int threads = 0;
  std::string state;
  std::string level = "quick";
  std::string sampler = "uniform";
  std::optional<std::size_t> basis;
  std::optional<std::uint64_t> random;
  std::vector<double> coherent;
};

void emit(const Config& c, const std::string& text) {
  if (c.out == "-")
    std::cout << text;
  else
    write_text_file(c.out, text);
}

json config_echo(const std::string& command, const Config& c, const json& extra) {
  json j = {{"command", command}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

json envelope(const std::string& command, const Config& c, const json& extra, const json& result) {
  json j = {{"version", kVersion}, {"config", config_echo(command, c, extra)}};
  for (auto it = result.begin(); it != result.end(); ++it) j[it.key()] = it.value();
  return j;
}

Params make_params(const Config& c) {
  try {
    return Params(c.N, c.M);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

ConvexPhi make_phi(const Config& c) {
  try {
    return builtin_phi(c.phi);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--phi: ") + e.what());
  }
}

QuadratureScheme make_scheme(const Config& c, const Params& P, const ConvexPhi& phi) {
  if (c.scheme.empty()) return default_scheme(P, phi, c.seed);
  try {
    return parse_scheme(c.scheme);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--scheme: ") + e.what());
  }
}

PolynomialState load_state(const Config& c) {
  if (c.state.empty()) throw UsageError("--state is required");
  return read_state_file(c.state, &std::cerr);
}

void require_json(const Config& c) {
  if (c.format != "json") throw UsageError("this command only writes json");
}

int cmd_info(const Config& c) {
  const Params P = make_params(c);
  json order = json::array();
  for (const auto& a : P.index_order()) order.push_back(a.components);
  json A = json::object(), ct = json::object();
  for (int K = 0; K <= P.M(); ++K) {
    A[std::to_string(K)] = A_const(P.M(), P.N(), K);
    ct[std::to_string(K)] = c_tilde_sq(K, P.M(), P.N());
  }
  if (c.format == "text") {
    std::ostringstream os;
    os.precision(17);
    os << "N = " << P.N() << ", M = " << P.M() << ", d = " << P.d() << "\n";
    os << "K  A_{M,N,K}  c~^2\n";
    for (int K = 0; K <= P.M(); ++K)
      os << K << "  " << A_const(P.M(), P.N(), K) << "  " << c_tilde_sq(K, P.M(), P.N()) << "\n";
    os << "index order:";
    for (const auto& a : P.index_order()) {
      os << " (";
      for (int i = 0; i < a.size(); ++i) os << (i ? "," : "") << a.components[i];
      os << ")";
    }
    os << "\n";
    emit(c, os.str());
    return kOk;
  }
  require_json(c);
  emit(c, dump(envelope("info", c, {{"N", P.N()}, {"M", P.M()}},
                        {{"d", P.d()}, {"index_order", order}, {"A", A}, {"c_tilde_sq", ct}})));
  return kOk;
}

int cmd_verify(const Config& c) {
  require_json(c);
  const Params P = make_params(c);
  VerifyLevel level;
  try {
    level = parse_level(c.level);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const auto rep = run_verify(P, level, c.seed);
  emit(c, dump(envelope("verify", c, {{"N", P.N()}, {"M", P.M()}, {"level", c.level}, {"seed", c.seed}},
                        to_json(rep))));
  return rep.all_pass() ? kOk : kFail;
}

int cmd_state(const Config& c) {
  require_json(c);
  const Params P = make_params(c);
  const int chosen = (c.basis ? 1 : 0) + (c.random ? 1 : 0) + (c.coherent.empty() ? 0 : 1);
  if (chosen != 1) throw UsageError("state: give exactly one of --basis, --random, --coherent");
  std::optional<PolynomialState> X;
  if (c.basis) {
    if (*c.basis >= P.d()) throw UsageError("--basis out of range");
    X = basis_state(P, *c.basis);
  } else if (c.random) {
    X = random_state(P, *c.random);
  } else {
    if (c.coherent.size() != static_cast<std::size_t>(2 * P.N()))
      throw UsageError("--coherent needs 2N numbers (re, im per coordinate)");
    Eigen::VectorXcd w(P.N());
    for (int k = 0; k < P.N(); ++k) w[k] = cplx(c.coherent[2 * k], c.coherent[2 * k + 1]);
    X = coherent_state(P, w);
  }
  emit(c, dump(state_to_json(*X)));
  return kOk;
}

int cmd_entropy(const Config& c) {
  require_json(c);
  const auto X = load_state(c);
  const auto phi = make_phi(c);
  const auto scheme = make_scheme(c, X.params(), phi);
  const auto g = entropy_G(X, phi, scheme);
  const auto sup = sup_G(X.params(), phi);
  emit(c, dump(envelope("entropy", c,
                        {{"state", c.state}, {"phi", c.phi}, {"scheme", to_string(scheme)}},
                        {{"N", X.params().N()},
                         {"M", X.params().M()},
                         {"value", g.value},
                         {"error", g.error},
                         {"sup_G", sup.value},
                         {"deficit", sup.value - g.value},
                         {"deficit_error", sup.error + g.error}})));
  return kOk;
}

int cmd_distance(const Config& c) {
  require_json(c);
  const auto X = load_state(c);
  if (c.starts < 1) throw UsageError("--starts must be >= 1");
  const auto d = husimi_sup(X, {c.starts, c.seed});
  emit(c, dump(envelope("distance", c, {{"state", c.state}, {"starts", c.starts}, {"seed", c.seed}},
                        to_json(d))));
  return kOk;
}

int cmd_hessian(const Config& c) {
  require_json(c);
  const Params P = make_params(c);
  const auto phi = make_phi(c);
  const auto b = hessian_coefficients(P, phi);
  json r = to_json(b);
  r["phi"] = c.phi;
  emit(c, dump(envelope("hessian", c, {{"N", P.N()}, {"M", P.M()}, {"phi", c.phi}}, r)));
  return kOk;
}

int cmd_scan(const Config& c) {
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
  const Params P = make_params(c);
  const auto phi = make_phi(c);
  Sampler sampler;
  try {
    sampler = parse_sampler(c.sampler);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--sampler: ") + e.what());
  }
  if (c.samples < 1) throw UsageError("--samples must be >= 1");
  if (c.starts < 1) throw UsageError("--starts must be >= 1");
  ScanOptions o;
  o.n_samples = c.samples;
  o.seed = c.seed;
  o.n_starts = c.starts;
  o.scheme = make_scheme(c, P, phi);
  const auto rep = stability_scan(P, phi, sampler, o);
  if (c.format == "csv") {
    emit(c, scan_report_csv(rep));
  } else {
    emit(c, dump(envelope("scan", c,
                          {{"N", P.N()},
                           {"M", P.M()},
                           {"phi", c.phi},
                           {"scheme", to_string(*o.scheme)},
                           {"sampler", c.sampler},
                           {"samples", c.samples},
                           {"seed", c.seed},
                           {"starts", c.starts}},
                          to_json(rep))));
  }
  return rep.min_ratio && *rep.min_ratio <= 0.0 ? kFail : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wehrl-type entropy of symmetric coherent states: numerical checks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Config c;

  auto add_params = [&](CLI::App* s) {
    s->add_option("--N", c.N, "Number of variables")->required();
    s->add_option("--M", c.M, "Polynomial degree")->required();
  };
  auto add_common = [&](CLI::App* s) {
    s->add_option("--out", c.out, "Output file, - for stdout");
    s->add_option("--format", c.format, "json (or text / csv where supported)");
    s->add_option("--threads", c.threads, "OpenMP threads, 0 = all cores");
    s->add_option("--seed", c.seed, "Base seed");
  };

  auto* info = app.add_subcommand("info", "Dimension, index order and constant tables");
  add_params(info);
  add_common(info);

  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  add_params(verify);
  add_common(verify);
  verify->add_option("--level", c.level, "quick or full");

  auto* state = app.add_subcommand("state", "Write a state file");
  add_params(state);
  add_common(state);
  state->add_option("--basis", c.basis, "Basis state at this position");
  state->add_option("--random", c.random, "Uniform random state with this seed");
  state->add_option("--coherent", c.coherent, "Coherent state k_w, w given as re,im pairs")->delimiter(',');

  auto* entropy = app.add_subcommand("entropy", "G(X) and the deficit for a state file");
  add_common(entropy);
  entropy->add_option("--state", c.state, "State file")->required();
  entropy->add_option("--phi", c.phi, "Phi spec");
  entropy->add_option("--scheme", c.scheme, "mc:<n>:<seed> or tensor:<radial>:<angular>");

  auto* distance = app.add_subcommand("distance", "Distance of a state file to the coherent states");
  add_common(distance);
  distance->add_option("--state", c.state, "State file")->required();
  distance->add_option("--starts", c.starts, "Random starts");

  auto* hessian = app.add_subcommand("hessian", "Second-differential coefficients by degree");
  add_params(hessian);
  add_common(hessian);
  hessian->add_option("--phi", c.phi, "Phi spec");

  auto* scan = app.add_subcommand("scan", "Deficit over squared distance on sampled states");
  add_params(scan);
  add_common(scan);
  scan->add_option("--phi", c.phi, "Phi spec");
  scan->add_option("--scheme", c.scheme, "mc:<n>:<seed> or tensor:<radial>:<angular>");
  scan->add_option("--sampler", c.sampler, "uniform, coherent, near_V:<t_max>[:X0]");
  scan->add_option("--samples", c.samples, "Number of samples");
  scan->add_option("--starts", c.starts, "Random starts for the distance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (c.threads < 0) {
    std::cerr << "error: --threads must be >= 0\n";
    return kUsage;
  }
  omp_set_num_threads(c.threads > 0 ? c.threads : omp_get_num_procs());

  try {
    if (*info) return cmd_info(c);
    if (*verify) return cmd_verify(c);
    if (*state) return cmd_state(c);
    if (*entropy) return cmd_entropy(c);
    if (*distance) return cmd_distance(c);
    if (*hessian) return cmd_hessian(c);
    if (*scan) return cmd_scan(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
