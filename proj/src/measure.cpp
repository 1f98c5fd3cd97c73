#include "wehrl/measure.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "measure_kernels.hpp"

namespace wehrl {

namespace {

constexpr double kMaxTensorNodes = 2e7;
constexpr double kMaxCachedEntries = 4e6;

std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  std::uint64_t x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("scheme spec: cannot parse " + what + " from '" + s + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

Tensor coarser(const Tensor& t) {
  return {std::max(1, t.radial - std::max(1, t.radial / 4)),
          std::max(1, t.angular - std::max(1, t.angular / 4))};
}

void check_compatible(const PolynomialState& state, const Params& params) {
  if (!(state.params() == params))
    throw std::invalid_argument("entropy_G: state parameters do not match the quadrature rule");
}

Eigen::VectorXd to_eigen(const std::vector<double>& w) {
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

}  // namespace

QuadratureScheme parse_scheme(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts[0] == "mc") {
    if (parts.size() != 3) throw std::invalid_argument("scheme spec: expected mc:<n>:<seed>");
    MonteCarlo mc{parse_uint(parts[1], "sample count"), parse_uint(parts[2], "seed")};
    if (mc.n_samples < 1) throw std::invalid_argument("scheme spec: need at least one sample");
    return mc;
  }
  if (parts[0] == "tensor") {
    if (parts.size() != 3)
      throw std::invalid_argument("scheme spec: expected tensor:<radial>:<angular>");
    Tensor t{static_cast<int>(parse_uint(parts[1], "radial order")),
             static_cast<int>(parse_uint(parts[2], "angular order"))};
    if (t.radial < 1 || t.angular < 1)
      throw std::invalid_argument("scheme spec: tensor orders must be >= 1");
    return t;
  }
  throw std::invalid_argument("unknown scheme spec '" + spec + "'");
}

std::string to_string(const QuadratureScheme& scheme) {
  if (const auto* mc = std::get_if<MonteCarlo>(&scheme))
    return "mc:" + std::to_string(mc->n_samples) + ":" + std::to_string(mc->seed);
  const auto& t = std::get<Tensor>(scheme);
  return "tensor:" + std::to_string(t.radial) + ":" + std::to_string(t.angular);
}

Tensor default_tensor(const Params& params) {
  return {2 * params.M() + 6, 4 * params.M() + 1};
}

QuadratureScheme default_scheme(const Params& params, const ConvexPhi& phi, std::uint64_t seed) {
  if (params.N() <= 2 && !phi.has_atoms()) return default_tensor(params);
  return MonteCarlo{200000, seed};
}

std::vector<Eigen::VectorXcd> sample_nu_homogeneous(const Params& params, std::uint64_t seed,
                                                    std::size_t n) {
  if (n < 1) throw std::invalid_argument("sample_nu: n must be >= 1");
  std::vector<Eigen::VectorXcd> out;
  out.reserve(n);
  std::vector<Eigen::VectorXcd> block;
  for (std::size_t b = 0; b * kSampleBlock < n; ++b) {
    kernels::generate_block(params, seed, b, std::min(kSampleBlock, n - b * kSampleBlock), block);
    for (auto& v : block) out.push_back(std::move(v));
  }
  return out;
}

std::vector<Eigen::VectorXcd> sample_nu(const Params& params, std::uint64_t seed, std::size_t n) {
  auto pts = sample_nu_homogeneous(params, seed, n);
  std::vector<Eigen::VectorXcd> out;
  out.reserve(n);
  for (const auto& v : pts) out.push_back(v.tail(params.N()) / v[0].real());
  return out;
}

double mu0(const Params& params, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("mu0: t must lie in [0, 1]");
  return std::pow(1.0 - std::pow(t, 1.0 / params.M()), params.N());
}

NodeSet tensor_nodes(const Params& params, const Tensor& rule) {
  const int N = params.N();
  if (rule.radial < 1 || rule.angular < 1)
    throw std::invalid_argument("tensor_nodes: orders must be >= 1");
  if (std::pow(static_cast<double>(rule.radial) * rule.angular, N) > kMaxTensorNodes)
    throw std::invalid_argument("tensor_nodes: rule too large for N = " + std::to_string(N) +
                                "; use Monte Carlo");
  const auto& gl = gauss_legendre_unit(rule.radial);

  // Radial part: t ~ N t^{N-1}; simplex part: stick-breaking x_k ~ (N-k)(1-x)^{N-k-1}.
  // Each entry is (sqrt of the squared moduli of v, weight).
  struct Modulus {
    std::vector<double> abs_v;
    double weight;
  };
  std::vector<Modulus> moduli;
  {
    std::vector<int> idx(N, 0);
    for (;;) {
      const double t = gl.nodes[idx[0]];
      double w = gl.weights[idx[0]] * N * std::pow(t, N - 1);
      std::vector<double> abs_v(N + 1);
      abs_v[0] = std::sqrt(1.0 - t);
      double remaining = t;
      for (int k = 1; k < N; ++k) {
        const double x = gl.nodes[idx[k]];
        w *= gl.weights[idx[k]] * (N - k) * std::pow(1.0 - x, N - k - 1);
        abs_v[k] = std::sqrt(remaining * x);
        remaining *= 1.0 - x;
      }
      abs_v[N] = std::sqrt(remaining);
      moduli.push_back({std::move(abs_v), w});
      int k = 0;
      while (k < N && ++idx[k] == rule.radial) idx[k++] = 0;
      if (k == N) break;
    }
  }

  NodeSet nodes;
  const double phase_w = std::pow(1.0 / rule.angular, N);
  std::vector<cplx> roots(rule.angular);
  for (int j = 0; j < rule.angular; ++j)
    roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / rule.angular);
  for (const auto& m : moduli) {
    std::vector<int> idx(N, 0);
    for (;;) {
      Eigen::VectorXcd v(N + 1);
      v[0] = m.abs_v[0];
      for (int k = 0; k < N; ++k) v[k + 1] = m.abs_v[k + 1] * roots[idx[k]];
      nodes.points.push_back(std::move(v));
      nodes.weights.push_back(m.weight * phase_w);
      int k = 0;
      while (k < N && ++idx[k] == rule.angular) idx[k++] = 0;
      if (k == N) break;
    }
  }
  return nodes;
}

EntropyEvaluator::EntropyEvaluator(const Params& params, QuadratureScheme scheme)
    : params_(params), scheme_(std::move(scheme)) {
  if (const auto* t = std::get_if<Tensor>(&scheme_)) {
    const auto fine = tensor_nodes(params_, *t);
    fine_ = kernels::monomial_matrix(params_, fine.points);
    fine_w_ = to_eigen(fine.weights);
    const auto coarse = tensor_nodes(params_, coarser(*t));
    coarse_ = kernels::monomial_matrix(params_, coarse.points);
    coarse_w_ = to_eigen(coarse.weights);
    return;
  }
  const auto& mc = std::get<MonteCarlo>(scheme_);
  if (mc.n_samples < 1) throw std::invalid_argument("EntropyEvaluator: n_samples must be >= 1");
  if (static_cast<double>(mc.n_samples) * params_.d() <= kMaxCachedEntries) {
    fine_ = kernels::monomial_matrix(params_, sample_nu_homogeneous(params_, mc.seed, mc.n_samples));
    cached_mc_ = true;
  }
}

Estimate EntropyEvaluator::operator()(const PolynomialState& state, const ConvexPhi& phi) const {
  check_compatible(state, params_);
  if (std::holds_alternative<Tensor>(scheme_)) {
    const double fine = kernels::weighted_phi_sum_omp(fine_, fine_w_, state.coeffs(), phi);
    const double coarse = kernels::weighted_phi_sum_omp(coarse_, coarse_w_, state.coeffs(), phi);
    return {fine, std::abs(fine - coarse) + 4e-16 * std::abs(fine)};
  }
  const auto& mc = std::get<MonteCarlo>(scheme_);
  const auto s = cached_mc_ ? kernels::phi_moments_omp(fine_, state.coeffs(), phi)
                            : kernels::mc_stream_omp(params_, mc.seed, mc.n_samples, state, phi);
  return {s.mean, std::sqrt(s.variance() / s.count)};
}

Estimate entropy_G(const PolynomialState& state, const ConvexPhi& phi,
                   const QuadratureScheme& scheme) {
  if (const auto* mc = std::get_if<MonteCarlo>(&scheme)) {
    const auto s = kernels::mc_stream_omp(state.params(), mc->seed, mc->n_samples, state, phi);
    return {s.mean, std::sqrt(s.variance() / s.count)};
  }
  return EntropyEvaluator(state.params(), scheme)(state, phi);
}

Estimate entropy_G_reference(const PolynomialState& state, const ConvexPhi& phi,
                             const QuadratureScheme& scheme) {
  if (const auto* mc = std::get_if<MonteCarlo>(&scheme)) {
    const auto s = kernels::mc_stream_serial(state.params(), mc->seed, mc->n_samples, state, phi);
    return {s.mean, std::sqrt(s.variance() / s.count)};
  }
  const auto& t = std::get<Tensor>(scheme);
  const auto fine = tensor_nodes(state.params(), t);
  const auto coarse = tensor_nodes(state.params(), coarser(t));
  const double f = kernels::weighted_phi_sum_serial(fine.points, fine.weights, state, phi);
  const double c = kernels::weighted_phi_sum_serial(coarse.points, coarse.weights, state, phi);
  return {f, std::abs(f - c) + 4e-16 * std::abs(f)};
}

Estimate sup_G(const Params& params, const ConvexPhi& phi) {
  const int N = params.N(), M = params.M();
  std::vector<double> breaks;
  for (double p : phi.breakpoints())
    if (p > 0.0 && p < 1.0) breaks.push_back(std::pow(p, 1.0 / M));
  return integrate_gk_split(
      [&](double tau) { return phi(std::pow(tau, M)) * N * std::pow(1.0 - tau, N - 1); }, 0.0,
      1.0, breaks, 1e-12);
}

}  // namespace wehrl
