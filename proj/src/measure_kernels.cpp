#include "measure_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wehrl/measure.hpp"
#include "wehrl/quadrature.hpp"

namespace wehrl::kernels {

namespace {

inline double clamp_unit(double u) { return std::min(u, 1.0); }

MomentStats reduce_pairwise(const std::vector<MomentStats>& parts, std::size_t lo,
                            std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return MomentStats::combine(reduce_pairwise(parts, lo, mid), reduce_pairwise(parts, mid, hi));
}

MomentStats reduce_pairwise(const std::vector<MomentStats>& parts) {
  if (parts.empty()) return {};
  return reduce_pairwise(parts, 0, parts.size());
}

}  // namespace

void MomentStats::push(double x) {
  count += 1.0;
  const double delta = x - mean;
  mean += delta / count;
  m2 += delta * (x - mean);
}

MomentStats MomentStats::combine(const MomentStats& a, const MomentStats& b) {
  if (a.count == 0.0) return b;
  if (b.count == 0.0) return a;
  MomentStats r;
  r.count = a.count + b.count;
  const double delta = b.mean - a.mean;
  r.mean = a.mean + delta * (b.count / r.count);
  r.m2 = a.m2 + b.m2 + delta * delta * (a.count * b.count / r.count);
  return r;
}

void generate_block(const Params& params, std::uint64_t seed, std::size_t block,
                    std::size_t count, std::vector<Eigen::VectorXcd>& out) {
  const int N = params.N();
  std::mt19937_64 rng(derive_seed(seed, block));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> gauss;
  out.resize(count);
  Eigen::VectorXcd omega(N);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = std::pow(uniform(rng), 1.0 / N);
    double norm2 = 0.0;
    do {
      for (int k = 0; k < N; ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        omega[k] = cplx(re, im);
      }
      norm2 = omega.squaredNorm();
    } while (norm2 == 0.0);
    Eigen::VectorXcd v(N + 1);
    v[0] = std::sqrt(1.0 - t);
    v.tail(N) = omega * std::sqrt(t / norm2);
    out[i] = std::move(v);
  }
}

Eigen::MatrixXcd monomial_matrix(const Params& params, const std::vector<Eigen::VectorXcd>& points) {
  const int N = params.N(), M = params.M();
  const Eigen::Index P = static_cast<Eigen::Index>(points.size());
  const Eigen::Index d = static_cast<Eigen::Index>(params.d());
  std::vector<double> c(d);
  for (Eigen::Index i = 0; i < d; ++i) c[i] = c_alpha(params.index(i), M);
  Eigen::MatrixXcd B(P, d);
#pragma omp parallel for schedule(static)
  for (Eigen::Index p = 0; p < P; ++p) {
    const auto& v = points[p];
    std::vector<cplx> pw((N + 1) * (M + 1));
    for (int k = 0; k <= N; ++k) {
      pw[k * (M + 1)] = 1.0;
      for (int e = 1; e <= M; ++e) pw[k * (M + 1) + e] = pw[k * (M + 1) + e - 1] * v[k];
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto& a = params.index(i).components;
      cplx m = c[i] * pw[M - params.degree(i)];
      for (int k = 0; k < N; ++k) m *= pw[(k + 1) * (M + 1) + a[k]];
      B(p, i) = m;
    }
  }
  return B;
}

double weighted_phi_sum_omp(const Eigen::MatrixXcd& basis, const Eigen::VectorXd& weights,
                            const Eigen::VectorXcd& coeffs, const ConvexPhi& phi) {
  const Eigen::Index P = basis.rows();
  const Eigen::Index chunks = (P + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index lo = c * kChunk, len = std::min(kChunk, P - lo);
    const Eigen::VectorXcd F = basis.middleRows(lo, len) * coeffs;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < len; ++k) acc += weights[lo + k] * phi(clamp_unit(std::norm(F[k])));
    partial[c] = acc;
  }
  return pairwise_sum(partial);
}

MomentStats phi_moments_omp(const Eigen::MatrixXcd& basis, const Eigen::VectorXcd& coeffs,
                            const ConvexPhi& phi) {
  const Eigen::Index P = basis.rows();
  // Same blocking as the streamed sampler, so cached and streamed runs agree.
  constexpr Eigen::Index kBlock = static_cast<Eigen::Index>(kSampleBlock);
  const Eigen::Index chunks = (P + kBlock - 1) / kBlock;
  std::vector<MomentStats> partial(chunks);
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index lo = c * kBlock, len = std::min(kBlock, P - lo);
    const Eigen::VectorXcd F = basis.middleRows(lo, len) * coeffs;
    MomentStats s;
    for (Eigen::Index k = 0; k < len; ++k) s.push(phi(clamp_unit(std::norm(F[k]))));
    partial[c] = s;
  }
  return reduce_pairwise(partial);
}

MomentStats mc_stream_omp(const Params& params, std::uint64_t seed, std::size_t n,
                          const PolynomialState& state, const ConvexPhi& phi) {
  const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
  std::vector<MomentStats> partial(blocks);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t b = 0; b < blocks; ++b) {
    std::vector<Eigen::VectorXcd> pts;
    generate_block(params, seed, b, std::min(kSampleBlock, n - b * kSampleBlock), pts);
    const Eigen::MatrixXcd B = monomial_matrix(params, pts);
    const Eigen::VectorXcd F = B * state.coeffs();
    MomentStats s;
    for (Eigen::Index k = 0; k < F.size(); ++k) s.push(phi(clamp_unit(std::norm(F[k]))));
    partial[b] = s;
  }
  return reduce_pairwise(partial);
}

double weighted_phi_sum_serial(const std::vector<Eigen::VectorXcd>& points,
                               const std::vector<double>& weights, const PolynomialState& state,
                               const ConvexPhi& phi) {
  double acc = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p)
    acc += weights[p] * phi(clamp_unit(std::norm(evaluate_homogeneous(state, points[p]))));
  return acc;
}

MomentStats mc_stream_serial(const Params& params, std::uint64_t seed, std::size_t n,
                             const PolynomialState& state, const ConvexPhi& phi) {
  MomentStats s;
  std::vector<Eigen::VectorXcd> pts;
  for (std::size_t b = 0; b * kSampleBlock < n; ++b) {
    generate_block(params, seed, b, std::min(kSampleBlock, n - b * kSampleBlock), pts);
    for (const auto& v : pts) s.push(phi(clamp_unit(std::norm(evaluate_homogeneous(state, v)))));
  }
  return s;
}

}  // namespace wehrl::kernels
