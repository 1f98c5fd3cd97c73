#include "wehrl/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wehrl {

int MultiIndex::length() const {
  return std::accumulate(components.begin(), components.end(), 0);
}

namespace {

// All compositions of `degree` into N nonnegative parts, lexicographically
// descending.
void compositions(int N, int degree, std::vector<int>& prefix,
                  std::vector<MultiIndex>& out) {
  const int pos = static_cast<int>(prefix.size());
  if (pos == N - 1) {
    prefix.push_back(degree);
    out.push_back(MultiIndex{prefix});
    prefix.pop_back();
    return;
  }
  for (int first = degree; first >= 0; --first) {
    prefix.push_back(first);
    compositions(N, degree - first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int N, int M) {
  if (N < 1) throw std::invalid_argument("enumerate_multi_indices: N must be >= 1");
  if (M < 0) throw std::invalid_argument("enumerate_multi_indices: M must be >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> prefix;
  prefix.reserve(N);
  for (int k = 0; k <= M; ++k) compositions(N, k, prefix, out);
  return out;
}

Params::Params(int N, int M) : N_(N), M_(M) {
  if (N < 1) throw std::invalid_argument("Params: N must be >= 1");
  if (M < 1) throw std::invalid_argument("Params: M must be >= 1");
  index_order_ = enumerate_multi_indices(N, M);
  degrees_.reserve(index_order_.size());
  degree_offsets_.assign(M + 2, 0);
  for (const auto& a : index_order_) {
    degrees_.push_back(a.length());
    ++degree_offsets_[a.length() + 1];
  }
  std::partial_sum(degree_offsets_.begin(), degree_offsets_.end(),
                   degree_offsets_.begin());
  if (index_order_.size() != binomial_u64(M + N, N))
    throw std::logic_error("Params: enumeration size mismatch");
}

std::size_t Params::position(const MultiIndex& alpha) const {
  if (alpha.size() != N_) throw std::invalid_argument("Params::position: wrong arity");
  const int K = alpha.length();
  if (K > M_) throw std::invalid_argument("Params::position: |alpha| > M");
  for (std::size_t i = degree_begin(K); i < degree_end(K); ++i)
    if (index_order_[i] == alpha) return i;
  throw std::logic_error("Params::position: index not found");
}

std::uint64_t binomial_u64(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binomial_u64: C(" + std::to_string(n) + "," +
                                std::to_string(k) + ") overflows");
  }
  return static_cast<std::uint64_t>(r);
}

double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  if (n <= 60) return static_cast<double>(binomial_u64(n, k));
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double c_alpha(const MultiIndex& alpha, int M) {
  const int K = alpha.length();
  if (K > M) throw std::invalid_argument("c_alpha: |alpha| > M");
  for (int a : alpha.components)
    if (a < 0) throw std::invalid_argument("c_alpha: negative component");
  // M!/(alpha! (M-K)!) as a product of binomials C(remaining, alpha_i).
  double multinomial = 1.0;
  int remaining = M;
  for (int a : alpha.components) {
    multinomial *= binomial(remaining, a);
    remaining -= a;
  }
  return std::sqrt(multinomial);
}

std::uint64_t A_const(int M, int N, int K) {
  if (K < 0 || K > M) throw std::invalid_argument("A_const: need 0 <= K <= M");
  if (N < 1) throw std::invalid_argument("A_const: N must be >= 1");
  return static_cast<std::uint64_t>(M - K + 1) * binomial_u64(M + N, K + N - 1);
}

double c_tilde_sq(int K, int M, int N) {
  if (K < 0 || K > M) throw std::invalid_argument("c_tilde_sq: need 0 <= |alpha| <= M");
  if (N < 1) throw std::invalid_argument("c_tilde_sq: N must be >= 1");
  // M!/(M-K)! over (N+K-1)!/(N-1)!, as a running product.
  double r = 1.0;
  for (int i = 0; i < K; ++i) r *= static_cast<double>(M - i) / static_cast<double>(N + i);
  return r;
}

double c_tilde_sq(const MultiIndex& alpha, int M, int N) {
  if (alpha.size() != N) throw std::invalid_argument("c_tilde_sq: wrong arity");
  return c_tilde_sq(alpha.length(), M, N);
}

double incomplete_beta_primitive(int M, int N, int K, double s) {
  if (std::isnan(s) || s < 0.0) throw std::invalid_argument("incomplete_beta_primitive: s < 0");
  const double A = static_cast<double>(A_const(M, N, K));
  const int n = M + N;
  if (std::isinf(s)) return 1.0 / A;
  // (1+s)^{-n} sum_j C(n,j) s^j == sum_j C(n,j) x^j (1-x)^{n-j}, x = s/(1+s).
  const double x = s / (1.0 + s);
  const double y = 1.0 / (1.0 + s);
  double acc = 0.0;
  for (int j = K + N; j <= n; ++j)
    acc += binomial(n, j) * std::pow(x, j) * std::pow(y, n - j);
  return acc / A;
}

}  // namespace wehrl
