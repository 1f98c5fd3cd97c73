#pragma once

// Multi-index bookkeeping and the closed-form constants of the polynomial
// model: binomials, the normalisations c_alpha and c~_alpha^2, the constants
// A_{M,N,K} and the incomplete-beta primitive built from them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wehrl {

struct MultiIndex {
  std::vector<int> components;

  int length() const;
  int size() const { return static_cast<int>(components.size()); }
  bool operator==(const MultiIndex&) const = default;
};

/// Multi-indices of length N with |alpha| <= M in graded-lexicographic order:
/// by total degree, then lexicographically descending within a degree, so
/// position 0 is the zero index and (1,0,...) precedes (0,1,...).
std::vector<MultiIndex> enumerate_multi_indices(int N, int M);

/// The pair (N, M) with the derived dimension d = C(M+N, N) and the canonical
/// index order used for every coefficient vector.
class Params {
 public:
  Params(int N, int M);

  int N() const { return N_; }
  int M() const { return M_; }
  std::size_t d() const { return index_order_.size(); }

  const std::vector<MultiIndex>& index_order() const { return index_order_; }
  const MultiIndex& index(std::size_t i) const { return index_order_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }

  /// Positions [begin, end) of the indices with |alpha| = K.
  std::size_t degree_begin(int K) const { return degree_offsets_[K]; }
  std::size_t degree_end(int K) const { return degree_offsets_[K + 1]; }

  /// Position of alpha in index_order; throws if absent.
  std::size_t position(const MultiIndex& alpha) const;

  bool operator==(const Params& o) const { return N_ == o.N_ && M_ == o.M_; }

 private:
  int N_;
  int M_;
  std::vector<MultiIndex> index_order_;
  std::vector<int> degrees_;
  std::vector<std::size_t> degree_offsets_;
};

/// Exact binomial coefficient; throws std::overflow_error past 64 bits.
std::uint64_t binomial_u64(int n, int k);

/// Binomial coefficient as a double. Exact integer arithmetic for n <= 60,
/// log-gamma otherwise.
double binomial(int n, int k);

/// c_alpha = sqrt(M! / (alpha! (M - |alpha|)!)).
double c_alpha(const MultiIndex& alpha, int M);

/// A_{M,N,K} = (M - K + 1) C(M+N, K+N-1).
std::uint64_t A_const(int M, int N, int K);

/// c~_alpha^2 = (N-1)! M! / ((N+|alpha|-1)! (M-|alpha|)!); depends on alpha
/// only through K = |alpha|.
double c_tilde_sq(int K, int M, int N);
double c_tilde_sq(const MultiIndex& alpha, int M, int N);

/// Closed form of int_0^s sigma^{K+N-1} / (1+sigma)^{M+N+1} dsigma.
/// s = +infinity is accepted and yields the complete integral B(K+N, M-K+1).
double incomplete_beta_primitive(int M, int N, int K, double s);

}  // namespace wehrl
