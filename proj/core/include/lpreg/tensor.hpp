#pragma once

// k-dimensional {0,1} tensors, their flattening into matrices (first
// floor(k/2) coordinates index rows, the rest columns), the exhaustive
// tensor cut norm, and decomposition into cut tensors c * 1_{S1 x ... x Sk}.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lpreg/decompose.hpp"
#include "lpreg/measure.hpp"
#include "lpreg/oracle.hpp"

namespace lpreg {

using Tuple = std::vector<Index>;

/// Default cap on sum of dimensions for tensor_cut_norm_exact.
inline constexpr int kTensorCutNormLimit = 18;

/// Row-major bijection between tuples in [d1] x ... x [dk] and [d1 ... dk].
class IndexCodec {
 public:
  explicit IndexCodec(std::vector<int> dims);

  std::span<const int> dims() const noexcept { return dims_; }
  std::int64_t size() const noexcept { return size_; }
  std::int64_t encode(std::span<const Index> tuple) const;
  Tuple decode(std::int64_t linear) const;

 private:
  std::vector<int> dims_;
  std::int64_t size_ = 1;
};

class BinaryTensor {
 public:
  /// Requires k >= 2 positive dims; throws on out-of-range or duplicate tuples.
  BinaryTensor(std::vector<int> dims, std::vector<Tuple> ones);

  std::span<const int> dims() const noexcept { return codec_.dims(); }
  int order() const noexcept { return static_cast<int>(codec_.dims().size()); }
  std::int64_t volume() const noexcept { return codec_.size(); }
  std::int64_t count() const noexcept { return static_cast<std::int64_t>(linear_.size()); }
  const IndexCodec& codec() const noexcept { return codec_; }
  /// Linear indices of the ones, increasing (equivalently: tuples in
  /// lexicographic order).
  std::span<const std::int64_t> linear_ones() const noexcept { return linear_; }
  std::vector<Tuple> ones() const;
  bool at(std::span<const Index> tuple) const;

  friend bool operator==(const BinaryTensor& a, const BinaryTensor& b) {
    return std::ranges::equal(a.dims(), b.dims()) && a.linear_ == b.linear_;
  }

 private:
  IndexCodec codec_;
  std::vector<std::int64_t> linear_;
};

/// Dense real tensor in row-major order.
class RealTensor {
 public:
  RealTensor(std::vector<int> dims, std::vector<double> values);
  explicit RealTensor(std::vector<int> dims);

  static RealTensor from_binary(const BinaryTensor& f);

  std::span<const int> dims() const noexcept { return codec_.dims(); }
  const IndexCodec& codec() const noexcept { return codec_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::int64_t linear) { return values_[static_cast<std::size_t>(linear)]; }
  double operator[](std::int64_t linear) const { return values_[static_cast<std::size_t>(linear)]; }

 private:
  IndexCodec codec_;
  std::vector<double> values_;
};

struct Flattening {
  BinaryMatrix matrix;
  IndexCodec rows;
  IndexCodec cols;
  int split = 1;  // number of coordinates encoded in the row index
};

Flattening flatten(const BinaryTensor& f);
/// Inverse of flatten for a matrix over the given tensor dims.
BinaryTensor unflatten(const BinaryMatrix& m, std::vector<int> dims);

struct CutTensor {
  std::vector<IndexSet> sides;
  double coefficient = 0.0;
};

/// sum of the cut tensors as a dense tensor over dims.
RealTensor cut_tensor_sum(std::span<const int> dims, std::span<const CutTensor> cuts);

struct TensorCutNormResult {
  /// max over S1, ..., Sk of |sum over S1 x ... x Sk|.
  double value = 0.0;
  std::vector<IndexSet> witness;
};

/// Enumerates subsets of every coordinate except the longest one, whose
/// best subset is read off the signs of the partial sums. Throws
/// LimitExceeded when the sum of dims exceeds limit.
TensorCutNormResult tensor_cut_norm_exact(const RealTensor& g, int limit = kTensorCutNormLimit);
TensorCutNormResult tensor_cut_norm_exact(const BinaryTensor& f, int limit = kTensorCutNormLimit);

struct TensorDecomposition {
  std::vector<CutTensor> cuts;
  double eps = 0.0;
  /// Accuracy of the top-level matrix decomposition (eps / 2 for k > 2).
  double eps_top = 0.0;
  /// Accuracy of every side-set rounding, sqrt(1 + eps / 2) - 1.
  double eps_side = 0.0;
  std::size_t top_cut_matrices = 0;
  /// Side sets that were already product sets and needed no rounding.
  std::size_t product_sides = 0;
  std::size_t rounded_sides = 0;
  /// False when the cut-tensor budget ran out; the list is then partial.
  bool complete = true;
  /// Exact residual tensor cut norm when feasible and requested.
  std::optional<double> residual_cut_norm;
  double bound = 0.0;  // eps |ones|
  CertificateStatus status = CertificateStatus::uncertified;
  /// log of (2 C / (eps eta^2))^{2(k-1)} with the unspecified constant b = 1;
  /// reported for comparison only.
  double log_count_target = 0.0;
};

/// k = 2 is exactly decompose() at eps. For k > 2 the flattening is
/// decomposed at eps / 2 and each non-product side set of a cut matrix is
/// itself decomposed as a lower-order tensor at eps_side (with C raised to
/// that indicator's certified constant), so the products of the pieces
/// are cut tensors. When verify is set and the dims allow it, the residual
/// is certified by tensor_cut_norm_exact.
TensorDecomposition tensor_decompose(const BinaryTensor& f, double eps, double C, double p,
                                     const OracleConfig& oracle, std::size_t budget = 1u << 20,
                                     bool verify = true);

}  // namespace lpreg
