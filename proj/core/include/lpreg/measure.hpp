#pragma once

// Measures, rectangle partitions, conditional expectations, L_p norms and
// the exact cut norm on [n1] x [n2] with the uniform probability measure.
//
// Indices are 0-based throughout the C++ API. Text formats and JSON use
// 1-based indices; the conversion happens in lpreg/io.hpp only.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "lpreg/ratio.hpp"

namespace lpreg {

using Index = int;
/// Sorted, duplicate-free list of 0-based indices.
using IndexSet = std::vector<Index>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// Absolute tolerance used when comparing floating quantities against the
/// non-strict inequalities the engine certifies.
inline constexpr double kTolerance = 1e-9;
/// Default cap on the smaller matrix side for exhaustive cut-norm search.
inline constexpr int kCutNormExhaustiveLimit = 22;

/// Sorts and deduplicates.
IndexSet make_index_set(std::vector<Index> indices);
IndexSet full_index_set(int n);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
bool is_subset(const IndexSet& a, const IndexSet& b);

/// Sparse {0,1} matrix on [n1] x [n2].
class BinaryMatrix {
 public:
  using Entry = std::pair<Index, Index>;

  /// Throws InvalidArgument on non-positive sizes, out-of-range or
  /// duplicate entries.
  BinaryMatrix(int n1, int n2, std::vector<Entry> ones);

  static BinaryMatrix full(int n1, int n2);
  static BinaryMatrix identity(int n);
  static BinaryMatrix empty(int n1, int n2) { return BinaryMatrix(n1, n2, {}); }

  int rows() const noexcept { return n1_; }
  int cols() const noexcept { return n2_; }
  std::int64_t cells() const noexcept {
    return static_cast<std::int64_t>(n1_) * n2_;
  }
  std::span<const Entry> ones() const noexcept { return ones_; }
  std::int64_t count() const noexcept {
    return static_cast<std::int64_t>(ones_.size());
  }
  bool at(Index i, Index j) const { return grid_[static_cast<std::size_t>(i) * n2_ + j] != 0; }

  BinaryMatrix transposed() const;

  friend bool operator==(const BinaryMatrix& a, const BinaryMatrix& b) {
    return a.n1_ == b.n1_ && a.n2_ == b.n2_ && a.ones_ == b.ones_;
  }

 private:
  int n1_;
  int n2_;
  std::vector<Entry> ones_;
  std::vector<std::uint8_t> grid_;
};

/// |ones| / (n1 n2), i.e. the L_1 norm of f.
double density(const BinaryMatrix& f);
Ratio density_exact(const BinaryMatrix& f);

/// A product set rows x cols. Either side may be empty (oracle witnesses);
/// partition cells require both sides nonempty.
struct Rectangle {
  IndexSet rows;
  IndexSet cols;

  bool empty() const noexcept { return rows.empty() || cols.empty(); }
  std::int64_t size() const noexcept {
    return static_cast<std::int64_t>(rows.size()) * static_cast<std::int64_t>(cols.size());
  }

  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

Rectangle make_rectangle(std::vector<Index> rows, std::vector<Index> cols);
Rectangle full_rectangle(int n1, int n2);

/// Deterministic tie-break among witnesses of equal value: smaller
/// (|rows|, |cols|, rows, cols) in lexicographic order wins.
bool witness_less(const Rectangle& a, const Rectangle& b);

/// Partition of [n1] x [n2] into rectangles with nonempty sides.
class RectPartition {
 public:
  /// Throws InvalidArgument unless the cells are pairwise disjoint, cover
  /// the box, stay in range and have nonempty sides.
  RectPartition(int n1, int n2, std::vector<Rectangle> cells);

  static RectPartition trivial(int n1, int n2);

  int rows() const noexcept { return n1_; }
  int cols() const noexcept { return n2_; }
  std::size_t size() const noexcept { return cells_.size(); }
  std::span<const Rectangle> cells() const noexcept { return cells_; }
  const Rectangle& cell(std::size_t c) const { return cells_[c]; }
  /// Index of the cell containing (i, j).
  std::size_t cell_of(Index i, Index j) const {
    return cell_of_[static_cast<std::size_t>(i) * n2_ + j];
  }
  /// Measure of cell c under the uniform measure on the box.
  double measure(std::size_t c) const {
    return static_cast<double>(cells_[c].size()) / (static_cast<double>(n1_) * n2_);
  }

  /// True when every cell of *this lies inside a single cell of coarser.
  bool refines(const RectPartition& coarser) const;

 private:
  int n1_;
  int n2_;
  std::vector<Rectangle> cells_;
  std::vector<std::uint32_t> cell_of_;
};

/// min over cells of min(|rows|/n1, |cols|/n2).
double iota(const RectPartition& partition);

/// Dense real-valued matrix. Residuals f - E(f|A_P) are built densely; the
/// library only handles desk-scale boxes.
class RealMatrix {
 public:
  RealMatrix(int n1, int n2, std::vector<double> values);
  RealMatrix(int n1, int n2) : RealMatrix(n1, n2, std::vector<double>(static_cast<std::size_t>(n1) * n2, 0.0)) {}

  static RealMatrix from_binary(const BinaryMatrix& f);

  int rows() const noexcept { return n1_; }
  int cols() const noexcept { return n2_; }
  double at(Index i, Index j) const { return values_[static_cast<std::size_t>(i) * n2_ + j]; }
  double& at(Index i, Index j) { return values_[static_cast<std::size_t>(i) * n2_ + j]; }
  std::span<const double> values() const noexcept { return values_; }

  RealMatrix transposed() const;
  RealMatrix negated() const;

 private:
  int n1_;
  int n2_;
  std::vector<double> values_;
};

/// Conditional expectation E(g | A_P): one value per cell. Built from a
/// BinaryMatrix the cell averages are also kept as exact ratios.
class StepMatrix {
 public:
  StepMatrix(RectPartition partition, std::vector<double> values);
  StepMatrix(RectPartition partition, std::vector<Ratio> exact_values);

  const RectPartition& partition() const noexcept { return partition_; }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t c) const { return values_[c]; }
  bool has_exact() const noexcept { return !exact_.empty(); }
  /// Exact cell averages; empty unless built from a {0,1} matrix.
  std::span<const Ratio> exact_values() const noexcept { return exact_; }
  double at(Index i, Index j) const { return values_[partition_.cell_of(i, j)]; }

  RealMatrix to_real() const;

 private:
  RectPartition partition_;
  std::vector<double> values_;
  std::vector<Ratio> exact_;
};

/// Throws InvalidArgument when the partition box differs from f's.
StepMatrix conditional_expectation(const BinaryMatrix& f, const RectPartition& partition);
StepMatrix conditional_expectation(const RealMatrix& g, const RectPartition& partition);

/// f - E(f|A_P) as a dense matrix.
RealMatrix residual(const BinaryMatrix& f, const StepMatrix& step);

/// (sum_cells |v|^p mu(cell))^{1/p}, or max |v| for p = infinity.
/// Throws InvalidArgument for p <= 1.
double step_lp_norm(const StepMatrix& g, double p);

/// L_p norm of a matrix under the uniform probability measure, p >= 1.
double lp_norm(const RealMatrix& g, double p);

/// Exact mean of a {0,1}-built step: sum_cells value * mu(cell).
Ratio step_mean_exact(const StepMatrix& g);

/// Plain entry sums over a rectangle (throw on out-of-range indices).
double sum_over(const RealMatrix& g, const Rectangle& a);
std::int64_t sum_over(const BinaryMatrix& f, const Rectangle& a);
double sum_over(const StepMatrix& g, const Rectangle& a);

/// Normalised integral: sum_over / (n1 n2).
double integral_over(const RealMatrix& g, const Rectangle& a);
double integral_over(const BinaryMatrix& f, const Rectangle& a);
double integral_over(const StepMatrix& g, const Rectangle& a);

struct CutNormResult {
  /// max over S, T of |sum_{S x T} g| (unnormalised).
  double value = 0.0;
  Rectangle witness;
};

/// Exhaustive cut norm. Enumerates subsets of the smaller side in Gray-code
/// order; for each one the best column set is read off the signs of the
/// partial column sums. Throws LimitExceeded when min(n1, n2) > limit.
CutNormResult cut_norm_exact(const RealMatrix& g, int limit = kCutNormExhaustiveLimit);

}  // namespace lpreg
