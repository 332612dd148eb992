#include "lpreg/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpreg/error.hpp"

namespace lpreg {

IndexSet make_index_set(std::vector<Index> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

IndexSet full_index_set(int n) {
  IndexSet out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// ---------------------------------------------------------------- BinaryMatrix

BinaryMatrix::BinaryMatrix(int n1, int n2, std::vector<Entry> ones)
    : n1_(n1), n2_(n2), ones_(std::move(ones)) {
  if (n1 <= 0 || n2 <= 0) throw InvalidArgument("BinaryMatrix: sizes must be positive");
  grid_.assign(static_cast<std::size_t>(n1) * n2, 0);
  for (const auto& [i, j] : ones_) {
    if (i < 0 || i >= n1 || j < 0 || j >= n2) {
      throw InvalidArgument("BinaryMatrix: entry (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") out of range");
    }
    auto& cell = grid_[static_cast<std::size_t>(i) * n2 + j];
    if (cell != 0) {
      throw InvalidArgument("BinaryMatrix: duplicate entry (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
    }
    cell = 1;
  }
  std::sort(ones_.begin(), ones_.end());
}

BinaryMatrix BinaryMatrix::full(int n1, int n2) {
  std::vector<Entry> ones;
  ones.reserve(static_cast<std::size_t>(n1) * std::max(n2, 0));
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) ones.emplace_back(i, j);
  return BinaryMatrix(n1, n2, std::move(ones));
}

BinaryMatrix BinaryMatrix::identity(int n) {
  std::vector<Entry> ones;
  for (int i = 0; i < n; ++i) ones.emplace_back(i, i);
  return BinaryMatrix(n, n, std::move(ones));
}

BinaryMatrix BinaryMatrix::transposed() const {
  std::vector<Entry> ones;
  ones.reserve(ones_.size());
  for (const auto& [i, j] : ones_) ones.emplace_back(j, i);
  return BinaryMatrix(n2_, n1_, std::move(ones));
}

double density(const BinaryMatrix& f) {
  return static_cast<double>(f.count()) / static_cast<double>(f.cells());
}

Ratio density_exact(const BinaryMatrix& f) { return Ratio(f.count(), f.cells()); }

// ------------------------------------------------------------------- Rectangle

Rectangle make_rectangle(std::vector<Index> rows, std::vector<Index> cols) {
  return Rectangle{make_index_set(std::move(rows)), make_index_set(std::move(cols))};
}

Rectangle full_rectangle(int n1, int n2) {
  return Rectangle{full_index_set(n1), full_index_set(n2)};
}

bool witness_less(const Rectangle& a, const Rectangle& b) {
  if (a.rows.size() != b.rows.size()) return a.rows.size() < b.rows.size();
  if (a.cols.size() != b.cols.size()) return a.cols.size() < b.cols.size();
  if (a.rows != b.rows) return a.rows < b.rows;
  return a.cols < b.cols;
}

namespace {

void check_in_range(const Rectangle& a, int n1, int n2) {
  for (Index i : a.rows)
    if (i < 0 || i >= n1) throw InvalidArgument("rectangle row index out of range");
  for (Index j : a.cols)
    if (j < 0 || j >= n2) throw InvalidArgument("rectangle column index out of range");
}

bool sorted_unique(const IndexSet& s) {
  return std::adjacent_find(s.begin(), s.end(), std::greater_equal<>()) == s.end();
}

}  // namespace

// --------------------------------------------------------------- RectPartition

RectPartition::RectPartition(int n1, int n2, std::vector<Rectangle> cells)
    : n1_(n1), n2_(n2), cells_(std::move(cells)) {
  if (n1 <= 0 || n2 <= 0) throw InvalidArgument("RectPartition: sizes must be positive");
  if (cells_.empty()) throw InvalidArgument("RectPartition: no cells");
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  cell_of_.assign(static_cast<std::size_t>(n1) * n2, kUnset);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const Rectangle& cell = cells_[c];
    if (cell.empty()) throw InvalidArgument("RectPartition: cell with an empty side");
    if (!sorted_unique(cell.rows) || !sorted_unique(cell.cols))
      throw InvalidArgument("RectPartition: cell sides must be sorted and duplicate-free");
    check_in_range(cell, n1, n2);
    for (Index i : cell.rows) {
      for (Index j : cell.cols) {
        auto& slot = cell_of_[static_cast<std::size_t>(i) * n2 + j];
        if (slot != kUnset) throw InvalidArgument("RectPartition: overlapping cells");
        slot = static_cast<std::uint32_t>(c);
      }
    }
  }
  if (std::find(cell_of_.begin(), cell_of_.end(), kUnset) != cell_of_.end())
    throw InvalidArgument("RectPartition: cells do not cover the box");
}

RectPartition RectPartition::trivial(int n1, int n2) {
  return RectPartition(n1, n2, {full_rectangle(n1, n2)});
}

bool RectPartition::refines(const RectPartition& coarser) const {
  if (coarser.n1_ != n1_ || coarser.n2_ != n2_) return false;
  for (const Rectangle& cell : cells_) {
    const std::size_t target = coarser.cell_of(cell.rows.front(), cell.cols.front());
    for (Index i : cell.rows)
      for (Index j : cell.cols)
        if (coarser.cell_of(i, j) != target) return false;
  }
  return true;
}

double iota(const RectPartition& partition) {
  double out = 1.0;
  for (const Rectangle& cell : partition.cells()) {
    out = std::min(out, static_cast<double>(cell.rows.size()) / partition.rows());
    out = std::min(out, static_cast<double>(cell.cols.size()) / partition.cols());
  }
  return out;
}

// ------------------------------------------------------------------ RealMatrix

RealMatrix::RealMatrix(int n1, int n2, std::vector<double> values)
    : n1_(n1), n2_(n2), values_(std::move(values)) {
  if (n1 <= 0 || n2 <= 0) throw InvalidArgument("RealMatrix: sizes must be positive");
  if (values_.size() != static_cast<std::size_t>(n1) * n2)
    throw InvalidArgument("RealMatrix: value count does not match shape");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("RealMatrix: non-finite entry");
}

RealMatrix RealMatrix::from_binary(const BinaryMatrix& f) {
  RealMatrix out(f.rows(), f.cols());
  for (const auto& [i, j] : f.ones()) out.at(i, j) = 1.0;
  return out;
}

RealMatrix RealMatrix::transposed() const {
  RealMatrix out(n2_, n1_);
  for (int i = 0; i < n1_; ++i)
    for (int j = 0; j < n2_; ++j) out.at(j, i) = at(i, j);
  return out;
}

RealMatrix RealMatrix::negated() const {
  RealMatrix out = *this;
  for (double& v : out.values_) v = -v;
  return out;
}

// ------------------------------------------------------------------ StepMatrix

StepMatrix::StepMatrix(RectPartition partition, std::vector<double> values)
    : partition_(std::move(partition)), values_(std::move(values)) {
  if (values_.size() != partition_.size())
    throw InvalidArgument("StepMatrix: one value per cell required");
}

StepMatrix::StepMatrix(RectPartition partition, std::vector<Ratio> exact_values)
    : partition_(std::move(partition)), exact_(std::move(exact_values)) {
  if (exact_.size() != partition_.size())
    throw InvalidArgument("StepMatrix: one value per cell required");
  values_.reserve(exact_.size());
  for (const Ratio& r : exact_) values_.push_back(r.value());
}

RealMatrix StepMatrix::to_real() const {
  RealMatrix out(partition_.rows(), partition_.cols());
  for (int i = 0; i < partition_.rows(); ++i)
    for (int j = 0; j < partition_.cols(); ++j) out.at(i, j) = at(i, j);
  return out;
}

StepMatrix conditional_expectation(const BinaryMatrix& f, const RectPartition& partition) {
  if (f.rows() != partition.rows() || f.cols() != partition.cols())
    throw InvalidArgument("conditional_expectation: partition box differs from matrix");
  std::vector<std::int64_t> counts(partition.size(), 0);
  for (const auto& [i, j] : f.ones()) ++counts[partition.cell_of(i, j)];
  std::vector<Ratio> values;
  values.reserve(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c)
    values.emplace_back(counts[c], partition.cell(c).size());
  return StepMatrix(partition, std::move(values));
}

StepMatrix conditional_expectation(const RealMatrix& g, const RectPartition& partition) {
  if (g.rows() != partition.rows() || g.cols() != partition.cols())
    throw InvalidArgument("conditional_expectation: partition box differs from matrix");
  std::vector<double> values(partition.size(), 0.0);
  for (std::size_t c = 0; c < partition.size(); ++c) {
    values[c] = sum_over(g, partition.cell(c)) / static_cast<double>(partition.cell(c).size());
  }
  return StepMatrix(partition, std::move(values));
}

RealMatrix residual(const BinaryMatrix& f, const StepMatrix& step) {
  const RectPartition& p = step.partition();
  if (f.rows() != p.rows() || f.cols() != p.cols())
    throw InvalidArgument("residual: step box differs from matrix");
  RealMatrix out(f.rows(), f.cols());
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j) out.at(i, j) = (f.at(i, j) ? 1.0 : 0.0) - step.at(i, j);
  return out;
}

double step_lp_norm(const StepMatrix& g, double p) {
  if (!(p > 1.0)) throw InvalidArgument("step_lp_norm: p must exceed 1");
  const RectPartition& partition = g.partition();
  if (std::isinf(p)) {
    double out = 0.0;
    for (double v : g.values()) out = std::max(out, std::abs(v));
    return out;
  }
  double acc = 0.0;
  for (std::size_t c = 0; c < partition.size(); ++c)
    acc += std::pow(std::abs(g.value(c)), p) * partition.measure(c);
  return std::pow(acc, 1.0 / p);
}

double lp_norm(const RealMatrix& g, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be at least 1");
  const auto values = g.values();
  if (std::isinf(p)) {
    double out = 0.0;
    for (double v : values) out = std::max(out, std::abs(v));
    return out;
  }
  double acc = 0.0;
  for (double v : values) acc += std::pow(std::abs(v), p);
  return std::pow(acc / static_cast<double>(values.size()), 1.0 / p);
}

Ratio step_mean_exact(const StepMatrix& g) {
  if (!g.has_exact()) throw InvalidArgument("step_mean_exact: step has no exact values");
  const RectPartition& partition = g.partition();
  const std::int64_t total = static_cast<std::int64_t>(partition.rows()) * partition.cols();
  Ratio acc;
  for (std::size_t c = 0; c < partition.size(); ++c)
    acc += g.exact_values()[c] * Ratio(partition.cell(c).size(), total);
  return acc;
}

double sum_over(const RealMatrix& g, const Rectangle& a) {
  check_in_range(a, g.rows(), g.cols());
  double acc = 0.0;
  for (Index i : a.rows)
    for (Index j : a.cols) acc += g.at(i, j);
  return acc;
}

std::int64_t sum_over(const BinaryMatrix& f, const Rectangle& a) {
  check_in_range(a, f.rows(), f.cols());
  std::int64_t acc = 0;
  for (Index i : a.rows)
    for (Index j : a.cols) acc += f.at(i, j) ? 1 : 0;
  return acc;
}

double sum_over(const StepMatrix& g, const Rectangle& a) {
  check_in_range(a, g.partition().rows(), g.partition().cols());
  double acc = 0.0;
  for (Index i : a.rows)
    for (Index j : a.cols) acc += g.at(i, j);
  return acc;
}

double integral_over(const RealMatrix& g, const Rectangle& a) {
  return sum_over(g, a) / (static_cast<double>(g.rows()) * g.cols());
}

double integral_over(const BinaryMatrix& f, const Rectangle& a) {
  return static_cast<double>(sum_over(f, a)) / static_cast<double>(f.cells());
}

double integral_over(const StepMatrix& g, const Rectangle& a) {
  return sum_over(g, a) /
         (static_cast<double>(g.partition().rows()) * g.partition().cols());
}

}  // namespace lpreg
