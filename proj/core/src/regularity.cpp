#include "lpreg/regularity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "lpreg/error.hpp"

namespace lpreg {

double dagger_exponent(double p) { return std::min(2.0, p); }

double conjugate_exponent(double p) {
  if (!(p > 1.0)) throw InvalidArgument("conjugate_exponent: p must exceed 1");
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

RegularityParams RegularityParams::make(double C, double eta, double p) {
  if (!(C >= 1.0) || !std::isfinite(C)) throw InvalidArgument("regularity: C must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("regularity: eta must lie in (0, 1]");
  if (!(p > 1.0)) throw InvalidArgument("regularity: p must lie in (1, infinity]");
  return RegularityParams(C, eta, p);
}

int min_side(double eta, int n) {
  return std::max(1, static_cast<int>(std::ceil(eta * n - 1e-9)));
}

std::string to_string(SearchMode mode) {
  return mode == SearchMode::grid_exhaustive ? "grid-exhaustive" : "random";
}

namespace {

void check_bounded_args(double C, double eta) {
  if (!(C > 0.0) || !std::isfinite(C)) throw InvalidArgument("boundedness: C must be positive");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("boundedness: eta must lie in (0, 1]");
}

// Column counts of f restricted to the rows in `mask`.
void column_counts(const BinaryMatrix& f, std::uint64_t mask, std::vector<int>& counts) {
  counts.assign(static_cast<std::size_t>(f.cols()), 0);
  for (int i = 0; i < f.rows(); ++i) {
    if (!((mask >> i) & 1u)) continue;
    for (int j = 0; j < f.cols(); ++j) counts[static_cast<std::size_t>(j)] += f.at(i, j) ? 1 : 0;
  }
}

// Indices of the k largest entries, larger value first, ties to lower index.
IndexSet top_k(const std::vector<int>& values, int k) {
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
  });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

IndexSet mask_to_set(std::uint64_t mask) {
  IndexSet out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

// Set partitions of {0..n-1} with every block of size >= min_block, in
// restricted-growth-string order.
void set_partitions_rec(int n, int min_block, int i, std::vector<IndexSet>& blocks,
                        std::vector<std::vector<IndexSet>>& out) {
  int deficit = 0;
  for (const IndexSet& b : blocks) deficit += std::max(0, min_block - static_cast<int>(b.size()));
  if (deficit > n - i) return;
  if (i == n) {
    out.push_back(blocks);
    return;
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    blocks[b].push_back(i);
    set_partitions_rec(n, min_block, i + 1, blocks, out);
    blocks[b].pop_back();
  }
  blocks.push_back({i});
  set_partitions_rec(n, min_block, i + 1, blocks, out);
  blocks.pop_back();
}

std::vector<std::vector<IndexSet>> set_partitions(int n, int min_block) {
  std::vector<std::vector<IndexSet>> out;
  std::vector<IndexSet> blocks;
  set_partitions_rec(n, min_block, 0, blocks, out);
  return out;
}

double lp_of_cells(const std::vector<std::pair<double, double>>& cells, double p) {
  // cells: (value, measure)
  if (std::isinf(p)) {
    double out = 0.0;
    for (const auto& [v, mu] : cells) out = std::max(out, v);
    return out;
  }
  double acc = 0.0;
  for (const auto& [v, mu] : cells) acc += std::pow(v, p) * mu;
  return std::pow(acc, 1.0 / p);
}

}  // namespace

BoundednessVerdict is_bounded(const BinaryMatrix& f, double C, double eta, int limit) {
  check_bounded_args(C, eta);
  const bool transpose = f.rows() > f.cols();
  const BinaryMatrix g = transpose ? f.transposed() : f;
  const int n = g.rows();
  const int m = g.cols();
  if (n > limit || n > 62) {
    throw LimitExceeded("is_bounded: smaller side " + std::to_string(n) +
                        " exceeds the exhaustive limit " + std::to_string(limit) +
                        "; use the sampled mode");
  }
  BoundednessVerdict verdict;
  verdict.threshold = C * density(f);
  const int s0 = min_side(eta, n);
  const int t0 = min_side(eta, m);
  std::vector<int> counts;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    const int s = std::popcount(mask);
    if (s < s0) continue;
    column_counts(g, mask, counts);
    const IndexSet cols = top_k(counts, t0);
    std::int64_t hits = 0;
    for (Index j : cols) hits += counts[static_cast<std::size_t>(j)];
    const double avg = static_cast<double>(hits) / (static_cast<double>(s) * t0);
    if (avg > verdict.threshold + kTolerance) {
      Rectangle r{mask_to_set(mask), cols};
      if (transpose) std::swap(r.rows, r.cols);
      verdict.bounded = false;
      verdict.violator = std::move(r);
      verdict.violator_average = avg;
      return verdict;
    }
  }
  return verdict;
}

BoundednessVerdict is_bounded_sampled(const BinaryMatrix& f, double C, double eta, int samples,
                                      std::uint64_t seed) {
  check_bounded_args(C, eta);
  if (samples < 1) throw InvalidArgument("is_bounded_sampled: samples must be positive");
  BoundednessVerdict verdict;
  verdict.sampled = true;
  verdict.threshold = C * density(f);
  const int n1 = f.rows();
  const int n2 = f.cols();
  const int s0 = min_side(eta, n1);
  const int t0 = min_side(eta, n2);
  Rng rng(seed);
  std::vector<Index> order = full_index_set(n1);
  for (int sample = 0; sample < samples; ++sample) {
    shuffle(std::span<Index>(order), rng);
    IndexSet rows(order.begin(), order.begin() + s0);
    std::sort(rows.begin(), rows.end());
    IndexSet cols;
    for (int iter = 0; iter < 50; ++iter) {
      std::vector<int> col_counts(static_cast<std::size_t>(n2), 0);
      for (Index i : rows)
        for (int j = 0; j < n2; ++j) col_counts[static_cast<std::size_t>(j)] += f.at(i, j) ? 1 : 0;
      cols = top_k(col_counts, t0);
      std::vector<int> row_counts(static_cast<std::size_t>(n1), 0);
      for (int i = 0; i < n1; ++i)
        for (Index j : cols) row_counts[static_cast<std::size_t>(i)] += f.at(i, j) ? 1 : 0;
      IndexSet next = top_k(row_counts, s0);
      if (next == rows) break;
      rows = std::move(next);
    }
    Rectangle r{rows, cols};
    const double avg = static_cast<double>(sum_over(f, r)) / static_cast<double>(r.size());
    if (avg > verdict.threshold + kTolerance) {
      verdict.bounded = false;
      verdict.violator = std::move(r);
      verdict.violator_average = avg;
      return verdict;
    }
  }
  return verdict;
}

RectPartition random_split_partition(int n1, int n2, int min_rows, int min_cols, int max_splits,
                                     Rng& rng) {
  if (min_rows < 1 || min_cols < 1) throw InvalidArgument("random_split_partition: bad minimums");
  std::vector<Rectangle> cells{full_rectangle(n1, n2)};
  for (int s = 0; s < max_splits; ++s) {
    const auto c = static_cast<std::size_t>(uniform_below(rng, cells.size()));
    const bool rows_first = coin(rng);
    for (int attempt = 0; attempt < 2; ++attempt) {
      const bool split_rows = (attempt == 0) == rows_first;
      IndexSet side = split_rows ? cells[c].rows : cells[c].cols;
      const int min = split_rows ? min_rows : min_cols;
      const int len = static_cast<int>(side.size());
      if (len < 2 * min) continue;
      const int k = min + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(len - 2 * min + 1)));
      shuffle(std::span<Index>(side), rng);
      IndexSet a(side.begin(), side.begin() + k);
      IndexSet b(side.begin() + k, side.end());
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      Rectangle first = cells[c];
      Rectangle second = cells[c];
      (split_rows ? first.rows : first.cols) = std::move(a);
      (split_rows ? second.rows : second.cols) = std::move(b);
      cells[c] = std::move(first);
      cells.push_back(std::move(second));
      break;
    }
  }
  return RectPartition(n1, n2, std::move(cells));
}

WitnessReport regularity_witness_search(const BinaryMatrix& f, const RegularityParams& params,
                                        SearchMode mode, std::int64_t budget, std::uint64_t seed) {
  WitnessReport report;
  report.mode = mode;
  report.threshold = params.C() * density(f);
  const int n1 = f.rows();
  const int n2 = f.cols();
  const double total = static_cast<double>(f.cells());
  const int r0 = min_side(params.eta(), n1);
  const int c0 = min_side(params.eta(), n2);

  if (mode == SearchMode::grid_exhaustive) {
    if (n1 > kGridSearchLimit || n2 > kGridSearchLimit)
      throw LimitExceeded("regularity_witness_search: grid-exhaustive mode needs n1, n2 <= 8");
    const auto row_parts = set_partitions(n1, r0);
    const auto col_parts = set_partitions(n2, c0);
    std::vector<std::pair<double, double>> cells;
    for (const auto& rows : row_parts) {
      std::vector<std::vector<int>> counts(rows.size(), std::vector<int>(static_cast<std::size_t>(n2), 0));
      for (std::size_t b = 0; b < rows.size(); ++b)
        for (Index i : rows[b])
          for (int j = 0; j < n2; ++j) counts[b][static_cast<std::size_t>(j)] += f.at(i, j) ? 1 : 0;
      for (const auto& cols : col_parts) {
        ++report.partitions_checked;
        cells.clear();
        for (std::size_t b = 0; b < rows.size(); ++b) {
          for (const IndexSet& cb : cols) {
            int hits = 0;
            for (Index j : cb) hits += counts[b][static_cast<std::size_t>(j)];
            const double size = static_cast<double>(rows[b].size() * cb.size());
            cells.emplace_back(hits / size, size / total);
          }
        }
        const double norm = lp_of_cells(cells, params.p());
        if (norm > report.threshold + kTolerance) {
          std::vector<Rectangle> rects;
          for (const IndexSet& rb : rows)
            for (const IndexSet& cb : cols) rects.push_back(Rectangle{rb, cb});
          report.violated = true;
          report.violating_partition = RectPartition(n1, n2, std::move(rects));
          report.attained_lp = norm;
          return report;
        }
      }
    }
    return report;
  }

  if (budget < 1) throw InvalidArgument("regularity_witness_search: random mode needs a budget");
  Rng rng(seed);
  for (std::int64_t s = 0; s < budget; ++s) {
    const int splits = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n1 + n2 + 1)));
    RectPartition partition = random_split_partition(n1, n2, r0, c0, splits, rng);
    ++report.partitions_checked;
    const StepMatrix step = conditional_expectation(f, partition);
    const double norm = step_lp_norm(step, params.p());
    if (norm > report.threshold + kTolerance) {
      report.violated = true;
      report.violating_partition = std::move(partition);
      report.attained_lp = norm;
      return report;
    }
  }
  return report;
}

HolderReport holder_bound_check(const BinaryMatrix& f, const RegularityParams& params, int limit) {
  const bool transpose = f.rows() > f.cols();
  const BinaryMatrix g = transpose ? f.transposed() : f;
  const int n = g.rows();
  const int m = g.cols();
  if (n > limit || n > 62) {
    throw LimitExceeded("holder_bound_check: smaller side " + std::to_string(n) +
                        " exceeds the exhaustive limit " + std::to_string(limit));
  }
  HolderReport report;
  const double total = static_cast<double>(f.cells());
  const double scale = params.C() * density(f);
  const double inv_q = 1.0 / params.q();
  const double pad = 6.0 * params.eta();
  std::vector<int> counts;
  const std::uint64_t masks = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < masks; ++mask) {
    column_counts(g, mask, counts);
    const int s = std::popcount(mask);
    std::vector<Index> order = full_index_set(m);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return counts[static_cast<std::size_t>(a)] > counts[static_cast<std::size_t>(b)];
    });
    std::int64_t hits = 0;
    for (int t = 1; t <= m; ++t) {
      hits += counts[static_cast<std::size_t>(order[static_cast<std::size_t>(t - 1)])];
      const double lhs = static_cast<double>(hits) / total;
      const double rhs = scale * std::pow(static_cast<double>(s) * t / total + pad, inv_q);
      if (lhs > rhs + kTolerance) {
        IndexSet cols(order.begin(), order.begin() + t);
        std::sort(cols.begin(), cols.end());
        Rectangle r{mask_to_set(mask), std::move(cols)};
        if (transpose) std::swap(r.rows, r.cols);
        report.holds = false;
        report.counterexample = std::move(r);
        report.lhs = lhs;
        report.rhs = rhs;
        return report;
      }
    }
  }
  return report;
}

double certified_regularity_constant(const BinaryMatrix& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("certified_regularity_constant: p must be >= 1");
  const double d = density(f);
  if (d == 0.0) return 1.0;
  if (std::isinf(p)) return 1.0 / d;
  return std::pow(d, 1.0 / p - 1.0);
}

BoundednessAudit boundedness_vs_regularity_audit(const BinaryMatrix& f, double C, double eta) {
  BoundednessAudit audit;
  audit.bounded_C = is_bounded(f, C, eta).bounded;
  audit.bounded_4C = is_bounded(f, 4.0 * C, eta).bounded;
  audit.grid_violation_C =
      regularity_witness_search(f, RegularityParams::make(C, eta, kInfinity), SearchMode::grid_exhaustive)
          .violated;
  audit.forward_breach = audit.bounded_C && audit.grid_violation_C;
  audit.converse_breach = !audit.grid_violation_C && !audit.bounded_4C;
  return audit;
}

WRandomSample generate_w_random(const WGrid& w, int n, double target_density, std::uint64_t seed,
                                bool symmetric) {
  if (w.m < 1 || w.values.size() != static_cast<std::size_t>(w.m) * w.m)
    throw InvalidArgument("generate_w_random: grid must hold m*m values");
  double mean = 0.0;
  for (double v : w.values) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw InvalidArgument("generate_w_random: grid values must be finite and nonnegative");
    mean += v;
  }
  mean /= static_cast<double>(w.values.size());
  if (!(mean > 0.0)) throw InvalidArgument("generate_w_random: grid is identically zero");
  if (n < 1) throw InvalidArgument("generate_w_random: n must be positive");
  if (!(target_density >= 0.0 && target_density <= 1.0))
    throw InvalidArgument("generate_w_random: density must lie in [0, 1]");

  auto cell = [&](int i) {
    return std::min(w.m - 1, static_cast<int>((i + 0.5) / n * w.m));
  };
  Rng rng(seed);
  WRandomSample out{BinaryMatrix::empty(n, n), 0};
  std::vector<BinaryMatrix::Entry> ones;
  for (int i = 0; i < n; ++i) {
    for (int j = symmetric ? i : 0; j < n; ++j) {
      double prob = target_density * w.at(cell(i), cell(j)) / mean;
      if (prob > 1.0) {
        prob = 1.0;
        ++out.clipped;
      }
      if (uniform01(rng) < prob) {
        ones.emplace_back(i, j);
        if (symmetric && i != j) ones.emplace_back(j, i);
      }
    }
  }
  out.matrix = BinaryMatrix(n, n, std::move(ones));
  return out;
}

}  // namespace lpreg
