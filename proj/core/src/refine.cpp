#include "lpreg/refine.hpp"

#include <cmath>

#include "lpreg/error.hpp"

namespace lpreg {

EnvelopeResult envelope_partition(const IndexSet& x1, const IndexSet& x2, const IndexSet& a1,
                                  const IndexSet& a2, double vartheta) {
  if (!(vartheta > 0.0 && vartheta < 0.5))
    throw PreconditionError("envelope_partition: vartheta must lie in (0, 1/2)");
  if (x1.empty() || x2.empty()) throw PreconditionError("envelope_partition: empty ambient side");
  if (!is_subset(a1, x1) || !is_subset(a2, x2))
    throw PreconditionError("envelope_partition: A_i must be a subset of X_i");
  const double mu1 = static_cast<double>(a1.size()) / static_cast<double>(x1.size());
  const double mu2 = static_cast<double>(a2.size()) / static_cast<double>(x2.size());
  if (mu1 < vartheta || mu2 < vartheta)
    throw PreconditionError("envelope_partition: mu(A_i) must be at least vartheta");

  const bool rows_small = mu1 < 1.0 - vartheta;
  const bool cols_small = mu2 < 1.0 - vartheta;
  EnvelopeResult out;
  if (rows_small && cols_small) {
    const IndexSet r = set_difference(x1, a1);
    const IndexSet c = set_difference(x2, a2);
    out.case_id = 1;
    out.cells = {Rectangle{a1, a2}, Rectangle{r, a2}, Rectangle{a1, c}, Rectangle{r, c}};
  } else if (rows_small) {
    out.case_id = 2;
    out.cells = {Rectangle{a1, x2}, Rectangle{set_difference(x1, a1), x2}};
  } else if (cols_small) {
    out.case_id = 3;
    out.cells = {Rectangle{x1, a2}, Rectangle{x1, set_difference(x2, a2)}};
  } else {
    out.case_id = 4;
    out.cells = {Rectangle{x1, x2}};
  }
  out.envelope = 0;
  return out;
}

EnvelopeResult envelope_partition(int x1_size, int x2_size, const IndexSet& a1, const IndexSet& a2,
                                  double vartheta) {
  return envelope_partition(full_index_set(x1_size), full_index_set(x2_size), a1, a2, vartheta);
}

std::vector<CellClass> classify_cells(const RectPartition& partition, const Rectangle& a,
                                      double theta) {
  std::vector<CellClass> out;
  out.reserve(partition.size());
  for (const Rectangle& cell : partition.cells()) {
    const double rows_hit = static_cast<double>(set_intersection(a.rows, cell.rows).size());
    const double cols_hit = static_cast<double>(set_intersection(a.cols, cell.cols).size());
    const bool rows_large = rows_hit >= theta * static_cast<double>(cell.rows.size());
    const bool cols_large = cols_hit >= theta * static_cast<double>(cell.cols.size());
    if (!rows_large && !cols_large) out.push_back(CellClass::small_small);
    else if (!rows_large) out.push_back(CellClass::small_large);
    else if (!cols_large) out.push_back(CellClass::large_small);
    else out.push_back(CellClass::large_large);
  }
  return out;
}

RefineParams RefineParams::make(double C, double vartheta, double p_dagger, double log_eta,
                                double iota) {
  if (!(p_dagger > 1.0 && p_dagger <= 2.0))
    throw InvalidArgument("RefineParams: p_dagger must lie in (1, 2]");
  if (!(iota > 0.0 && iota <= 1.0)) throw InvalidArgument("RefineParams: iota must lie in (0, 1]");
  if (!(vartheta > 0.0 && vartheta < 0.5))
    throw InvalidArgument("RefineParams: vartheta must lie in (0, 1/2)");
  RefineParams rp;
  rp.C = C;
  rp.vartheta = vartheta;
  rp.p_dagger = p_dagger;
  rp.q = p_dagger / (p_dagger - 1.0);
  rp.log_eta = log_eta;
  rp.iota = iota;
  rp.theta = std::pow(vartheta, rp.q) * std::pow(iota, 2.0 * rp.q / p_dagger);
  return rp;
}

double RefineParams::log_iota_floor() const {
  return q * (std::log(vartheta) + (2.0 / p_dagger + 1.0) * std::log(iota));
}

namespace {

std::vector<char> region_mask(int n1, int n2, const Region& region) {
  std::vector<char> mask(static_cast<std::size_t>(n1) * n2, 0);
  for (const Rectangle& r : region)
    for (Index i : r.rows)
      for (Index j : r.cols) mask[static_cast<std::size_t>(i) * n2 + j] = 1;
  return mask;
}

void check_rectangle(const Rectangle& a, int n1, int n2) {
  for (Index i : a.rows)
    if (i < 0 || i >= n1) throw InvalidArgument("refine: rectangle row out of range");
  for (Index j : a.cols)
    if (j < 0 || j >= n2) throw InvalidArgument("refine: rectangle column out of range");
}

}  // namespace

RefineResult refine_partition(const BinaryMatrix& f, const RectPartition& partition,
                              const Rectangle& a, const RefineParams& params) {
  const int n1 = f.rows();
  const int n2 = f.cols();
  if (partition.rows() != n1 || partition.cols() != n2)
    throw InvalidArgument("refine_partition: partition box differs from matrix");
  check_rectangle(a, n1, n2);
  const Rectangle a_sorted = make_rectangle(a.rows, a.cols);
  if (a_sorted != a) throw InvalidArgument("refine_partition: rectangle sides must be sorted sets");

  const double iota_p = iota(partition);
  const RefineParams rp =
      RefineParams::make(params.C, params.vartheta, params.p_dagger, params.log_eta, iota_p);
  if (rp.log_eta > rp.log_iota_floor() + 1e-12) {
    throw PreconditionError("refine_partition: eta exceeds (vartheta iota(P)^{2/p+1})^q");
  }

  RefineResult out{partition, {}, classify_cells(partition, a, rp.theta), {}};
  RefineReport& report = out.report;
  report.cells_in = partition.size();
  report.log_iota_floor = rp.log_iota_floor();

  std::vector<Rectangle> cells;
  cells.reserve(4 * partition.size());
  double local_min = 1.0;
  for (std::size_t c = 0; c < partition.size(); ++c) {
    const Rectangle& cell = partition.cell(c);
    const CellClass cls = out.classes[c];
    ++report.class_counts[static_cast<std::size_t>(static_cast<int>(cls) - 1)];
    if (cls != CellClass::large_large) {
      cells.push_back(cell);
      continue;
    }
    EnvelopeResult env = envelope_partition(cell.rows, cell.cols, set_intersection(a.rows, cell.rows),
                                            set_intersection(a.cols, cell.cols), rp.theta);
    for (std::size_t k = 0; k < env.cells.size(); ++k) {
      const Rectangle& piece = env.cells[k];
      local_min = std::min({local_min, static_cast<double>(piece.rows.size()) / n1,
                            static_cast<double>(piece.cols.size()) / n2});
      if (k == env.envelope) out.envelope.push_back(piece);
      cells.push_back(piece);
    }
  }
  out.partition = RectPartition(n1, n2, std::move(cells));
  const RectPartition& q = out.partition;

  report.cells_out = q.size();
  report.refines = q.refines(partition);
  report.cell_bound = q.size() <= 4 * partition.size();
  report.iota_out = iota(q);
  report.iota_bound = std::log(report.iota_out) >= report.log_iota_floor - 1e-12;
  report.local_iota_min = local_min;
  report.local_iota_bound = local_min >= rp.theta * iota_p * (1.0 - 1e-12);

  const std::vector<char> in_b = region_mask(n1, n2, out.envelope);
  const std::vector<char> in_a = region_mask(n1, n2, {a});
  const StepMatrix step = conditional_expectation(f, partition);
  const double total = static_cast<double>(f.cells());
  const double d = density(f);
  double step_sum = 0.0;
  std::int64_t f_sum = 0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * n2 + j;
      if (in_a[k] == in_b[k]) continue;
      ++report.symdiff_cells;
      step_sum += step.at(i, j);
      f_sum += f.at(i, j) ? 1 : 0;
    }
  }
  report.symdiff_measure = static_cast<double>(report.symdiff_cells) / total;
  report.symdiff_bound = static_cast<double>(report.symdiff_cells) <= 2.0 * rp.theta * total;
  report.step_on_symdiff = step_sum / total;
  report.step_symdiff_bound = 2.0 * rp.C * d * rp.vartheta;
  report.step_symdiff_ok = report.step_on_symdiff <= report.step_symdiff_bound + kTolerance;
  report.f_on_symdiff = static_cast<double>(f_sum) / total;
  report.f_symdiff_bound = 6.0 * rp.C * d * rp.vartheta;
  report.f_symdiff_ok = report.f_on_symdiff <= report.f_symdiff_bound + kTolerance;

  double concave = 0.0;
  for (std::size_t c = 0; c < partition.size(); ++c)
    concave += std::pow(partition.measure(c), 1.0 / rp.q);
  report.concavity_sum = concave;
  const double mid = std::pow(static_cast<double>(partition.size()), 1.0 / rp.p_dagger);
  const double top = std::pow(iota_p, -2.0 / rp.p_dagger);
  report.concavity_ok = concave <= mid + kTolerance && mid <= top + kTolerance;
  return out;
}

std::string to_string(IncrementVerdict v) {
  switch (v) {
    case IncrementVerdict::confirmed: return "confirmed";
    case IncrementVerdict::hypothesis_not_met: return "hypothesis-not-met";
    case IncrementVerdict::breach: return "breach";
  }
  return "unknown";
}

double step_distance(const StepMatrix& lhs, const StepMatrix& rhs, double p) {
  const RectPartition& a = lhs.partition();
  const RectPartition& b = rhs.partition();
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidArgument("step_distance: boxes differ");
  RealMatrix diff(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) diff.at(i, j) = lhs.at(i, j) - rhs.at(i, j);
  return lp_norm(diff, p);
}

IncrementCheck increment_guarantee_check(const BinaryMatrix& f, const RectPartition& p,
                                         const RectPartition& q, const Rectangle& a,
                                         const Region& b, double eps, double a0, double p_dagger) {
  IncrementCheck out;
  const StepMatrix ep = conditional_expectation(f, p);
  const StepMatrix eq = conditional_expectation(f, q);
  out.hypothesis_lhs = std::abs(integral_over(f, a) - integral_over(ep, a));
  out.hypothesis_rhs = a0 * eps * density(f);
  out.increment = step_distance(eq, ep, p_dagger);
  out.increment_bound = out.hypothesis_rhs / 2.0;

  const std::vector<char> in_b = region_mask(q.rows(), q.cols(), b);
  for (const Rectangle& cell : q.cells()) {
    const char first = in_b[static_cast<std::size_t>(cell.rows.front()) * q.cols() + cell.cols.front()];
    for (Index i : cell.rows)
      for (Index j : cell.cols)
        if (in_b[static_cast<std::size_t>(i) * q.cols() + j] != first) out.envelope_measurable = false;
  }

  if (out.hypothesis_lhs < out.hypothesis_rhs) {
    out.verdict = IncrementVerdict::hypothesis_not_met;
  } else if (out.increment >= out.increment_bound - kTolerance) {
    out.verdict = IncrementVerdict::confirmed;
  } else {
    out.verdict = IncrementVerdict::breach;
  }
  return out;
}

}  // namespace lpreg
