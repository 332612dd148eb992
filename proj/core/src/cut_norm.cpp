#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "lpreg/error.hpp"
#include "lpreg/measure.hpp"

namespace lpreg {

namespace {

struct Candidate {
  double value = 0.0;
  std::uint64_t row_mask = 0;
  IndexSet cols;
};

IndexSet rows_from_mask(std::uint64_t mask) {
  IndexSet out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

Rectangle to_rectangle(const Candidate& c, bool transpose) {
  Rectangle r{rows_from_mask(c.row_mask), c.cols};
  if (transpose) std::swap(r.rows, r.cols);
  return r;
}

// Tie-break in the caller's orientation.
bool candidate_less(const Candidate& a, const Candidate& b, bool transpose) {
  return witness_less(to_rectangle(a, transpose), to_rectangle(b, transpose));
}

}  // namespace

CutNormResult cut_norm_exact(const RealMatrix& g, int limit) {
  const bool transpose = g.rows() > g.cols();
  const RealMatrix h = transpose ? g.transposed() : g;
  const int n = h.rows();
  const int m = h.cols();
  if (n > limit || n > 62) {
    throw LimitExceeded("cut_norm_exact: smaller side " + std::to_string(n) +
                        " exceeds the exhaustive limit " + std::to_string(limit) +
                        "; use the heuristic oracle instead");
  }

  std::vector<double> colsum(static_cast<std::size_t>(m), 0.0);
  Candidate best;  // S = T = {} with value 0
  Candidate probe;
  std::uint64_t mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;

  auto consider = [&](double sign) {
    double value = 0.0;
    int cols = 0;
    for (int j = 0; j < m; ++j) {
      const double c = sign * colsum[static_cast<std::size_t>(j)];
      if (c > 0.0) {
        value += c;
        ++cols;
      }
    }
    if (value < best.value - kTolerance) return;
    probe.value = value;
    probe.row_mask = mask;
    probe.cols.clear();
    for (int j = 0; j < m; ++j)
      if (sign * colsum[static_cast<std::size_t>(j)] > 0.0) probe.cols.push_back(j);
    if (value > best.value + kTolerance || candidate_less(probe, best, transpose)) best = probe;
  };

  for (std::uint64_t k = 1; k < total; ++k) {
    const int bit = std::countr_zero(k);
    const std::uint64_t flip = std::uint64_t{1} << bit;
    const double sign = (mask & flip) ? -1.0 : 1.0;
    mask ^= flip;
    for (int j = 0; j < m; ++j) colsum[static_cast<std::size_t>(j)] += sign * h.at(bit, j);
    consider(1.0);
    consider(-1.0);
  }

  Rectangle witness = to_rectangle(best, transpose);
  if (witness.empty()) witness = Rectangle{};
  return CutNormResult{std::abs(sum_over(g, witness)), std::move(witness)};
}

}  // namespace lpreg
