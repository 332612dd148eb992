#pragma once

// Predicates and generators for sparse pseudorandom {0,1} matrices:
// (C, eta)-boundedness, searches for (C, eta, p)-regularity violations,
// the Hoelder-type bound for regular matrices, and W-random instances.
//
// Exhaustive verification of regularity is infeasible beyond tiny boxes,
// so searches report "no violation found", never "regular".

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpreg/measure.hpp"
#include "lpreg/random.hpp"

namespace lpreg {

inline constexpr int kBoundednessExhaustiveLimit = 15;
inline constexpr int kGridSearchLimit = 8;

/// min(2, p).
double dagger_exponent(double p);
/// Conjugate exponent of p, for p in (1, infinity]; returns 1 for p = infinity.
double conjugate_exponent(double p);

class RegularityParams {
 public:
  /// Requires C >= 1, 0 < eta <= 1 and 1 < p <= infinity.
  static RegularityParams make(double C, double eta, double p);

  double C() const noexcept { return C_; }
  double eta() const noexcept { return eta_; }
  double p() const noexcept { return p_; }
  double p_dagger() const noexcept { return dagger_exponent(p_); }
  /// Conjugate exponent of p_dagger; always >= 2.
  double q() const noexcept { return conjugate_exponent(p_dagger()); }

 private:
  RegularityParams(double C, double eta, double p) : C_(C), eta_(eta), p_(p) {}
  double C_;
  double eta_;
  double p_;
};

/// Smallest side length k with k / n >= eta.
int min_side(double eta, int n);

struct BoundednessVerdict {
  bool bounded = true;
  std::optional<Rectangle> violator;
  double violator_average = 0.0;
  /// C * ||f||_1.
  double threshold = 0.0;
  bool sampled = false;
};

/// Exhaustive check of avg_{S x T} f <= C ||f||_1 over all S, T with both
/// side densities >= eta. For a fixed S the worst T is the ceil(eta n2)
/// columns with the largest counts, so only the smaller side is enumerated.
/// The first violator in increasing row-mask order is reported.
BoundednessVerdict is_bounded(const BinaryMatrix& f, double C, double eta,
                              int limit = kBoundednessExhaustiveLimit);

/// Randomised search for a boundedness violation by alternating
/// densest-submatrix ascent from `samples` random starts. Never certifies.
BoundednessVerdict is_bounded_sampled(const BinaryMatrix& f, double C, double eta,
                                      int samples, std::uint64_t seed);

enum class SearchMode { grid_exhaustive, random };
std::string to_string(SearchMode mode);

struct WitnessReport {
  bool violated = false;
  std::optional<RectPartition> violating_partition;
  std::optional<double> attained_lp;
  SearchMode mode = SearchMode::grid_exhaustive;
  std::int64_t partitions_checked = 0;
  double threshold = 0.0;
};

/// Looks for a partition P with iota(P) >= eta and
/// ||E(f|A_P)||_{L_p} > C ||f||_1. grid_exhaustive walks every pair of
/// (row set-partition, column set-partition) with blocks of density >= eta
/// in restricted-growth order and needs n1, n2 <= 8; random samples
/// `budget` partitions by recursive splitting.
WitnessReport regularity_witness_search(const BinaryMatrix& f, const RegularityParams& params,
                                        SearchMode mode, std::int64_t budget = 0,
                                        std::uint64_t seed = 0);

/// Random rectangle partition with every side at least min_rows / min_cols,
/// built by up to `max_splits` random axis splits of random cells.
RectPartition random_split_partition(int n1, int n2, int min_rows, int min_cols, int max_splits,
                                     Rng& rng);

struct HolderReport {
  bool holds = true;
  std::optional<Rectangle> counterexample;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Checks integral_A f <= C ||f||_1 (mu(A) + 6 eta)^{1/q} over every
/// rectangle A, q conjugate to p_dagger.
HolderReport holder_bound_check(const BinaryMatrix& f, const RegularityParams& params,
                                int limit = kBoundednessExhaustiveLimit);

/// ||f||_{L_p} / ||f||_{L_1}. Conditional expectation contracts L_p, so f is
/// (C, eta, p)-regular for every eta once C is at least this value.
double certified_regularity_constant(const BinaryMatrix& f, double p);

struct BoundednessAudit {
  bool bounded_C = false;
  bool grid_violation_C = false;  // at p = infinity
  bool bounded_4C = false;
  /// bounded at C but a partition violates (C, eta, infinity)-regularity.
  bool forward_breach = false;
  /// no (C, eta, infinity) violation found yet not (4C, eta)-bounded.
  bool converse_breach = false;
  bool ok() const noexcept { return !forward_breach && !converse_breach; }
};

/// Both directions of the boundedness / L_infinity regularity equivalence.
BoundednessAudit boundedness_vs_regularity_audit(const BinaryMatrix& f, double C, double eta);

/// Step-function graphon on an m x m grid over [0,1]^2.
struct WGrid {
  int m = 1;
  std::vector<double> values;  // row-major, nonnegative

  static WGrid flat() { return WGrid{1, {1.0}}; }
  double at(int a, int b) const { return values[static_cast<std::size_t>(a) * m + b]; }
};

struct WRandomSample {
  BinaryMatrix matrix;
  /// Entries whose probability density * W was clipped to 1.
  std::int64_t clipped = 0;
};

/// Independent Bernoulli entries with P[(i,j) = 1] = min(1, rho W(x_i, y_j)),
/// x_i = (i + 1/2)/n, after normalising W to mean 1. The symmetric variant
/// samples the upper triangle (diagonal included) and mirrors it.
WRandomSample generate_w_random(const WGrid& w, int n, double target_density, std::uint64_t seed,
                                bool symmetric = false);

}  // namespace lpreg
