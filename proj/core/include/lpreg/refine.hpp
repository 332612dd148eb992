#pragma once

// Partition subroutines of the energy-increment loop:
//
//  * envelope_partition: given A1 x A2 inside X1 x X2, a partition of the
//    box into at most four rectangles with large sides, one of which (the
//    envelope B) contains A1 x A2 and exceeds it by at most 2 vartheta.
//  * refine_partition: refines every cell of P that A meets in a large
//    proportion on both sides by its local envelope partition; the union
//    of those envelopes approximates A by a set measurable w.r.t. Q.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lpreg/measure.hpp"

namespace lpreg {

struct EnvelopeResult {
  /// Cells of the local partition of X1 x X2 (at most four).
  std::vector<Rectangle> cells;
  /// Index into `cells` of the envelope B containing A1 x A2.
  std::size_t envelope = 0;
  /// 1: both sides small; 2: rows small, cols large; 3: rows large, cols
  /// small; 4: both large ("small" meaning relative measure < 1 - vartheta).
  int case_id = 0;
};

/// Requires A_i a subset of X_i, mu_{X_i}(A_i) >= vartheta and
/// 0 < vartheta < 1/2; throws PreconditionError otherwise.
EnvelopeResult envelope_partition(const IndexSet& x1, const IndexSet& x2, const IndexSet& a1,
                                  const IndexSet& a2, double vartheta);
/// Same with X1 = [x1_size], X2 = [x2_size].
EnvelopeResult envelope_partition(int x1_size, int x2_size, const IndexSet& a1, const IndexSet& a2,
                                  double vartheta);

/// Labels P^1..P^4 of the four-way split of a partition against A.
enum class CellClass : int {
  small_small = 1,  // rows and cols of A meet the cell in < theta proportion
  small_large = 2,
  large_small = 3,
  large_large = 4,  // refined by an envelope partition
};

/// Compares mu1(A1 n P1) with theta mu1(P1) and mu2(A2 n P2) with
/// theta mu2(P2); "large" means >=.
std::vector<CellClass> classify_cells(const RectPartition& partition, const Rectangle& a,
                                      double theta);

struct RefineParams {
  double C = 1.0;
  double vartheta = 0.0;
  double p_dagger = 2.0;
  double q = 2.0;
  /// log eta; -infinity when eta underflows every representable exponent.
  double log_eta = 0.0;
  /// iota of the partition being refined, and the derived
  /// theta = vartheta^q iota^{2q/p_dagger}.
  double iota = 1.0;
  double theta = 0.0;

  /// Recomputes q and theta from the other fields.
  static RefineParams make(double C, double vartheta, double p_dagger, double log_eta, double iota);

  /// q (log vartheta + (2/p_dagger + 1) log iota): the log of the lower
  /// bound on iota(Q), which eta must not exceed.
  double log_iota_floor() const;
};

/// A union of pairwise disjoint rectangles.
using Region = std::vector<Rectangle>;

struct RefineReport {
  std::size_t cells_in = 0;
  std::size_t cells_out = 0;
  std::array<std::size_t, 4> class_counts{};
  bool refines = false;
  bool cell_bound = false;            // |Q| <= 4 |P|
  double iota_out = 0.0;
  double log_iota_floor = 0.0;        // statement-level bound
  bool iota_bound = false;
  double local_iota_min = 1.0;        // smallest side measure among pieces of P^4 cells
  bool local_iota_bound = false;      // proof-level bound iota(Q_P) >= theta iota(P)
  std::int64_t symdiff_cells = 0;     // |A triangle B| in entries
  double symdiff_measure = 0.0;
  bool symdiff_bound = false;         // mu(A triangle B) <= 2 theta
  double step_on_symdiff = 0.0;       // integral of E(f|A_P) over A triangle B
  double step_symdiff_bound = 0.0;    // 2 C ||f||_1 vartheta
  bool step_symdiff_ok = false;
  double f_on_symdiff = 0.0;          // integral of f over A triangle B
  double f_symdiff_bound = 0.0;       // 6 C ||f||_1 vartheta
  bool f_symdiff_ok = false;
  double concavity_sum = 0.0;         // sum_P mu(P)^{1/q}
  bool concavity_ok = false;          // <= |P|^{1/p_dagger} <= iota(P)^{-2/p_dagger}

  /// Structural guarantees (which never depend on regularity of f).
  bool structural_ok() const noexcept {
    return refines && cell_bound && iota_bound && local_iota_bound && symdiff_bound && concavity_ok;
  }
  /// The two integral bounds, guaranteed only for regular f.
  bool analytic_ok() const noexcept { return step_symdiff_ok && f_symdiff_ok; }
};

struct RefineResult {
  RectPartition partition;
  /// B: envelopes of the large_large cells, each a cell of `partition`.
  Region envelope;
  std::vector<CellClass> classes;
  RefineReport report;
};

/// Requires A in S, log eta <= log_iota_floor() and iota(P) matching
/// params.iota; throws PreconditionError otherwise.
RefineResult refine_partition(const BinaryMatrix& f, const RectPartition& partition,
                              const Rectangle& a, const RefineParams& params);

enum class IncrementVerdict { confirmed, hypothesis_not_met, breach };
std::string to_string(IncrementVerdict v);

struct IncrementCheck {
  IncrementVerdict verdict = IncrementVerdict::hypothesis_not_met;
  double hypothesis_lhs = 0.0;   // |integral_A (f - E(f|A_P))|
  double hypothesis_rhs = 0.0;   // a0 eps ||f||_1
  double increment = 0.0;        // ||E(f|A_Q) - E(f|A_P)||_{L_{p_dagger}}
  double increment_bound = 0.0;  // a0 eps ||f||_1 / 2
  bool envelope_measurable = true;  // B is a union of cells of Q
};

/// If |integral_A (f - E(f|A_P))| >= a0 eps ||f||_1 then the step norm must
/// grow by at least half that; reports breach only when the hypothesis held
/// and the conclusion failed.
IncrementCheck increment_guarantee_check(const BinaryMatrix& f, const RectPartition& p,
                                         const RectPartition& q, const Rectangle& a,
                                         const Region& b, double eps, double a0, double p_dagger);

/// ||E(f|A_Q) - E(f|A_P)||_{L_p} evaluated entrywise.
double step_distance(const StepMatrix& lhs, const StepMatrix& rhs, double p);

}  // namespace lpreg
