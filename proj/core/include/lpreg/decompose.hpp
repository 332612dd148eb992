#pragma once

// The energy-increment engine. Starting from the trivial partition, each
// step asks the cut-norm oracle for a rectangle on which the residual
// f - E(f|A_P) has large mass and, if the mass exceeds a0 eps ||f||_1,
// refines P along that rectangle. After at most tau refinements the
// residual has cut norm at most eps ||f||_cut.
//
// eta is far below the smallest binary64 for realistic tau, so it only
// ever appears as log eta.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpreg/measure.hpp"
#include "lpreg/oracle.hpp"
#include "lpreg/refine.hpp"

namespace lpreg {

struct DecomposeParams {
  double eps = 0.25;
  double C = 1.0;
  double p = 2.0;
  double a0 = 1.0;

  double p_dagger = 2.0;
  double q = 2.0;
  double vartheta = 0.0;  // a0 eps / (16 C)
  std::int64_t tau = 1;
  /// sum_{i=1}^{tau+1} (2/p_dagger + 1)^{i-1} q^i; may be +infinity.
  double eta_exponent = 0.0;
  /// The same exponent in decimal, when p_dagger = 2 and tau is small
  /// enough to write it out; empty otherwise.
  std::string eta_exponent_exact;
  double log_eta = 0.0;
  double a1 = 4.0;  // 4 / a0^2
  double a2 = 1.0 / 16.0;  // a0 / 16
};

/// Requires 0 < eps < 1/2, C >= 1, 1 < p <= infinity, 0 < a0 <= 1.
DecomposeParams synthesize_params(double eps, double C, double p, double a0);

/// sum_{i=1}^{tau+1} (2/p_dagger + 1)^{i-1} q^i with q conjugate to p_dagger.
double eta_exponent(std::int64_t tau, double p_dagger);
/// Decimal digits of 2 (4^{tau+1} - 1) / 3, the exponent at p_dagger = 2.
std::string eta_exponent_decimal(std::int64_t tau);

enum class HaltReason { initial_halt, general_halt, final_step };
std::string to_string(HaltReason r);

struct TraceStep {
  std::int64_t m = 0;
  RectPartition partition = RectPartition::trivial(1, 1);
  double iota = 1.0;
  double log_iota = 0.0;
  /// Absent for the partition produced by the final step.
  std::optional<OracleOutcome> oracle;
  /// |sum over the witness of f - E(f|A_P)|, compared with a0 eps |ones|.
  double residual_mass = 0.0;
  /// ||E(f|A_{P_m}) - E(f|A_{P_{m-1}})||_{L_{p_dagger}}; absent at m = 0.
  std::optional<double> increment;
  bool increment_ok = true;  // increment >= a0 eps ||f||_1 / 2
  bool chain_ok = true;      // iota chain and |P_m| <= 4^m
  bool halted = false;
  std::optional<RefineReport> refine;
};

struct DecompositionTrace {
  std::vector<TraceStep> steps;
  HaltReason reason = HaltReason::initial_halt;
  std::int64_t halt_step = 0;
};

struct CutMatrix {
  Rectangle support;
  double coefficient = 0.0;
  Ratio exact;
};

enum class CertificateStatus { verified, failed, uncertified };
std::string to_string(CertificateStatus s);

struct Certificate {
  CertificateStatus status = CertificateStatus::uncertified;
  /// Names of violated clauses: partition-valid, partition-size, iota,
  /// cut-matrix-reconstruction, residual-cut-norm.
  std::vector<std::string> failed;
  /// Exact residual cut norm, or a heuristic lower bound when uncertified.
  double residual_cut_norm = 0.0;
  double bound = 0.0;  // eps |ones|
  std::optional<Rectangle> witness;
};

struct DecompositionResult {
  RectPartition partition;
  StepMatrix step;
  std::vector<CutMatrix> cut_matrices;
  DecompositionTrace trace;
  std::optional<Certificate> certificate;
};

/// Runs the loop. f must have at least one 1; regularity of f is assumed,
/// not checked.
DecompositionResult decompose(const BinaryMatrix& f, const DecomposeParams& params,
                              const OracleConfig& oracle);

/// Unvalidated partition and cut matrices, e.g. read back from JSON.
struct DecompositionClaim {
  std::vector<Rectangle> cells;
  std::vector<CutMatrix> cut_matrices;
};

/// Rebuilds E(f|A_P) from scratch and checks every clause of the output
/// contract. The residual cut norm is exact when min(n1, n2) <= limit and
/// otherwise only a heuristic lower bound (status uncertified).
Certificate verify_claim(const BinaryMatrix& f, const DecompositionClaim& claim,
                         const DecomposeParams& params, int limit = kCutNormExhaustiveLimit);
Certificate verify_result(const BinaryMatrix& f, const DecompositionResult& result,
                          const DecomposeParams& params, int limit = kCutNormExhaustiveLimit);

struct MartingaleReport {
  std::vector<double> norms;  // ||d_i||_{L_{p_dagger}}
  double lhs = 0.0;           // (sum ||d_i||^2)^{1/2}
  double rhs = 0.0;           // (p_dagger - 1)^{-1/2} ||sum d_i||
  bool inequality_ok = false;
  bool telescoping_ok = false;
  bool ok() const noexcept { return inequality_ok && telescoping_ok; }
};

/// Martingale differences along the trace's partition chain.
MartingaleReport martingale_check(const DecompositionTrace& trace, const BinaryMatrix& f,
                                  double p_dagger);

}  // namespace lpreg
