#pragma once

// Boolean k-CSP instances, their encoding as one {0,1} tensor per
// constraint type, exact OPT by enumeration, and an approximation that
// optimises the cut-tensor surrogate of the objective.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lpreg/oracle.hpp"
#include "lpreg/tensor.hpp"

namespace lpreg {

inline constexpr int kMaxArity = 6;
inline constexpr int kBruteForceLimit = 24;

/// Truth table over {0,1}^k: bit j is the value on the assignment whose
/// binary encoding is j, the first variable being the most significant bit.
using TruthTable = std::uint64_t;

struct Constraint {
  TruthTable table = 0;
  /// Strictly increasing, 0-based.
  std::vector<Index> vars;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

class CSPInstance {
 public:
  /// Requires n >= 1, 2 <= k <= 6, nonzero tables that fit 2^k bits and
  /// strictly increasing in-range variable tuples of length k.
  CSPInstance(int n, int k, std::vector<Constraint> constraints);

  int variables() const noexcept { return n_; }
  int arity() const noexcept { return k_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

 private:
  int n_;
  int k_;
  std::vector<Constraint> constraints_;
};

/// 0/1 value per variable.
using Assignment = std::vector<std::uint8_t>;

/// One tensor over [n]^k per truth table present in the instance, with a 1
/// at the (increasing) variable tuple of every constraint of that type.
std::map<TruthTable, BinaryTensor> build_type_tensors(const CSPInstance& inst);

std::int64_t evaluate_assignment(const CSPInstance& inst, const Assignment& sigma);

struct OptResult {
  std::int64_t value = 0;
  Assignment sigma;
};

/// Exact maximum over all 2^n assignments; the lexicographically least
/// maximiser is reported. Throws LimitExceeded when n > limit.
OptResult opt_bruteforce(const CSPInstance& inst, int limit = kBruteForceLimit);

struct MaxCspResult {
  Assignment sigma;
  /// evaluate_assignment(inst, sigma), never the surrogate.
  std::int64_t value = 0;
  double surrogate = 0.0;
  /// eps 2^{-(2^k + 2k + 2)}, the accuracy of every type-tensor decomposition.
  double accuracy = 0.0;
  std::size_t cut_tensors = 0;
  std::size_t atoms = 0;
  std::int64_t grid_points = 0;
  std::optional<std::int64_t> opt;
  std::optional<double> ratio;  // value / opt, 1 when opt = 0
};

/// Decomposes every type tensor, splits [n] into atoms on which all cut
/// tensor sides agree, searches all per-atom counts of 1-assigned
/// variables for the best surrogate, and realises the counts with the
/// lowest indices of each atom. Compares with opt_bruteforce when n is
/// small enough. Throws LimitExceeded when the count grid exceeds budget.
MaxCspResult approx_max_csp(const CSPInstance& inst, double eps, double C, double p,
                            const OracleConfig& oracle, std::int64_t budget = std::int64_t{1} << 22);

}  // namespace lpreg
