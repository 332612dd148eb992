#pragma once

// Cut-norm oracles: given a real matrix g, return a rectangle A with
// |sum_A g| >= alpha * ||g||_cut. The decomposition engine consumes only
// that inequality, so the exact and heuristic routes are interchangeable
// behind oracle_dispatch().

#include <cstdint>
#include <string>

#include "lpreg/measure.hpp"

namespace lpreg {

enum class OracleKind { exact, heuristic };

inline constexpr double kHeuristicAlphaClaim = 0.3;

struct OracleConfig {
  OracleKind kind = OracleKind::exact;
  /// Guarantee factor the oracle claims. Forced to 1 for the exact kind.
  double alpha_claim = 1.0;
  std::uint64_t seed = 0;
  int restarts = 16;
  int max_iters = 100;
  int exhaustive_limit = kCutNormExhaustiveLimit;

  static OracleConfig exact() { return {}; }
  static OracleConfig heuristic(std::uint64_t seed, int restarts = 16,
                                double alpha_claim = kHeuristicAlphaClaim) {
    OracleConfig cfg;
    cfg.kind = OracleKind::heuristic;
    cfg.alpha_claim = alpha_claim;
    cfg.seed = seed;
    cfg.restarts = restarts;
    return cfg;
  }

  /// Throws InvalidArgument on out-of-domain fields; returns a copy with
  /// alpha_claim pinned to 1 for the exact kind.
  OracleConfig validated() const;
};

std::string to_string(OracleKind kind);
OracleKind oracle_kind_from_string(const std::string& name);

struct OracleOutcome {
  Rectangle witness;
  /// (n1 n2) |integral of g over witness|, i.e. |sum_witness g|.
  double scaled_value = 0.0;
  double alpha = 1.0;

  friend bool operator==(const OracleOutcome&, const OracleOutcome&) = default;
};

/// Exhaustive maximiser; alpha = 1. Throws LimitExceeded past `limit`.
OracleOutcome oracle_exact(const RealMatrix& g, int limit = kCutNormExhaustiveLimit);

/// Seeded alternating ascent over row/column selections, warm-started from
/// sign roundings of the top singular vectors and from random row subsets,
/// run for +g and -g. alpha is the configured claim and is not proven.
OracleOutcome oracle_heuristic(const RealMatrix& g, const OracleConfig& cfg);

OracleOutcome oracle_dispatch(const RealMatrix& g, const OracleConfig& cfg);

}  // namespace lpreg
