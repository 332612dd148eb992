#include "lpreg/decompose.hpp"

#include <algorithm>
#include <cmath>

#include "lpreg/error.hpp"
#include "lpreg/regularity.hpp"

namespace lpreg {

double eta_exponent(std::int64_t tau, double p_dagger) {
  if (tau < 1) throw InvalidArgument("eta_exponent: tau must be positive");
  const double q = conjugate_exponent(p_dagger);
  const double ratio = (2.0 / p_dagger + 1.0) * q;
  // q sum_{i=0}^{tau} ratio^i, ratio >= 4.
  const double log_top = static_cast<double>(tau + 1) * std::log(ratio);
  if (log_top > 700.0) return kInfinity;
  return q * (std::exp(log_top) - 1.0) / (ratio - 1.0);
}

std::string eta_exponent_decimal(std::int64_t tau) {
  if (tau < 1) throw InvalidArgument("eta_exponent_decimal: tau must be positive");
  // Binary 1010...10 with 2 tau + 2 digits; limbs hold base 10^9, least
  // significant first.
  constexpr std::uint32_t kBase = 1000000000;
  std::vector<std::uint32_t> limbs{0};
  for (std::int64_t bit = 2 * tau + 1; bit >= 0; --bit) {
    std::uint64_t carry = (bit % 2 == 1) ? 1 : 0;
    for (std::uint32_t& limb : limbs) {
      const std::uint64_t v = 2 * static_cast<std::uint64_t>(limb) + carry;
      limb = static_cast<std::uint32_t>(v % kBase);
      carry = v / kBase;
    }
    if (carry != 0) limbs.push_back(static_cast<std::uint32_t>(carry));
  }
  std::string out = std::to_string(limbs.back());
  for (std::size_t k = limbs.size() - 1; k-- > 0;) {
    std::string part = std::to_string(limbs[k]);
    out += std::string(9 - part.size(), '0') + part;
  }
  return out;
}

DecomposeParams synthesize_params(double eps, double C, double p, double a0) {
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("eps must lie in (0, 1/2)");
  if (!(C >= 1.0) || !std::isfinite(C)) throw InvalidArgument("C must be a finite real >= 1");
  if (!(p > 1.0)) throw InvalidArgument("p must lie in (1, infinity]");
  if (!(a0 > 0.0 && a0 <= 1.0)) throw InvalidArgument("a0 must lie in (0, 1]");

  DecomposeParams out;
  out.eps = eps;
  out.C = C;
  out.p = p;
  out.a0 = a0;
  out.p_dagger = dagger_exponent(p);
  out.q = conjugate_exponent(out.p_dagger);
  out.vartheta = a0 * eps / (16.0 * C);
  const double raw_tau = 4.0 * C * C / ((out.p_dagger - 1.0) * eps * eps * a0 * a0);
  if (!(raw_tau < 4.0e18)) throw InvalidArgument("tau overflows a 64-bit integer");
  out.tau = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw_tau * (1.0 - 1e-12))));
  out.eta_exponent = eta_exponent(out.tau, out.p_dagger);
  if (out.p_dagger == 2.0 && out.tau <= 2048) out.eta_exponent_exact = eta_exponent_decimal(out.tau);
  out.log_eta = std::isinf(out.eta_exponent) ? -kInfinity : out.eta_exponent * std::log(out.vartheta);
  out.a1 = 4.0 / (a0 * a0);
  out.a2 = a0 / 16.0;
  return out;
}

std::string to_string(HaltReason r) {
  switch (r) {
    case HaltReason::initial_halt: return "initial-halt";
    case HaltReason::general_halt: return "general-halt";
    case HaltReason::final_step: return "final-step";
  }
  return "unknown";
}

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::verified: return "verified";
    case CertificateStatus::failed: return "failed";
    case CertificateStatus::uncertified: return "uncertified";
  }
  return "unknown";
}

namespace {

std::uint64_t step_seed(std::uint64_t seed, std::int64_t m) {
  return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(m);
}

// Fills the oracle fields of `step`; true when the loop halts here.
bool probe(const BinaryMatrix& f, TraceStep& step, const OracleConfig& oracle, double threshold) {
  const StepMatrix e = conditional_expectation(f, step.partition);
  const RealMatrix g = residual(f, e);
  OracleConfig cfg = oracle;
  cfg.seed = step_seed(oracle.seed, step.m);
  OracleOutcome outcome = oracle_dispatch(g, cfg);
  step.residual_mass = std::abs(sum_over(g, outcome.witness));
  step.oracle = std::move(outcome);
  return step.residual_mass <= threshold;
}

TraceStep start_step(std::int64_t m, RectPartition partition) {
  TraceStep s;
  s.m = m;
  s.partition = std::move(partition);
  s.iota = iota(s.partition);
  s.log_iota = std::log(s.iota);
  return s;
}

}  // namespace

DecompositionResult decompose(const BinaryMatrix& f, const DecomposeParams& params,
                              const OracleConfig& raw_oracle) {
  if (f.count() == 0) throw InvalidArgument("decompose: f has density 0");
  if (params.tau < 1) throw InvalidArgument("decompose: tau must be positive");
  const OracleConfig oracle = raw_oracle.validated();
  const double d = density(f);
  const double threshold = params.a0 * params.eps * static_cast<double>(f.count());
  const double increment_floor = params.a0 * params.eps * d / 2.0;

  DecompositionTrace trace;
  TraceStep first = start_step(0, RectPartition::trivial(f.rows(), f.cols()));
  first.halted = probe(f, first, oracle, threshold);
  trace.steps.push_back(std::move(first));

  if (trace.steps.back().halted) {
    trace.reason = HaltReason::initial_halt;
  } else {
    for (std::int64_t m = 1;; ++m) {
      const TraceStep& prev = trace.steps.back();
      const RefineParams rp =
          RefineParams::make(params.C, params.vartheta, params.p_dagger, params.log_eta, prev.iota);
      RefineResult refined = [&] {
        try {
          return refine_partition(f, prev.partition, prev.oracle->witness, rp);
        } catch (const PreconditionError& e) {
          throw PreconditionError("decompose step " + std::to_string(m) + ": " + e.what());
        }
      }();

      TraceStep step = start_step(m, std::move(refined.partition));
      step.increment = step_distance(conditional_expectation(f, step.partition),
                                     conditional_expectation(f, prev.partition), params.p_dagger);
      step.increment_ok = *step.increment >= increment_floor - kTolerance;
      step.chain_ok = refined.report.refines && refined.report.iota_bound &&
                      std::log(static_cast<double>(step.partition.size())) <=
                          static_cast<double>(m) * std::log(4.0) + 1e-12;
      step.refine = refined.report;

      if (m == params.tau) {
        step.halted = true;
        trace.steps.push_back(std::move(step));
        trace.reason = HaltReason::final_step;
        break;
      }
      step.halted = probe(f, step, oracle, threshold);
      const bool halted = step.halted;
      trace.steps.push_back(std::move(step));
      if (halted) {
        trace.reason = HaltReason::general_halt;
        break;
      }
    }
  }
  trace.halt_step = trace.steps.back().m;

  RectPartition partition = trace.steps.back().partition;
  StepMatrix step = conditional_expectation(f, partition);
  std::vector<CutMatrix> cuts;
  cuts.reserve(partition.size());
  for (std::size_t c = 0; c < partition.size(); ++c)
    cuts.push_back(CutMatrix{partition.cell(c), step.value(c), step.exact_values()[c]});
  return DecompositionResult{std::move(partition), std::move(step), std::move(cuts), std::move(trace),
                             std::nullopt};
}

Certificate verify_claim(const BinaryMatrix& f, const DecompositionClaim& claim,
                         const DecomposeParams& params, int limit) {
  Certificate cert;
  cert.bound = params.eps * static_cast<double>(f.count());
  const int n1 = f.rows();
  const int n2 = f.cols();

  std::optional<RectPartition> partition;
  try {
    partition.emplace(n1, n2, claim.cells);
  } catch (const InvalidArgument&) {
    cert.failed.push_back("partition-valid");
  }
  if (!partition) {
    cert.status = CertificateStatus::failed;
    return cert;
  }

  if (std::log(static_cast<double>(partition->size())) >
      static_cast<double>(params.tau) * std::log(4.0) + 1e-12)
    cert.failed.push_back("partition-size");
  if (std::log(iota(*partition)) < params.log_eta - 1e-12) cert.failed.push_back("iota");

  const StepMatrix step = conditional_expectation(f, *partition);
  std::vector<int> cover(static_cast<std::size_t>(n1) * n2, 0);
  std::vector<double> total(cover.size(), 0.0);
  bool reconstructed = true;
  for (const CutMatrix& cut : claim.cut_matrices) {
    const Rectangle& r = cut.support;
    if (make_rectangle(r.rows, r.cols) != r) {
      reconstructed = false;
      break;
    }
    if (!r.rows.empty() && (r.rows.front() < 0 || r.rows.back() >= n1)) reconstructed = false;
    if (!r.cols.empty() && (r.cols.front() < 0 || r.cols.back() >= n2)) reconstructed = false;
    if (!reconstructed) break;
    for (Index i : r.rows) {
      for (Index j : r.cols) {
        const std::size_t k = static_cast<std::size_t>(i) * n2 + j;
        ++cover[k];
        total[k] += cut.coefficient;
      }
    }
  }
  if (reconstructed) {
    for (int i = 0; i < n1 && reconstructed; ++i) {
      for (int j = 0; j < n2; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) * n2 + j;
        const double expected = step.at(i, j);
        if (cover[k] > 1 || (cover[k] == 0 ? expected != 0.0 : total[k] != expected)) {
          reconstructed = false;
          break;
        }
      }
    }
  }
  if (!reconstructed) cert.failed.push_back("cut-matrix-reconstruction");

  const RealMatrix g = residual(f, step);
  bool exact = std::min(n1, n2) <= limit;
  OracleOutcome outcome = exact ? oracle_exact(g, limit) : oracle_heuristic(g, OracleConfig::heuristic(0));
  cert.residual_cut_norm = outcome.scaled_value;
  cert.witness = std::move(outcome.witness);
  if (cert.residual_cut_norm > cert.bound + kTolerance) cert.failed.push_back("residual-cut-norm");

  if (!cert.failed.empty()) cert.status = CertificateStatus::failed;
  else cert.status = exact ? CertificateStatus::verified : CertificateStatus::uncertified;
  return cert;
}

Certificate verify_result(const BinaryMatrix& f, const DecompositionResult& result,
                          const DecomposeParams& params, int limit) {
  DecompositionClaim claim;
  claim.cells.assign(result.partition.cells().begin(), result.partition.cells().end());
  claim.cut_matrices = result.cut_matrices;
  return verify_claim(f, claim, params, limit);
}

MartingaleReport martingale_check(const DecompositionTrace& trace, const BinaryMatrix& f,
                                  double p_dagger) {
  if (!(p_dagger > 1.0 && p_dagger <= 2.0))
    throw InvalidArgument("martingale_check: p_dagger must lie in (1, 2]");
  MartingaleReport report;
  if (trace.steps.empty()) return report;
  const int n1 = f.rows();
  const int n2 = f.cols();
  const std::size_t cells = static_cast<std::size_t>(n1) * n2;

  std::vector<Ratio> exact_sum(cells);
  std::vector<double> sum(cells, 0.0);
  std::vector<Ratio> prev_exact(cells);
  std::vector<double> prev(cells, 0.0);
  double squares = 0.0;
  StepMatrix last = conditional_expectation(f, trace.steps.front().partition);
  for (const TraceStep& step : trace.steps) {
    last = conditional_expectation(f, step.partition);
    RealMatrix diff(n1, n2);
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) * n2 + j;
        const std::size_t c = step.partition.cell_of(i, j);
        const Ratio now_exact = last.exact_values()[c];
        const double now = last.value(c);
        diff.at(i, j) = now - prev[k];
        sum[k] += diff.at(i, j);
        exact_sum[k] += now_exact - prev_exact[k];
        prev[k] = now;
        prev_exact[k] = now_exact;
      }
    }
    const double norm = lp_norm(diff, p_dagger);
    report.norms.push_back(norm);
    squares += norm * norm;
  }

  report.telescoping_ok = true;
  RealMatrix total(n1, n2);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * n2 + j;
      total.at(i, j) = sum[k];
      if (exact_sum[k] != last.exact_values()[last.partition().cell_of(i, j)])
        report.telescoping_ok = false;
    }
  }
  report.lhs = std::sqrt(squares);
  report.rhs = lp_norm(total, p_dagger) / std::sqrt(p_dagger - 1.0);
  report.inequality_ok = report.lhs <= report.rhs + kTolerance;
  return report;
}

}  // namespace lpreg
