// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lpreg/csp.hpp"
#include "lpreg/decompose.hpp"
#include "lpreg/io.hpp"
#include "lpreg/refine.hpp"
#include "lpreg/regularity.hpp"
#include "lpreg/tensor.hpp"

using namespace lpreg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  // Timing-free JSON of everything produced, for the determinism check.
  std::string json;
};

int rand_int(Rng& rng, int lo, int hi) { return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1))); }

BinaryMatrix random_matrix(int n1, int n2, double p, Rng& rng) {
  std::vector<BinaryMatrix::Entry> ones;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (uniform01(rng) < p) ones.emplace_back(i, j);
  return BinaryMatrix(n1, n2, std::move(ones));
}

// Random cut points split [n] into `parts` nonempty intervals; returns the
// interval id of every index.
std::vector<int> random_groups(int n, int parts, Rng& rng) {
  std::vector<int> cuts{0, n};
  while (static_cast<int>(cuts.size()) < parts + 1) {
    const int c = rand_int(rng, 1, n - 1);
    if (std::ranges::find(cuts, c) == cuts.end()) cuts.push_back(c);
  }
  std::ranges::sort(cuts);
  std::vector<int> group(static_cast<std::size_t>(n));
  for (std::size_t g = 0; g + 1 < cuts.size(); ++g)
    for (int i = cuts[g]; i < cuts[g + 1]; ++i) group[static_cast<std::size_t>(i)] = static_cast<int>(g);
  return group;
}

BinaryMatrix block_matrix(int n1, int n2, Rng& rng, int max_groups = 3) {
  const int r = rand_int(rng, 2, max_groups), c = rand_int(rng, 2, max_groups);
  const auto rows = random_groups(n1, r, rng), cols = random_groups(n2, c, rng);
  std::vector<char> full(static_cast<std::size_t>(r * c));
  for (char& x : full) x = coin(rng) ? 1 : 0;
  full[uniform_below(rng, full.size())] = 1;
  std::vector<BinaryMatrix::Entry> ones;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (full[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)] * c + cols[static_cast<std::size_t>(j)])])
        ones.emplace_back(i, j);
  return BinaryMatrix(n1, n2, std::move(ones));
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome cut_norm_identity() {
  Rng rng(1001);
  Outcome out;
  int ok = 0;
  for (int t = 0; t < 200; ++t) {
    const BinaryMatrix f = random_matrix(rand_int(rng, 1, 10), rand_int(rng, 1, 10), uniform01(rng), rng);
    if (cut_norm_exact(RealMatrix::from_binary(f)).value == static_cast<double>(f.count()))
      ++ok;
    else
      out.pass = false;
  }
  out.detail = std::to_string(ok) + "/200 equal |ones|";
  return out;
}

Outcome envelope_exhaustive() {
  Outcome out;
  const int n = 6;
  const std::vector<Ratio> varthetas{Ratio(1, 10), Ratio(1, 5), Ratio(17, 50)};
  std::int64_t checked = 0, bad = 0;
  for (const Ratio& vt : varthetas)
    for (std::uint64_t m1 = 1; m1 < (1u << n); ++m1)
      for (std::uint64_t m2 = 1; m2 < (1u << n); ++m2) {
        IndexSet a1, a2;
        for (int i = 0; i < n; ++i) {
          if ((m1 >> i) & 1U) a1.push_back(i);
          if ((m2 >> i) & 1U) a2.push_back(i);
        }
        if (Ratio(static_cast<std::int64_t>(a1.size()), n) < vt || Ratio(static_cast<std::int64_t>(a2.size()), n) < vt)
          continue;
        ++checked;
        const EnvelopeResult e = envelope_partition(n, n, a1, a2, vt.value());
        bool good = e.cells.size() <= 4;
        std::vector<int> cover(static_cast<std::size_t>(n * n), 0);
        for (const Rectangle& r : e.cells) {
          good = good && !(Ratio(static_cast<std::int64_t>(r.rows.size()), n) < vt) &&
                 !(Ratio(static_cast<std::int64_t>(r.cols.size()), n) < vt);
          for (Index i : r.rows)
            for (Index j : r.cols) ++cover[static_cast<std::size_t>(i * n + j)];
        }
        good = good && std::ranges::all_of(cover, [](int c) { return c == 1; });
        const Rectangle& b = e.cells[e.envelope];
        good = good && is_subset(a1, b.rows) && is_subset(a2, b.cols);
        const std::int64_t slack = b.size() - static_cast<std::int64_t>(a1.size() * a2.size());
        good = good && !(Ratio(2, 1) * vt < Ratio(slack, n * n));
        if (!good) ++bad;
      }
  out.pass = bad == 0 && checked > 0;
  out.detail = std::to_string(checked) + " instances, " + std::to_string(bad) + " violations";
  return out;
}

Outcome refine_suite() {
  Rng rng(3003);
  Outcome out;
  int instances = 0, hypothesis = 0, failures = 0;
  const double ps[] = {1.5, 2.0, kInfinity};
  double worst_step = -kInfinity, worst_f = -kInfinity;
  while (instances < 60) {
    const int n1 = rand_int(rng, 6, 12), n2 = rand_int(rng, 6, 12);
    const BinaryMatrix f = random_matrix(n1, n2, 0.15 + 0.3 * uniform01(rng), rng);
    if (f.count() == 0) continue;
    const double p = ps[instances % 3];
    const double eps = instances % 2 ? 0.3 : 0.45;
    const double C = certified_regularity_constant(f, p);
    const RegularityParams reg = RegularityParams::make(C, 1.0 / std::max(n1, n2), p);
    if (regularity_witness_search(f, reg, SearchMode::random, 200, static_cast<std::uint64_t>(instances)).violated)
      continue;
    const RectPartition part = random_split_partition(n1, n2, 1, 1, rand_int(rng, 0, 5), rng);
    const RealMatrix g = residual(f, conditional_expectation(f, part));
    const Rectangle a = oracle_exact(g).witness;
    if (a.empty()) continue;
    ++instances;

    const double pd = dagger_exponent(p);
    RefineParams rp = RefineParams::make(C, eps / (16.0 * C), pd, 0.0, iota(part));
    rp.log_eta = rp.log_iota_floor();
    const RefineResult r = refine_partition(f, part, a, rp);
    const RefineReport& rep = r.report;
    const bool structural = rep.structural_ok();
    const bool analytic = rep.analytic_ok();
    worst_step = std::max(worst_step, rep.step_on_symdiff - rep.step_symdiff_bound);
    worst_f = std::max(worst_f, rep.f_on_symdiff - rep.f_symdiff_bound);
    const IncrementCheck inc = increment_guarantee_check(f, part, r.partition, a, r.envelope, eps, 1.0, pd);
    if (inc.verdict != IncrementVerdict::hypothesis_not_met) ++hypothesis;
    if (!structural || !analytic || inc.verdict == IncrementVerdict::breach || !inc.envelope_measurable) ++failures;
  }
  out.pass = failures == 0 && hypothesis > 0;
  out.detail = std::to_string(instances) + " instances, " + std::to_string(hypothesis) + " with increment hypothesis, " +
               std::to_string(failures) + " failures; max slack of integral bounds " + fmt("%.3g", worst_step) + ", " +
               fmt("%.3g", worst_f);
  return out;
}

struct EndToEndCase {
  BinaryMatrix f;
  DecomposeParams params;
  DecompositionResult result;
  Certificate certificate;
};

std::vector<EndToEndCase> end_to_end_runs() {
  Rng rng(4004);
  std::vector<EndToEndCase> runs;
  const double ps[] = {1.5, 2.0, kInfinity};
  for (int t = 0; t < 33; ++t) {
    BinaryMatrix f = BinaryMatrix::empty(1, 1);
    if (t == 32) {
      f = block_matrix(24, 12, rng, 5);
    } else if (t % 2 == 0) {
      f = block_matrix(rand_int(rng, 8, 20), rand_int(rng, 8, 20), rng, 5);
    } else {
      do {
        f = generate_w_random(WGrid::flat(), rand_int(rng, 6, 20), 0.15 + 0.3 * uniform01(rng), rng()).matrix;
      } while (f.count() == 0);
    }
    const double p = ps[t % 3];
    const double eps = (t / 3) % 2 ? 0.3 : 0.45;
    const DecomposeParams params = synthesize_params(eps, certified_regularity_constant(f, p), p, 1.0);
    DecompositionResult result = decompose(f, params, OracleConfig::exact());
    Certificate cert = verify_result(f, result, params);
    runs.push_back(EndToEndCase{std::move(f), params, std::move(result), std::move(cert)});
  }
  return runs;
}

Outcome end_to_end() {
  Outcome out;
  Json all = Json::array();
  int ok = 0, max_step = 0, multi = 0;
  const auto runs = end_to_end_runs();
  for (const EndToEndCase& c : runs) {
    const auto& r = c.result;
    const bool halted_in_time = r.trace.halt_step <= c.params.tau &&
                                static_cast<std::int64_t>(r.trace.steps.size()) == r.trace.halt_step + 1;
    const bool size_ok = std::log(static_cast<double>(r.partition.size())) <=
                         static_cast<double>(c.params.tau) * std::log(4.0) + 1e-12;
    const bool iota_ok = std::log(iota(r.partition)) >= c.params.log_eta - 1e-12;
    const bool verified = c.certificate.status == CertificateStatus::verified;
    const bool steps_ok = std::ranges::all_of(r.trace.steps, [](const TraceStep& s) { return s.increment_ok && s.chain_ok; });
    if (halted_in_time && size_ok && iota_ok && verified && steps_ok)
      ++ok;
    else
      out.pass = false;
    max_step = std::max(max_step, static_cast<int>(r.trace.halt_step));
    if (r.trace.halt_step > 1) ++multi;
    Json j = to_json(r, c.params);
    j["certificate"] = to_json(c.certificate);
    all.push_back(std::move(j));
  }
  out.detail = std::to_string(ok) + "/" + std::to_string(runs.size()) + " certified, " + std::to_string(multi) +
               " needing several refinements, longest " + std::to_string(max_step);
  out.json = strip_timings(all).dump();
  return out;
}

Outcome martingale_suite() {
  Outcome out;
  int ok = 0, total = 0;
  double worst = -kInfinity;
  for (const EndToEndCase& c : end_to_end_runs()) {
    const MartingaleReport m = martingale_check(c.result.trace, c.f, c.params.p_dagger);
    ++total;
    worst = std::max(worst, m.lhs - m.rhs);
    if (m.ok())
      ++ok;
    else
      out.pass = false;
  }
  out.detail = std::to_string(ok) + "/" + std::to_string(total) + " traces, max lhs - rhs " + fmt("%.3g", worst);
  return out;
}

Outcome boundedness_audit() {
  Rng rng(6006);
  Outcome out;
  int breaches = 0, bounded = 0;
  for (int t = 0; t < 50; ++t) {
    const BinaryMatrix f = random_matrix(6, 6, 0.2 + 0.5 * uniform01(rng), rng);
    for (double C : {1.0, 2.0}) {
      const BoundednessAudit a = boundedness_vs_regularity_audit(f, C, 1.0 / 3.0);
      if (!a.ok()) ++breaches;
      if (a.bounded_C) ++bounded;
    }
  }
  out.pass = breaches == 0;
  out.detail = "100 audits, " + std::to_string(bounded) + " bounded at C, " + std::to_string(breaches) + " breaches";
  return out;
}

Outcome oracle_audit() {
  Rng rng(7007);
  Outcome out;
  Json all = Json::array();
  double worst = 1.0;
  int below = 0;
  for (int t = 0; t < 100; ++t) {
    const int n1 = rand_int(rng, 2, 12), n2 = rand_int(rng, 2, 12);
    const BinaryMatrix f = random_matrix(n1, n2, 0.1 + 0.5 * uniform01(rng), rng);
    const RectPartition part = random_split_partition(n1, n2, 1, 1, rand_int(rng, 0, 3), rng);
    const RealMatrix g = residual(f, conditional_expectation(f, part));
    const OracleOutcome exact = oracle_exact(g);
    const OracleOutcome heur = oracle_heuristic(g, OracleConfig::heuristic(static_cast<std::uint64_t>(t), 16));
    const double ratio = exact.scaled_value > 1e-12 ? heur.scaled_value / exact.scaled_value : 1.0;
    worst = std::min(worst, ratio);
    if (ratio < 0.5) ++below;
    all.push_back(Json{{"exact", to_json(exact)}, {"heuristic", to_json(heur)}});
  }
  out.pass = below == 0 && worst >= kHeuristicAlphaClaim;
  out.detail = "min heuristic/exact " + fmt("%.4f", worst) + " over 100 residuals";
  out.json = all.dump();
  return out;
}

BinaryTensor random_tensor(std::vector<int> dims, double p, Rng& rng) {
  const IndexCodec codec(dims);
  std::vector<Tuple> ones;
  for (std::int64_t lin = 0; lin < codec.size(); ++lin)
    if (uniform01(rng) < p) ones.push_back(codec.decode(lin));
  return BinaryTensor(std::move(dims), std::move(ones));
}

BinaryTensor block_tensor(Rng& rng) {
  std::vector<std::vector<int>> groups;
  for (int a = 0; a < 3; ++a) groups.push_back(random_groups(4, 2, rng));
  const int pick = static_cast<int>(uniform_below(rng, 7)) + 1;  // nonempty set of the 8 blocks
  std::vector<Tuple> ones;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z) {
        const int block = groups[0][x] * 4 + groups[1][y] * 2 + groups[2][z];
        if ((pick >> (block % 3)) & 1) ones.push_back({x, y, z});
      }
  return BinaryTensor({4, 4, 4}, std::move(ones));
}

Outcome tensor_suite() {
  Rng rng(8008);
  Outcome out;
  int trips = 0;
  for (int t = 0; t < 100; ++t) {
    const int k = rand_int(rng, 2, 4);
    std::vector<int> dims;
    for (int a = 0; a < k; ++a) dims.push_back(rand_int(rng, 1, 4));
    const BinaryTensor f = random_tensor(dims, uniform01(rng), rng);
    const Flattening fl = flatten(f);
    if (unflatten(fl.matrix, dims) == f && fl.matrix.count() == f.count()) ++trips;
  }
  int certified = 0, decomposed = 0;
  double worst = 0.0;
  for (int t = 0; t < 12; ++t) {
    BinaryTensor f = t % 2 ? random_tensor({4, 4, 4}, 0.15 + 0.3 * uniform01(rng), rng) : block_tensor(rng);
    if (f.count() == 0) continue;
    ++decomposed;
    const double C = certified_regularity_constant(flatten(f).matrix, 2.0);
    const TensorDecomposition d = tensor_decompose(f, 0.45, C, 2.0, OracleConfig::exact());
    // recompute the residual independently of the library's certificate
    RealTensor g = RealTensor::from_binary(f);
    const RealTensor approx = cut_tensor_sum(f.dims(), d.cuts);
    for (std::int64_t i = 0; i < f.volume(); ++i) g[i] -= approx[i];
    const double res = tensor_cut_norm_exact(g).value;
    const double ratio = res / static_cast<double>(f.count());
    worst = std::max(worst, ratio);
    if (d.complete && res <= 0.45 * static_cast<double>(f.count()) + 1e-9 && d.status == CertificateStatus::verified)
      ++certified;
  }
  out.pass = trips == 100 && certified == decomposed && decomposed > 0;
  out.detail = std::to_string(trips) + "/100 round trips, " + std::to_string(certified) + "/" +
               std::to_string(decomposed) + " (4,4,4) decompositions within 0.45 |ones| (max " + fmt("%.3f", worst) + ")";
  return out;
}

CSPInstance random_2csp(Rng& rng) {
  const int n = rand_int(rng, 4, 12);
  const int m = rand_int(rng, n, 3 * n);
  std::vector<Constraint> cs;
  for (int c = 0; c < m; ++c) {
    int a = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    int b = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - 1)));
    if (b >= a) ++b;
    cs.push_back(Constraint{1 + uniform_below(rng, 15), {std::min(a, b), std::max(a, b)}});
  }
  return CSPInstance(n, 2, std::move(cs));
}

Outcome csp_suite() {
  Rng rng(9009);
  Outcome out;
  Json all = Json::array();
  int ok = 0;
  double worst = kInfinity;
  for (int t = 0; t < 50; ++t) {
    const CSPInstance inst = random_2csp(rng);
    // Every type tensor is regular at its certified constant; take the largest.
    double C = 1.0;
    for (const auto& [table, tensor] : build_type_tensors(inst))
      C = std::max(C, certified_regularity_constant(flatten(tensor).matrix, 2.0));
    const MaxCspResult r = approx_max_csp(inst, 0.3, C, 2.0, OracleConfig::exact());
    const std::int64_t opt = opt_bruteforce(inst).value;
    const bool good = r.value == evaluate_assignment(inst, r.sigma) &&
                      static_cast<double>(r.value) >= 0.7 * static_cast<double>(opt) && r.opt && *r.opt == opt;
    if (good)
      ++ok;
    else
      out.pass = false;
    worst = std::min(worst, opt ? static_cast<double>(r.value) / static_cast<double>(opt) : 1.0);
    all.push_back(to_json(r));
  }
  out.detail = std::to_string(ok) + "/50 at >= 0.7 OPT, min ratio " + fmt("%.3f", worst);
  out.json = all.dump();
  return out;
}

Outcome determinism() {
  Outcome out;
  int same = 0;
  for (auto* fn : {&end_to_end, &oracle_audit, &csp_suite}) {
    const std::string a = fn().json, b = fn().json;
    if (!a.empty() && a == b) ++same;
  }
  out.pass = same == 3;
  out.detail = std::to_string(same) + "/3 suites byte-identical across reruns";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_s;  // 0: no runtime requirement
  };
  const std::vector<Criterion> criteria{
      {"1 cut norm of {0,1} matrices equals |ones|", cut_norm_identity, 30},
      {"2 envelope partition exhaustive over [6] x [6]", envelope_exhaustive, 10},
      {"3 refinement guarantees on regular inputs", refine_suite, 0},
      {"4 end-to-end decomposition with exact oracle", end_to_end, 300},
      {"5 martingale inequality along traces", martingale_suite, 0},
      {"6 boundedness vs L_inf regularity audit", boundedness_audit, 0},
      {"7 heuristic oracle audit", oracle_audit, 0},
      {"8 tensor flattening and decomposition", tensor_suite, 0},
      {"9 approximate MAX-CSP within (1 - eps) OPT", csp_suite, 300},
      {"10 determinism of JSON outputs", determinism, 0},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::printf("%s  C%s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
