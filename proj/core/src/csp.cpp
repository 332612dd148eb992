#include "lpreg/csp.hpp"

#include <algorithm>
#include <cmath>

#include "lpreg/error.hpp"

namespace lpreg {

CSPInstance::CSPInstance(int n, int k, std::vector<Constraint> constraints)
    : n_(n), k_(k), constraints_(std::move(constraints)) {
  if (n < 1) throw InvalidArgument("CSP: variable count must be positive");
  if (k < 2 || k > kMaxArity) throw InvalidArgument("CSP: arity must lie in [2, 6]");
  const int rows = 1 << k;
  for (const Constraint& c : constraints_) {
    if (c.table == 0) throw InvalidArgument("CSP: truth table is identically zero");
    if (rows < 64 && (c.table >> rows) != 0) throw InvalidArgument("CSP: truth table has too many bits");
    if (static_cast<int>(c.vars.size()) != k) throw InvalidArgument("CSP: constraint arity differs from k");
    for (int t = 0; t < k; ++t) {
      if (c.vars[t] < 0 || c.vars[t] >= n) throw InvalidArgument("CSP: variable out of range");
      if (t > 0 && c.vars[t] <= c.vars[t - 1])
        throw InvalidArgument("CSP: variables must be strictly increasing");
    }
  }
}

std::map<TruthTable, BinaryTensor> build_type_tensors(const CSPInstance& inst) {
  std::map<TruthTable, std::vector<Tuple>> tuples;
  for (const Constraint& c : inst.constraints()) {
    std::vector<Tuple>& list = tuples[c.table];
    if (std::ranges::find(list, c.vars) == list.end()) list.push_back(c.vars);
  }
  std::map<TruthTable, BinaryTensor> out;
  const std::vector<int> dims(static_cast<std::size_t>(inst.arity()), inst.variables());
  for (auto& [table, list] : tuples) out.emplace(table, BinaryTensor(dims, std::move(list)));
  return out;
}

namespace {

int table_row(const Constraint& c, const Assignment& sigma) {
  int j = 0;
  for (Index v : c.vars) j = (j << 1) | (sigma[static_cast<std::size_t>(v)] ? 1 : 0);
  return j;
}

}  // namespace

std::int64_t evaluate_assignment(const CSPInstance& inst, const Assignment& sigma) {
  if (static_cast<int>(sigma.size()) != inst.variables())
    throw InvalidArgument("evaluate_assignment: assignment length differs from n");
  std::int64_t value = 0;
  for (const Constraint& c : inst.constraints()) value += (c.table >> table_row(c, sigma)) & 1U;
  return value;
}

OptResult opt_bruteforce(const CSPInstance& inst, int limit) {
  const int n = inst.variables();
  if (n > limit) throw LimitExceeded("opt_bruteforce: n exceeds " + std::to_string(limit));
  OptResult best;
  best.value = -1;
  Assignment sigma(static_cast<std::size_t>(n));
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < total; ++code) {
    for (int v = 0; v < n; ++v) sigma[static_cast<std::size_t>(v)] = (code >> (n - 1 - v)) & 1U;
    const std::int64_t value = evaluate_assignment(inst, sigma);
    if (value > best.value) {
      best.value = value;
      best.sigma = sigma;
    }
  }
  return best;
}

namespace {

struct SurrogateTerm {
  TruthTable table;
  double coefficient;
  std::vector<std::vector<std::size_t>> side_atoms;  // per coordinate
  std::vector<std::int64_t> side_sizes;
};

}  // namespace

MaxCspResult approx_max_csp(const CSPInstance& inst, double eps, double C, double p,
                            const OracleConfig& oracle, std::int64_t budget) {
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("approx_max_csp: eps must lie in (0, 1/2)");
  const int n = inst.variables();
  const int k = inst.arity();
  MaxCspResult out;
  out.accuracy = eps * std::ldexp(1.0, -((1 << k) + 2 * k + 2));

  std::vector<std::pair<TruthTable, CutTensor>> cuts;
  for (const auto& [table, tensor] : build_type_tensors(inst)) {
    TensorDecomposition d = tensor_decompose(tensor, out.accuracy, C, p, oracle, 1u << 20, false);
    if (!d.complete) throw LimitExceeded("approx_max_csp: cut-tensor budget exhausted");
    for (CutTensor& cut : d.cuts)
      if (cut.coefficient != 0.0) cuts.emplace_back(table, std::move(cut));
  }
  out.cut_tensors = cuts.size();

  // Atoms: variables grouped by membership in every cut-tensor side.
  std::vector<std::vector<std::uint8_t>> signature(static_cast<std::size_t>(n));
  for (const auto& [table, cut] : cuts) {
    for (const IndexSet& side : cut.sides) {
      std::vector<std::uint8_t> member(static_cast<std::size_t>(n), 0);
      for (Index v : side) member[static_cast<std::size_t>(v)] = 1;
      for (int v = 0; v < n; ++v) signature[static_cast<std::size_t>(v)].push_back(member[static_cast<std::size_t>(v)]);
    }
  }
  std::map<std::vector<std::uint8_t>, std::size_t> atom_of_signature;
  std::vector<std::size_t> atom_of(static_cast<std::size_t>(n));
  std::vector<std::vector<Index>> atoms;
  for (int v = 0; v < n; ++v) {
    auto [it, fresh] = atom_of_signature.emplace(signature[static_cast<std::size_t>(v)], atoms.size());
    if (fresh) atoms.emplace_back();
    atoms[it->second].push_back(v);
    atom_of[static_cast<std::size_t>(v)] = it->second;
  }
  out.atoms = atoms.size();

  std::int64_t points = 1;
  for (const auto& atom : atoms) {
    const auto radix = static_cast<std::int64_t>(atom.size()) + 1;
    if (points > budget / radix)
      throw LimitExceeded("approx_max_csp: count grid exceeds budget; try a larger eps");
    points *= radix;
  }
  out.grid_points = points;

  std::vector<SurrogateTerm> terms;
  terms.reserve(cuts.size());
  for (const auto& [table, cut] : cuts) {
    SurrogateTerm term{table, cut.coefficient, {}, {}};
    for (const IndexSet& side : cut.sides) {
      std::vector<std::size_t> ids;
      for (Index v : side) ids.push_back(atom_of[static_cast<std::size_t>(v)]);
      std::ranges::sort(ids);
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      term.side_atoms.push_back(std::move(ids));
      term.side_sizes.push_back(static_cast<std::int64_t>(side.size()));
    }
    terms.push_back(std::move(term));
  }

  auto surrogate = [&](const std::vector<std::int64_t>& counts) {
    double total = 0.0;
    std::vector<std::int64_t> ones(static_cast<std::size_t>(k));
    for (const SurrogateTerm& term : terms) {
      for (int t = 0; t < k; ++t) {
        std::int64_t s = 0;
        for (std::size_t a : term.side_atoms[static_cast<std::size_t>(t)]) s += counts[a];
        ones[static_cast<std::size_t>(t)] = s;
      }
      double inner = 0.0;
      for (int j = 0; j < (1 << k); ++j) {
        if (((term.table >> j) & 1U) == 0) continue;
        double prod = 1.0;
        for (int t = 0; t < k; ++t) {
          const bool bit = (j >> (k - 1 - t)) & 1;
          const auto u = static_cast<std::size_t>(t);
          prod *= static_cast<double>(bit ? ones[u] : term.side_sizes[u] - ones[u]);
        }
        inner += prod;
      }
      total += term.coefficient * inner;
    }
    return total;
  };

  std::vector<std::int64_t> counts(atoms.size(), 0);
  std::vector<std::int64_t> best_counts = counts;
  double best = surrogate(counts);
  for (;;) {
    std::size_t a = atoms.size();
    bool done = true;
    while (a > 0) {
      --a;
      if (++counts[a] <= static_cast<std::int64_t>(atoms[a].size())) {
        done = false;
        break;
      }
      counts[a] = 0;
    }
    if (done) break;
    const double value = surrogate(counts);
    if (value > best + kTolerance) {
      best = value;
      best_counts = counts;
    }
  }

  out.sigma.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t a = 0; a < atoms.size(); ++a)
    for (std::int64_t c = 0; c < best_counts[a]; ++c)
      out.sigma[static_cast<std::size_t>(atoms[a][static_cast<std::size_t>(c)])] = 1;
  out.surrogate = best;
  out.value = evaluate_assignment(inst, out.sigma);
  if (n <= kBruteForceLimit) {
    out.opt = opt_bruteforce(inst).value;
    out.ratio = *out.opt == 0 ? 1.0 : static_cast<double>(out.value) / static_cast<double>(*out.opt);
  }
  return out;
}

}  // namespace lpreg
