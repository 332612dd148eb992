#include "lpreg/oracle.hpp"

#include <cmath>

#include "lpreg/error.hpp"
#include "lpreg/random.hpp"

namespace lpreg {

OracleConfig OracleConfig::validated() const {
  OracleConfig out = *this;
  if (kind == OracleKind::exact) out.alpha_claim = 1.0;
  if (!(out.alpha_claim > 0.0 && out.alpha_claim <= 1.0))
    throw InvalidArgument("oracle: alpha must lie in (0, 1]");
  if (restarts < 1) throw InvalidArgument("oracle: restarts must be positive");
  if (max_iters < 1) throw InvalidArgument("oracle: max_iters must be positive");
  if (exhaustive_limit < 1) throw InvalidArgument("oracle: exhaustive limit must be positive");
  return out;
}

std::string to_string(OracleKind kind) {
  return kind == OracleKind::exact ? "exact" : "heuristic";
}

OracleKind oracle_kind_from_string(const std::string& name) {
  if (name == "exact") return OracleKind::exact;
  if (name == "heuristic") return OracleKind::heuristic;
  throw InvalidArgument("unknown oracle kind '" + name + "'");
}

OracleOutcome oracle_exact(const RealMatrix& g, int limit) {
  CutNormResult r = cut_norm_exact(g, limit);
  return OracleOutcome{std::move(r.witness), r.value, 1.0};
}

namespace {

using Mask = std::vector<char>;

// Top right singular vector of g by power iteration on g^T g. Returns an
// empty vector when g is (numerically) zero.
std::vector<double> top_right_singular_vector(const RealMatrix& g, Rng& rng) {
  const int n = g.rows();
  const int m = g.cols();
  std::vector<double> v(static_cast<std::size_t>(m));
  for (double& x : v) x = 2.0 * uniform01(rng) - 1.0;
  std::vector<double> u(static_cast<std::size_t>(n));
  for (int iter = 0; iter < 200; ++iter) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += g.at(i, j) * v[static_cast<std::size_t>(j)];
      u[static_cast<std::size_t>(i)] = acc;
    }
    std::vector<double> next(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        next[static_cast<std::size_t>(j)] += g.at(i, j) * u[static_cast<std::size_t>(i)];
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-300) return {};
    double delta = 0.0;
    for (std::size_t j = 0; j < next.size(); ++j) {
      next[j] /= norm;
      delta = std::max(delta, std::abs(next[j] - v[j]));
    }
    v = std::move(next);
    if (delta < 1e-12) break;
  }
  return v;
}

struct Ascent {
  Mask rows;
  Mask cols;
  double value = 0.0;  // sum of h over rows x cols
};

// Alternating maximisation of sum_{S x T} h: for fixed S the best T takes
// the columns with positive partial sums, and symmetrically for rows.
Ascent ascend(const RealMatrix& h, Mask rows, int max_iters) {
  const int n = h.rows();
  const int m = h.cols();
  Mask cols(static_cast<std::size_t>(m), 0);
  double value = 0.0;
  for (int iter = 0; iter < max_iters; ++iter) {
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        if (rows[static_cast<std::size_t>(i)]) acc += h.at(i, j);
      cols[static_cast<std::size_t>(j)] = acc > 0.0;
    }
    Mask next(static_cast<std::size_t>(n), 0);
    value = 0.0;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j)
        if (cols[static_cast<std::size_t>(j)]) acc += h.at(i, j);
      if (acc > 0.0) {
        next[static_cast<std::size_t>(i)] = 1;
        value += acc;
      }
    }
    const bool stable = next == rows;
    rows = std::move(next);
    if (stable) break;
  }
  return Ascent{std::move(rows), std::move(cols), value};
}

Rectangle to_rectangle(const Ascent& a) {
  Rectangle r;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (a.rows[i]) r.rows.push_back(static_cast<Index>(i));
  for (std::size_t j = 0; j < a.cols.size(); ++j)
    if (a.cols[j]) r.cols.push_back(static_cast<Index>(j));
  if (r.empty()) return Rectangle{};
  return r;
}

}  // namespace

OracleOutcome oracle_heuristic(const RealMatrix& g, const OracleConfig& raw_cfg) {
  const OracleConfig cfg = raw_cfg.validated();
  Rng rng(cfg.seed);
  const int n = g.rows();

  const std::vector<double> v = top_right_singular_vector(g, rng);
  std::vector<Mask> spectral_starts;
  if (!v.empty()) {
    Mask pos(static_cast<std::size_t>(n), 0);
    Mask neg(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      double u = 0.0;
      for (int j = 0; j < g.cols(); ++j) u += g.at(i, j) * v[static_cast<std::size_t>(j)];
      pos[static_cast<std::size_t>(i)] = u > 0.0;
      neg[static_cast<std::size_t>(i)] = u < 0.0;
    }
    spectral_starts.push_back(std::move(pos));
    spectral_starts.push_back(std::move(neg));
  }

  Rectangle best;
  double best_value = 0.0;
  auto offer = [&](const Ascent& a) {
    Rectangle r = to_rectangle(a);
    const double value = std::abs(sum_over(g, r));
    if (value > best_value + kTolerance ||
        (value >= best_value - kTolerance && witness_less(r, best))) {
      best = std::move(r);
      best_value = value;
    }
  };

  for (const double sign : {1.0, -1.0}) {
    const RealMatrix h = sign > 0 ? g : g.negated();
    for (const Mask& start : spectral_starts) offer(ascend(h, start, cfg.max_iters));
    offer(ascend(h, Mask(static_cast<std::size_t>(n), 1), cfg.max_iters));
    for (int r = 0; r < cfg.restarts; ++r) {
      Mask start(static_cast<std::size_t>(n), 0);
      for (char& x : start) x = coin(rng);
      offer(ascend(h, std::move(start), cfg.max_iters));
    }
  }
  return OracleOutcome{std::move(best), best_value, cfg.alpha_claim};
}

OracleOutcome oracle_dispatch(const RealMatrix& g, const OracleConfig& raw_cfg) {
  const OracleConfig cfg = raw_cfg.validated();
  if (cfg.kind == OracleKind::exact) return oracle_exact(g, cfg.exhaustive_limit);
  return oracle_heuristic(g, cfg);
}

}  // namespace lpreg
