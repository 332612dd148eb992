#include "lpreg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "lpreg/error.hpp"

namespace lpreg {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next line with content, split on whitespace; false at end of input.
  bool next(std::vector<std::string>& tokens) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream split(raw);
      tokens.clear();
      for (std::string t; split >> t;) tokens.push_back(std::move(t));
      if (!tokens.empty()) return true;
    }
    return false;
  }

  int line() const noexcept { return line_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  long long integer(const std::string& token) const {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) fail("expected an integer, got '" + token + "'");
    return v;
  }

  double real(const std::string& token) const {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v))
      fail("expected a real number, got '" + token + "'");
    return v;
  }

  int positive(const std::string& token, const char* what) const {
    const long long v = integer(token);
    if (v <= 0 || v > 1000000000) fail(std::string(what) + " must be a positive integer");
    return static_cast<int>(v);
  }

  /// 1-based index in [1, n], returned 0-based.
  Index index(const std::string& token, int n) const {
    const long long v = integer(token);
    if (v < 1 || v > n) fail("index " + token + " out of range [1, " + std::to_string(n) + "]");
    return static_cast<Index>(v - 1);
  }

 private:
  std::istream& in_;
  int line_ = 0;
};

template <class Reader>
auto read_file(const std::filesystem::path& path, Reader reader) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return reader(in);
}

}  // namespace

BinaryMatrix read_matrix(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> tok;
  if (!r.next(tok)) throw ParseError(r.line(), "empty input: expected header \"n1 n2\"");
  if (tok.size() != 2) r.fail("header must be \"n1 n2\"");
  const int n1 = r.positive(tok[0], "n1");
  const int n2 = r.positive(tok[1], "n2");
  std::vector<BinaryMatrix::Entry> ones;
  std::set<BinaryMatrix::Entry> seen;
  while (r.next(tok)) {
    if (tok.size() != 2) r.fail("entry must be \"i j\"");
    const BinaryMatrix::Entry e{r.index(tok[0], n1), r.index(tok[1], n2)};
    if (!seen.insert(e).second) r.fail("duplicate entry " + tok[0] + " " + tok[1]);
    ones.push_back(e);
  }
  return BinaryMatrix(n1, n2, std::move(ones));
}

BinaryMatrix read_matrix_file(const std::filesystem::path& path) {
  return read_file(path, [](std::istream& in) { return read_matrix(in); });
}

void write_matrix(std::ostream& out, const BinaryMatrix& f) {
  out << f.rows() << ' ' << f.cols() << '\n';
  for (const auto& [i, j] : f.ones()) out << i + 1 << ' ' << j + 1 << '\n';
}

WGrid read_w_grid(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> tok;
  if (!r.next(tok)) throw ParseError(r.line(), "empty input: expected header \"m\"");
  if (tok.size() != 1) r.fail("header must be \"m\"");
  WGrid w;
  w.m = r.positive(tok[0], "m");
  for (int a = 0; a < w.m; ++a) {
    if (!r.next(tok)) throw ParseError(r.line(), "expected " + std::to_string(w.m) + " grid rows");
    if (static_cast<int>(tok.size()) != w.m) r.fail("grid row must have " + std::to_string(w.m) + " values");
    for (const std::string& t : tok) {
      const double v = r.real(t);
      if (v < 0.0) r.fail("grid values must be nonnegative");
      w.values.push_back(v);
    }
  }
  if (r.next(tok)) r.fail("unexpected content after the grid");
  return w;
}

WGrid read_w_grid_file(const std::filesystem::path& path) {
  return read_file(path, [](std::istream& in) { return read_w_grid(in); });
}

CSPInstance read_csp(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> tok;
  if (!r.next(tok)) throw ParseError(r.line(), "empty input: expected header \"n k\"");
  if (tok.size() != 2) r.fail("header must be \"n k\"");
  const int n = r.positive(tok[0], "n");
  const int k = r.positive(tok[1], "k");
  if (k < 2 || k > kMaxArity) r.fail("k must lie in [2, " + std::to_string(kMaxArity) + "]");
  std::vector<Constraint> constraints;
  while (r.next(tok)) {
    if (tok[0] != "vars") r.fail("expected \"vars i1 ... ik\"");
    if (static_cast<int>(tok.size()) != k + 1) r.fail("\"vars\" needs exactly k indices");
    Constraint c;
    for (int t = 0; t < k; ++t) {
      c.vars.push_back(r.index(tok[static_cast<std::size_t>(t) + 1], n));
      if (t > 0 && c.vars[t] <= c.vars[t - 1]) r.fail("variables must be strictly increasing");
    }
    if (!r.next(tok)) throw ParseError(r.line(), "missing \"table\" line");
    if (tok[0] != "table") r.fail("expected \"table b0 ... b_{2^k-1}\"");
    if (static_cast<int>(tok.size()) != (1 << k) + 1) r.fail("\"table\" needs exactly 2^k bits");
    for (int j = 0; j < (1 << k); ++j) {
      const std::string& b = tok[static_cast<std::size_t>(j) + 1];
      if (b != "0" && b != "1") r.fail("table entries must be 0 or 1");
      if (b == "1") c.table |= TruthTable{1} << j;
    }
    if (c.table == 0) r.fail("truth table is identically zero");
    constraints.push_back(std::move(c));
  }
  return CSPInstance(n, k, std::move(constraints));
}

CSPInstance read_csp_file(const std::filesystem::path& path) {
  return read_file(path, [](std::istream& in) { return read_csp(in); });
}

void write_csp(std::ostream& out, const CSPInstance& inst) {
  out << inst.variables() << ' ' << inst.arity() << '\n';
  for (const Constraint& c : inst.constraints()) {
    out << "vars";
    for (Index v : c.vars) out << ' ' << v + 1;
    out << "\ntable";
    for (int j = 0; j < (1 << inst.arity()); ++j) out << ' ' << ((c.table >> j) & 1U);
    out << '\n';
  }
}

BinaryTensor read_tensor(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> tok;
  if (!r.next(tok)) throw ParseError(r.line(), "empty input: expected header \"k n1 ... nk\"");
  const int k = r.positive(tok[0], "k");
  if (k < 2) r.fail("tensor order must be at least 2");
  if (static_cast<int>(tok.size()) != k + 1) r.fail("header must list exactly k dimensions");
  std::vector<int> dims;
  for (int t = 0; t < k; ++t) dims.push_back(r.positive(tok[static_cast<std::size_t>(t) + 1], "dimension"));
  std::vector<Tuple> ones;
  std::set<Tuple> seen;
  while (r.next(tok)) {
    if (static_cast<int>(tok.size()) != k) r.fail("entry must have k indices");
    Tuple t;
    for (int c = 0; c < k; ++c) t.push_back(r.index(tok[static_cast<std::size_t>(c)], dims[static_cast<std::size_t>(c)]));
    if (!seen.insert(t).second) r.fail("duplicate entry");
    ones.push_back(std::move(t));
  }
  return BinaryTensor(std::move(dims), std::move(ones));
}

BinaryTensor read_tensor_file(const std::filesystem::path& path) {
  return read_file(path, [](std::istream& in) { return read_tensor(in); });
}

void write_tensor(std::ostream& out, const BinaryTensor& f) {
  out << f.order();
  for (int d : f.dims()) out << ' ' << d;
  out << '\n';
  for (const Tuple& t : f.ones()) {
    for (std::size_t c = 0; c < t.size(); ++c) out << (c ? " " : "") << t[c] + 1;
    out << '\n';
  }
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInfinity;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw InvalidArgument("bad exponent '" + text + "'");
  return v;
}

Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const IndexSet& s) {
  Json out = Json::array();
  for (Index i : s) out.push_back(i + 1);
  return out;
}

Json to_json(const Rectangle& r) { return Json{{"rows", to_json(r.rows)}, {"cols", to_json(r.cols)}}; }

Json to_json(const RectPartition& p) {
  Json out = Json::array();
  for (const Rectangle& cell : p.cells()) out.push_back(to_json(cell));
  return out;
}

Json to_json(const OracleConfig& cfg) {
  return Json{{"kind", to_string(cfg.kind)},
              {"alpha", cfg.alpha_claim},
              {"seed", cfg.seed},
              {"restarts", cfg.restarts},
              {"max_iters", cfg.max_iters},
              {"exhaustive_limit", cfg.exhaustive_limit}};
}

Json to_json(const OracleOutcome& o) {
  return Json{{"witness", to_json(o.witness)}, {"scaled_value", json_number(o.scaled_value)}, {"alpha", o.alpha}};
}

Json to_json(const DecomposeParams& p) {
  Json out{{"eps", p.eps},
           {"C", p.C},
           {"p", json_number(p.p)},
           {"a0", p.a0},
           {"p_dagger", p.p_dagger},
           {"q", json_number(p.q)},
           {"vartheta", p.vartheta},
           {"tau", p.tau},
           {"eta_exponent", json_number(p.eta_exponent)},
           {"log_eta", json_number(p.log_eta)},
           {"a1", p.a1},
           {"a2", p.a2}};
  if (!p.eta_exponent_exact.empty()) out["eta_exponent_exact"] = p.eta_exponent_exact;
  return out;
}

Json to_json(const RefineReport& r) {
  return Json{{"cells_in", r.cells_in},
              {"cells_out", r.cells_out},
              {"class_counts", r.class_counts},
              {"refines", r.refines},
              {"cell_bound", r.cell_bound},
              {"iota_out", json_number(r.iota_out)},
              {"log_iota_floor", json_number(r.log_iota_floor)},
              {"iota_bound", r.iota_bound},
              {"local_iota_min", json_number(r.local_iota_min)},
              {"local_iota_bound", r.local_iota_bound},
              {"symdiff_cells", r.symdiff_cells},
              {"symdiff_bound", r.symdiff_bound},
              {"step_on_symdiff", json_number(r.step_on_symdiff)},
              {"step_symdiff_bound", json_number(r.step_symdiff_bound)},
              {"f_on_symdiff", json_number(r.f_on_symdiff)},
              {"f_symdiff_bound", json_number(r.f_symdiff_bound)},
              {"concavity_sum", json_number(r.concavity_sum)},
              {"concavity_ok", r.concavity_ok}};
}

Json to_json(const TraceStep& s) {
  Json out{{"m", s.m}, {"cells", s.partition.size()}, {"iota", json_number(s.iota)}, {"log_iota", json_number(s.log_iota)}};
  if (s.oracle) {
    out["oracle"] = to_json(*s.oracle);
    out["residual_mass"] = json_number(s.residual_mass);
  }
  if (s.increment) {
    out["increment"] = json_number(*s.increment);
    out["increment_ok"] = s.increment_ok;
    out["chain_ok"] = s.chain_ok;
  }
  if (s.refine) out["refine"] = to_json(*s.refine);
  out["halted"] = s.halted;
  return out;
}

Json to_json(const DecompositionTrace& t) {
  Json steps = Json::array();
  for (const TraceStep& s : t.steps) steps.push_back(to_json(s));
  return Json{{"reason", to_string(t.reason)}, {"halt_step", t.halt_step}, {"steps", std::move(steps)}};
}

Json to_json(const Certificate& c) {
  Json failed = Json::array();
  for (const std::string& f : c.failed) failed.push_back(f);
  Json out{{"status", to_string(c.status)},
           {"residual_cut_norm", json_number(c.residual_cut_norm)},
           {"bound", json_number(c.bound)},
           {"failed", std::move(failed)}};
  if (c.witness) out["witness"] = to_json(*c.witness);
  return out;
}

Json to_json(const DecompositionResult& r, const DecomposeParams& params) {
  Json cuts = Json::array();
  for (const CutMatrix& cut : r.cut_matrices) {
    Json c = to_json(cut.support);
    c["c"] = cut.coefficient;
    c["exact"] = cut.exact.str();
    cuts.push_back(std::move(c));
  }
  Json out{{"params", to_json(params)},
           {"partition", to_json(r.partition)},
           {"cells", r.partition.size()},
           {"iota", json_number(iota(r.partition))},
           {"cut_matrices", std::move(cuts)},
           {"trace", to_json(r.trace)}};
  if (r.certificate) out["certificate"] = to_json(*r.certificate);
  return out;
}

Json to_json(const BoundednessVerdict& v) {
  Json out{{"bounded", v.bounded}, {"threshold", json_number(v.threshold)}, {"sampled", v.sampled}};
  if (v.violator) {
    out["violator"] = to_json(*v.violator);
    out["violator_average"] = json_number(v.violator_average);
  }
  return out;
}

Json to_json(const WitnessReport& w) {
  Json out{{"verdict", w.violated ? "violated" : "no-violation-found"},
           {"search_mode", to_string(w.mode)},
           {"partitions_checked", w.partitions_checked},
           {"threshold", json_number(w.threshold)}};
  if (w.violating_partition) out["violating_partition"] = to_json(*w.violating_partition);
  if (w.attained_lp) out["attained_lp"] = json_number(*w.attained_lp);
  return out;
}

Json to_json(const CutTensor& t) {
  Json sides = Json::array();
  for (const IndexSet& s : t.sides) sides.push_back(to_json(s));
  return Json{{"sides", std::move(sides)}, {"c", t.coefficient}};
}

Json to_json(const TensorDecomposition& d) {
  Json cuts = Json::array();
  for (const CutTensor& t : d.cuts) cuts.push_back(to_json(t));
  Json out{{"eps", d.eps},
           {"eps_top", d.eps_top},
           {"eps_side", d.eps_side},
           {"s", d.cuts.size()},
           {"top_cut_matrices", d.top_cut_matrices},
           {"product_sides", d.product_sides},
           {"rounded_sides", d.rounded_sides},
           {"complete", d.complete},
           {"status", to_string(d.status)},
           {"bound", json_number(d.bound)},
           {"log_count_target", json_number(d.log_count_target)},
           {"cut_tensors", std::move(cuts)}};
  if (d.residual_cut_norm) out["residual_cut_norm"] = json_number(*d.residual_cut_norm);
  return out;
}

Json to_json(const MaxCspResult& r) {
  Json sigma = Json::array();
  for (std::uint8_t b : r.sigma) sigma.push_back(static_cast<int>(b));
  Json out{{"sigma", std::move(sigma)},
           {"value", r.value},
           {"surrogate", json_number(r.surrogate)},
           {"accuracy", json_number(r.accuracy)},
           {"cut_tensors", r.cut_tensors},
           {"atoms", r.atoms},
           {"grid_points", r.grid_points}};
  if (r.opt) out["opt"] = *r.opt;
  if (r.ratio) out["ratio"] = json_number(*r.ratio);
  return out;
}

Json to_json(const MartingaleReport& m) {
  Json norms = Json::array();
  for (double v : m.norms) norms.push_back(json_number(v));
  return Json{{"norms", std::move(norms)},
              {"lhs", json_number(m.lhs)},
              {"rhs", json_number(m.rhs)},
              {"inequality_ok", m.inequality_ok},
              {"telescoping_ok", m.telescoping_ok}};
}

namespace {

IndexSet index_list(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(0, std::string(what) + " must be an array");
  IndexSet out;
  for (const Json& v : j) {
    if (!v.is_number_integer()) throw ParseError(0, std::string(what) + " must hold integers");
    out.push_back(v.get<Index>() - 1);
  }
  return out;
}

Rectangle rectangle_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols"))
    throw ParseError(0, "rectangle needs \"rows\" and \"cols\"");
  return Rectangle{index_list(j["rows"], "rows"), index_list(j["cols"], "cols")};
}

}  // namespace

DecompositionClaim claim_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("partition") || !j.contains("cut_matrices"))
    throw ParseError(0, "result needs \"partition\" and \"cut_matrices\"");
  DecompositionClaim claim;
  for (const Json& cell : j["partition"]) claim.cells.push_back(rectangle_from_json(cell));
  for (const Json& cut : j["cut_matrices"]) {
    if (!cut.contains("c") || !cut["c"].is_number()) throw ParseError(0, "cut matrix needs a numeric \"c\"");
    claim.cut_matrices.push_back(CutMatrix{rectangle_from_json(cut), cut["c"].get<double>(), Ratio{}});
  }
  return claim;
}

Json to_json(const RunManifest& m) {
  Json timings = Json::object();
  for (const auto& [phase, ms] : m.timings_ms) timings[phase] = ms;
  return Json{{"command", m.command},
              {"inputs", m.inputs},
              {"params", m.params},
              {"version", LPREG_VERSION},
              {"timings_ms", std::move(timings)}};
}

Json strip_timings(Json j) {
  if (j.is_object()) {
    j.erase("timings_ms");
    for (auto& [key, value] : j.items()) value = strip_timings(std::move(value));
  } else if (j.is_array()) {
    for (Json& value : j) value = strip_timings(std::move(value));
  }
  return j;
}

}  // namespace lpreg
