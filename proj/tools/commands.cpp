#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lpreg/csp.hpp"
#include "lpreg/decompose.hpp"
#include "lpreg/error.hpp"
#include "lpreg/io.hpp"
#include "lpreg/regularity.hpp"
#include "lpreg/tensor.hpp"

namespace lpreg::cli {

namespace {

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

OracleConfig make_oracle(const OracleFlags& flags) {
  OracleConfig cfg;
  cfg.kind = oracle_kind_from_string(flags.kind);
  cfg.seed = flags.seed;
  cfg.restarts = flags.restarts;
  if (cfg.kind == OracleKind::heuristic) cfg.alpha_claim = flags.alpha.value_or(kHeuristicAlphaClaim);
  return cfg.validated();
}

void write_output(const Common& common, const std::string& text) {
  if (common.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(common.out);
  if (!out) throw Error("cannot write '" + common.out + "'");
  out << text;
}

// One document per run: the manifest first, then the command's payload.
void emit(const Common& common, const RunManifest& manifest, const Json& payload,
          const std::string& text) {
  if (common.format == "text") {
    write_output(common, text);
    return;
  }
  Json doc;
  doc["manifest"] = to_json(manifest);
  for (const auto& [key, value] : payload.items()) doc[key] = value;
  write_output(common, doc.dump(2) + "\n");
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

}  // namespace

int cmd_decompose(const DecomposeArgs& args) {
  Stopwatch clock;
  RunManifest manifest{"decompose", {args.input}, {}, {}};
  const BinaryMatrix f = read_matrix_file(args.input);
  manifest.timings_ms["read"] = clock.lap_ms();

  if (!args.check.empty()) {
    manifest.inputs.push_back(args.check);
    std::ifstream in(args.check);
    if (!in) throw Error("cannot open '" + args.check + "'");
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ParseError(0, std::string("result JSON: ") + e.what());
    }
    if (!doc.contains("params")) throw ParseError(0, "result JSON has no \"params\"");
    const Json& p = doc["params"];
    const double pval = p["p"].is_string() ? parse_exponent(p["p"].get<std::string>()) : p["p"].get<double>();
    const DecomposeParams params =
        synthesize_params(p["eps"].get<double>(), p["C"].get<double>(), pval, p["a0"].get<double>());
    manifest.params = to_json(params);
    const Certificate cert = verify_claim(f, claim_from_json(doc), params);
    manifest.timings_ms["verify"] = clock.lap_ms();
    std::string text = "certificate: " + to_string(cert.status) + "\n";
    for (const std::string& clause : cert.failed) text += "failed: " + clause + "\n";
    emit(args.common, manifest, Json{{"certificate", to_json(cert)}}, text);
    return cert.status == CertificateStatus::failed ? kVerificationFailure : kOk;
  }

  const OracleConfig oracle = make_oracle(args.oracle);
  const DecomposeParams params = synthesize_params(args.eps, args.C, parse_exponent(args.p), oracle.alpha_claim);
  manifest.params = Json{{"eps", args.eps}, {"C", args.C}, {"p", args.p}, {"oracle", to_json(oracle)},
                         {"verify", args.verify}};
  DecompositionResult result = decompose(f, params, oracle);
  manifest.timings_ms["decompose"] = clock.lap_ms();
  if (args.verify) {
    result.certificate = verify_result(f, result, params, oracle.exhaustive_limit);
    manifest.timings_ms["verify"] = clock.lap_ms();
  }

  std::string text = "cells: " + std::to_string(result.partition.size()) + "\n" +
                     "iota: " + fmt(iota(result.partition)) + "\n" +
                     "halt: " + to_string(result.trace.reason) + " at m = " +
                     std::to_string(result.trace.halt_step) + " (tau = " + std::to_string(params.tau) + ")\n";
  if (result.certificate) {
    text += "certificate: " + to_string(result.certificate->status) + " residual " +
            fmt(result.certificate->residual_cut_norm) + " <= " + fmt(result.certificate->bound) + "\n";
  }
  emit(args.common, manifest, to_json(result, params), text);
  if (result.certificate && result.certificate->status == CertificateStatus::failed) return kVerificationFailure;
  return kOk;
}

int cmd_cutnorm(const CutNormArgs& args) {
  Stopwatch clock;
  const BinaryMatrix f = read_matrix_file(args.input);
  const OracleConfig oracle = make_oracle(args.oracle);
  RunManifest manifest{"cutnorm", {args.input}, Json{{"residual", args.residual}, {"oracle", to_json(oracle)}}, {}};
  manifest.timings_ms["read"] = clock.lap_ms();
  const RealMatrix g = args.residual
                           ? residual(f, conditional_expectation(f, RectPartition::trivial(f.rows(), f.cols())))
                           : RealMatrix::from_binary(f);
  const OracleOutcome outcome = oracle_dispatch(g, oracle);
  manifest.timings_ms["cutnorm"] = clock.lap_ms();
  const Json payload{{"value", json_number(outcome.scaled_value)},
                     {"exact", oracle.kind == OracleKind::exact},
                     {"witness", to_json(outcome.witness)}};
  emit(args.common, manifest, payload, fmt(outcome.scaled_value) + "\n");
  return kOk;
}

int cmd_check(const CheckArgs& args) {
  Stopwatch clock;
  const BinaryMatrix f = read_matrix_file(args.input);
  const RegularityParams params = RegularityParams::make(args.C, args.eta, parse_exponent(args.p));
  RunManifest manifest{"check", {args.input},
                       Json{{"C", args.C}, {"eta", args.eta}, {"p", args.p}, {"mode", args.mode},
                            {"budget", args.budget}, {"seed", args.seed}, {"samples", args.samples}},
                       {}};
  manifest.timings_ms["read"] = clock.lap_ms();

  const bool small = std::min(f.rows(), f.cols()) <= kBoundednessExhaustiveLimit;
  const BoundednessVerdict bounded =
      small ? is_bounded(f, args.C, args.eta) : is_bounded_sampled(f, args.C, args.eta, args.samples, args.seed);
  manifest.timings_ms["bounded"] = clock.lap_ms();

  SearchMode mode = SearchMode::random;
  if (args.mode == "grid" || (args.mode == "auto" && f.rows() <= kGridSearchLimit && f.cols() <= kGridSearchLimit))
    mode = SearchMode::grid_exhaustive;
  else if (args.mode != "random" && args.mode != "auto")
    throw InvalidArgument("--mode must be auto, grid or random");
  const WitnessReport witness = regularity_witness_search(f, params, mode, args.budget, args.seed);
  manifest.timings_ms["search"] = clock.lap_ms();

  const Json payload{{"density", density(f)},
                     {"certified_constant", json_number(certified_regularity_constant(f, params.p()))},
                     {"bounded", to_json(bounded)},
                     {"regularity", to_json(witness)}};
  const std::string text = std::string("bounded: ") + (bounded.bounded ? "yes" : "no") +
                           (bounded.sampled ? " (sampled)" : "") + "\nregularity: " +
                           (witness.violated ? "violated" : "no-violation-found") + " (" + to_string(witness.mode) +
                           ", " + std::to_string(witness.partitions_checked) + " partitions)\n";
  emit(args.common, manifest, payload, text);
  return bounded.bounded && !witness.violated ? kOk : kVerificationFailure;
}

int cmd_gen(const GenArgs& args) {
  const WGrid grid = args.grid.empty() ? WGrid::flat() : read_w_grid_file(args.grid);
  const WRandomSample sample = generate_w_random(grid, args.n, args.density, args.seed, args.symmetric);
  std::ostringstream text;
  text << "# lpreg gen n=" << args.n << " density=" << args.density << " seed=" << args.seed
       << " grid=" << (args.grid.empty() ? "flat" : args.grid) << " symmetric=" << (args.symmetric ? 1 : 0)
       << " clipped=" << sample.clipped << '\n';
  write_matrix(text, sample.matrix);
  if (sample.clipped > 0) std::cerr << "gen: clipped " << sample.clipped << " probabilities to 1\n";
  write_output(Common{"text", args.out}, text.str());
  return kOk;
}

int cmd_tensor(const TensorArgs& args) {
  Stopwatch clock;
  const BinaryTensor f = read_tensor_file(args.input);
  const OracleConfig oracle = make_oracle(args.oracle);
  RunManifest manifest{"tensor", {args.input},
                       Json{{"eps", args.eps}, {"C", args.C}, {"p", args.p}, {"oracle", to_json(oracle)}}, {}};
  manifest.timings_ms["read"] = clock.lap_ms();
  const TensorDecomposition d = tensor_decompose(f, args.eps, args.C, parse_exponent(args.p), oracle);
  manifest.timings_ms["decompose"] = clock.lap_ms();
  std::string text = "cut tensors: " + std::to_string(d.cuts.size()) + "\nstatus: " + to_string(d.status) + "\n";
  if (d.residual_cut_norm) text += "residual: " + fmt(*d.residual_cut_norm) + " <= " + fmt(d.bound) + "\n";
  emit(args.common, manifest, to_json(d), text);
  return d.status == CertificateStatus::failed ? kVerificationFailure : kOk;
}

int cmd_maxcsp(const MaxCspArgs& args) {
  Stopwatch clock;
  const CSPInstance inst = read_csp_file(args.input);
  const OracleConfig oracle = make_oracle(args.oracle);
  RunManifest manifest{"maxcsp", {args.input},
                       Json{{"eps", args.eps}, {"C", args.C}, {"p", args.p}, {"oracle", to_json(oracle)}}, {}};
  manifest.timings_ms["read"] = clock.lap_ms();
  const MaxCspResult r = approx_max_csp(inst, args.eps, args.C, parse_exponent(args.p), oracle);
  manifest.timings_ms["solve"] = clock.lap_ms();
  std::string text = "value: " + std::to_string(r.value) + "\n";
  if (r.opt) text += "opt: " + std::to_string(*r.opt) + "\nratio: " + fmt(*r.ratio) + "\n";
  emit(args.common, manifest, to_json(r), text);
  if (r.ratio && *r.ratio < 1.0 - args.eps) return kVerificationFailure;
  return kOk;
}

}  // namespace lpreg::cli
