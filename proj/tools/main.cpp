// lpreg: decompose sparse {0,1} matrices into cut matrices, check
// pseudorandomness, generate W-random inputs, and run the tensor and
// MAX-CSP applications. Exit codes: 0 ok, 1 usage or input error,
// 2 a certificate or check failed.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "lpreg/error.hpp"

namespace {

using namespace lpreg::cli;

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--out", common.out, "Write output to FILE instead of stdout");
}

void add_oracle(CLI::App* cmd, OracleFlags& flags) {
  cmd->add_option("--oracle", flags.kind, "Cut-norm oracle")->check(CLI::IsMember({"exact", "heuristic"}));
  cmd->add_option("--alpha", flags.alpha, "Guarantee factor claimed by the heuristic oracle");
  cmd->add_option("--seed", flags.seed, "Seed for all randomness");
  cmd->add_option("--restarts", flags.restarts, "Random restarts of the heuristic oracle");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algorithmic regularity lemma for L_p regular sparse matrices"};
  app.set_version_flag("--version", LPREG_VERSION);
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* dec_cmd = app.add_subcommand("decompose", "Decompose a matrix into cut matrices");
  dec_cmd->add_option("input", dec.input, "Matrix file")->required();
  dec_cmd->add_option("--eps", dec.eps, "Accuracy in (0, 1/2)");
  dec_cmd->add_option("--C", dec.C, "Regularity constant C >= 1");
  dec_cmd->add_option("--p", dec.p, "Exponent p in (1, inf]");
  dec_cmd->add_flag("--verify", dec.verify, "Certify the residual cut norm exactly");
  dec_cmd->add_option("--check", dec.check, "Re-verify a saved result JSON against the matrix");
  add_oracle(dec_cmd, dec.oracle);
  add_common(dec_cmd, dec.common);

  CutNormArgs cut;
  auto* cut_cmd = app.add_subcommand("cutnorm", "Cut norm of a matrix or of its density residual");
  cut_cmd->add_option("input", cut.input, "Matrix file")->required();
  cut_cmd->add_flag("--residual", cut.residual, "Use f minus its density");
  add_oracle(cut_cmd, cut.oracle);
  add_common(cut_cmd, cut.common);

  CheckArgs chk;
  auto* chk_cmd = app.add_subcommand("check", "Boundedness and regularity-violation search");
  chk_cmd->add_option("input", chk.input, "Matrix file")->required();
  chk_cmd->add_option("--C", chk.C, "Constant C >= 1");
  chk_cmd->add_option("--eta", chk.eta, "Minimum side density in (0, 1]");
  chk_cmd->add_option("--p", chk.p, "Exponent p in (1, inf]");
  chk_cmd->add_option("--mode", chk.mode, "Partition search: auto, grid or random");
  chk_cmd->add_option("--budget", chk.budget, "Partitions sampled in random mode");
  chk_cmd->add_option("--samples", chk.samples, "Ascent starts when boundedness is sampled");
  chk_cmd->add_option("--seed", chk.seed, "Seed for all randomness");
  add_common(chk_cmd, chk.common);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a W-random matrix");
  gen_cmd->add_option("--n", gen.n, "Matrix side")->required();
  gen_cmd->add_option("--density", gen.density, "Target density")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--grid", gen.grid, "W grid file (default: flat)");
  gen_cmd->add_flag("--symmetric", gen.symmetric, "Mirror the upper triangle");
  gen_cmd->add_option("--out", gen.out, "Write to FILE instead of stdout");

  TensorArgs ten;
  auto* ten_cmd = app.add_subcommand("tensor", "Decompose a {0,1} tensor into cut tensors");
  ten_cmd->add_option("input", ten.input, "Tensor file")->required();
  ten_cmd->add_option("--eps", ten.eps, "Accuracy in (0, 1/2)");
  ten_cmd->add_option("--C", ten.C, "Regularity constant C >= 1");
  ten_cmd->add_option("--p", ten.p, "Exponent p in (1, inf]");
  add_oracle(ten_cmd, ten.oracle);
  add_common(ten_cmd, ten.common);

  MaxCspArgs csp;
  auto* csp_cmd = app.add_subcommand("maxcsp", "Approximate MAX-CSP via type-tensor decomposition");
  csp_cmd->add_option("input", csp.input, "CSP file")->required();
  csp_cmd->add_option("--eps", csp.eps, "Accuracy in (0, 1/2)");
  csp_cmd->add_option("--C", csp.C, "Regularity constant C >= 1");
  csp_cmd->add_option("--p", csp.p, "Exponent p in (1, inf]");
  add_oracle(csp_cmd, csp.oracle);
  add_common(csp_cmd, csp.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*dec_cmd) return cmd_decompose(dec);
    if (*cut_cmd) return cmd_cutnorm(cut);
    if (*chk_cmd) return cmd_check(chk);
    if (*gen_cmd) return cmd_gen(gen);
    if (*ten_cmd) return cmd_tensor(ten);
    if (*csp_cmd) return cmd_maxcsp(csp);
  } catch (const lpreg::Error& e) {
    std::cerr << "lpreg: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
