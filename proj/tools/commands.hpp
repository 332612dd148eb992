#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace lpreg::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kVerificationFailure = 2 };

struct OracleFlags {
  std::string kind = "exact";
  std::optional<double> alpha;
  std::uint64_t seed = 0;
  int restarts = 16;
};

struct Common {
  std::string format = "json";
  std::string out;  // empty: stdout
};

struct DecomposeArgs {
  Common common;
  OracleFlags oracle;
  std::string input;
  double eps = 0.25;
  double C = 1.0;
  std::string p = "2";
  bool verify = false;
  std::string check;
};

struct CutNormArgs {
  Common common;
  OracleFlags oracle;
  std::string input;
  bool residual = false;
};

struct CheckArgs {
  Common common;
  std::string input;
  double C = 1.0;
  double eta = 0.25;
  std::string p = "inf";
  std::string mode = "auto";
  std::int64_t budget = 10000;
  std::uint64_t seed = 0;
  int samples = 64;
};

struct GenArgs {
  std::string out;
  int n = 8;
  double density = 0.25;
  std::uint64_t seed = 0;
  std::string grid;
  bool symmetric = false;
};

struct TensorArgs {
  Common common;
  OracleFlags oracle;
  std::string input;
  double eps = 0.45;
  double C = 1.0;
  std::string p = "2";
};

struct MaxCspArgs {
  Common common;
  OracleFlags oracle;
  std::string input;
  double eps = 0.3;
  double C = 1.0;
  std::string p = "2";
};

int cmd_decompose(const DecomposeArgs& args);
int cmd_cutnorm(const CutNormArgs& args);
int cmd_check(const CheckArgs& args);
int cmd_gen(const GenArgs& args);
int cmd_tensor(const TensorArgs& args);
int cmd_maxcsp(const MaxCspArgs& args);

}  // namespace lpreg::cli
