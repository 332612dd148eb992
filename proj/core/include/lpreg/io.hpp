#pragma once

// Text formats and JSON views. Every index that crosses this boundary is
// 1-based; the library itself is 0-based.
//
//   matrix:  "n1 n2", then one "i j" line per one-entry
//   W grid:  "m", then m lines of m nonnegative reals
//   CSP:     "n k", then per constraint "vars i1 ... ik" and
//            "table b0 ... b_{2^k - 1}"
//   tensor:  "k n1 ... nk", then one line of k indices per one-entry
//
// Blank lines and anything after '#' are ignored. Malformed input throws
// ParseError carrying the offending line.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpreg/csp.hpp"
#include "lpreg/decompose.hpp"
#include "lpreg/measure.hpp"
#include "lpreg/regularity.hpp"
#include "lpreg/tensor.hpp"

namespace lpreg {

using Json = nlohmann::ordered_json;

BinaryMatrix read_matrix(std::istream& in);
BinaryMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const BinaryMatrix& f);

WGrid read_w_grid(std::istream& in);
WGrid read_w_grid_file(const std::filesystem::path& path);

CSPInstance read_csp(std::istream& in);
CSPInstance read_csp_file(const std::filesystem::path& path);
void write_csp(std::ostream& out, const CSPInstance& inst);

BinaryTensor read_tensor(std::istream& in);
BinaryTensor read_tensor_file(const std::filesystem::path& path);
void write_tensor(std::ostream& out, const BinaryTensor& f);

/// Accepts a decimal real or "inf" / "infinity".
double parse_exponent(const std::string& text);

/// Finite numbers as JSON numbers; infinities and NaN as strings.
Json json_number(double v);

Json to_json(const IndexSet& s);
Json to_json(const Rectangle& r);
Json to_json(const RectPartition& p);
Json to_json(const OracleConfig& cfg);
Json to_json(const OracleOutcome& o);
Json to_json(const DecomposeParams& p);
Json to_json(const RefineReport& r);
Json to_json(const TraceStep& s);
Json to_json(const DecompositionTrace& t);
Json to_json(const Certificate& c);
Json to_json(const DecompositionResult& r, const DecomposeParams& params);
Json to_json(const BoundednessVerdict& v);
Json to_json(const WitnessReport& w);
Json to_json(const CutTensor& t);
Json to_json(const TensorDecomposition& d);
Json to_json(const MaxCspResult& r);
Json to_json(const MartingaleReport& m);

/// Reads the "partition" and "cut_matrices" members of a decompose result.
/// Throws ParseError (line 0) on structural problems.
DecompositionClaim claim_from_json(const Json& j);

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  Json params = Json::object();
  /// Wall-clock milliseconds per phase; excluded from reproducibility checks.
  std::map<std::string, double> timings_ms;
};

Json to_json(const RunManifest& m);

/// Copy of a document with every "timings_ms" member removed.
Json strip_timings(Json j);

}  // namespace lpreg
