#include <doctest.h>

#include <sstream>

#include "lpreg/error.hpp"
#include "lpreg/io.hpp"

using namespace lpreg;

namespace {

template <class F>
int parse_error_line(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

BinaryMatrix matrix_from(const std::string& text) {
  std::istringstream in(text);
  return read_matrix(in);
}

}  // namespace

TEST_CASE("matrix text round trip with comments") {
  const BinaryMatrix f = matrix_from("# identity\n\n2 3  # header\n1 1\n2 3 # last\n");
  CHECK(f == BinaryMatrix(2, 3, {{0, 0}, {1, 2}}));
  std::ostringstream out;
  write_matrix(out, f);
  CHECK(out.str() == "2 3\n1 1\n2 3\n");
  CHECK(matrix_from(out.str()) == f);
}

TEST_CASE("malformed matrices carry the line number") {
  CHECK(parse_error_line([] { matrix_from(""); }) == 0);
  CHECK(parse_error_line([] { matrix_from("2\n"); }) == 1);
  CHECK(parse_error_line([] { matrix_from("2 2\n1 1\n3 1\n"); }) == 3);
  CHECK(parse_error_line([] { matrix_from("2 2\n1 1\n\n1 1\n"); }) == 4);
  CHECK(parse_error_line([] { matrix_from("2 x\n"); }) == 1);
  CHECK(parse_error_line([] { matrix_from("2 2\n0 1\n"); }) == 2);
  CHECK(parse_error_line([] { matrix_from("2 2\n1 1 1\n"); }) == 2);
  CHECK_THROWS_AS(read_matrix_file("/nonexistent/matrix.txt"), Error);
}

TEST_CASE("W grid format") {
  std::istringstream in("2\n1 0.5\n0.5 2\n");
  const WGrid w = read_w_grid(in);
  CHECK(w.m == 2);
  CHECK(w.at(1, 1) == 2.0);
  std::istringstream bad("2\n1 0.5\n");
  CHECK_THROWS_AS(read_w_grid(bad), ParseError);
  std::istringstream neg("1\n-1\n");
  CHECK_THROWS_AS(read_w_grid(neg), ParseError);
}

TEST_CASE("CSP format") {
  std::istringstream in("3 2\nvars 1 2\ntable 0 0 0 1\nvars 2 3\ntable 0 1 1 0\n");
  const CSPInstance inst = read_csp(in);
  REQUIRE(inst.constraints().size() == 2);
  CHECK(inst.constraints()[0] == Constraint{0b1000, {0, 1}});
  CHECK(inst.constraints()[1] == Constraint{0b0110, {1, 2}});
  std::ostringstream out;
  write_csp(out, inst);
  std::istringstream back(out.str());
  CHECK(read_csp(back).constraints() == inst.constraints());

  CHECK(parse_error_line([] {
          std::istringstream s("3 2\nvars 2 1\ntable 0 0 0 1\n");
          read_csp(s);
        }) == 2);
  CHECK(parse_error_line([] {
          std::istringstream s("3 2\nvars 1 2\ntable 0 0 0\n");
          read_csp(s);
        }) == 3);
  CHECK(parse_error_line([] {
          std::istringstream s("3 2\nvars 1 2\ntable 0 0 0 0\n");
          read_csp(s);
        }) == 3);
  CHECK(parse_error_line([] {
          std::istringstream s("3 2\nvars 1 2\n");
          read_csp(s);
        }) == 2);
}

TEST_CASE("tensor format") {
  std::istringstream in("3 2 2 2\n1 2 1\n2 2 2\n");
  const BinaryTensor t = read_tensor(in);
  CHECK(t == BinaryTensor({2, 2, 2}, {{0, 1, 0}, {1, 1, 1}}));
  std::ostringstream out;
  write_tensor(out, t);
  CHECK(out.str() == "3 2 2 2\n1 2 1\n2 2 2\n");
  CHECK(parse_error_line([] {
          std::istringstream s("3 2 2\n");
          read_tensor(s);
        }) == 1);
  CHECK(parse_error_line([] {
          std::istringstream s("2 2 2\n1 3\n");
          read_tensor(s);
        }) == 2);
}

TEST_CASE("exponents and numbers") {
  CHECK(parse_exponent("inf") == kInfinity);
  CHECK(parse_exponent("infinity") == kInfinity);
  CHECK(parse_exponent("1.5") == 1.5);
  CHECK_THROWS_AS(parse_exponent("two"), InvalidArgument);
  CHECK(json_number(kInfinity) == "inf");
  CHECK(json_number(-kInfinity) == "-inf");
  CHECK(json_number(0.5) == 0.5);
}

TEST_CASE("json views are 1-based") {
  CHECK(to_json(make_rectangle({0, 2}, {1})).dump() == R"({"rows":[1,3],"cols":[2]})");
  const DecomposeParams p = synthesize_params(0.25, 1.0, kInfinity, 1.0);
  const Json j = to_json(p);
  CHECK(j["p"] == "inf");
  CHECK(j["tau"] == 64);
  CHECK(j["eta_exponent_exact"] == "907419645122502569235665619818048563882");
}

TEST_CASE("decomposition result survives a JSON round trip") {
  std::vector<BinaryMatrix::Entry> ones;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ones.emplace_back(i, j);
  const BinaryMatrix f(8, 8, ones);
  const DecomposeParams params = synthesize_params(0.45, 2.0, 2.0, 1.0);
  const DecompositionResult r = decompose(f, params, OracleConfig::exact());
  const Json doc = Json::parse(to_json(r, params).dump());
  CHECK(doc["cells"] == 4);
  CHECK(doc["trace"]["reason"] == "general-halt");
  const DecompositionClaim claim = claim_from_json(doc);
  CHECK(claim.cells.size() == 4);
  CHECK(verify_claim(f, claim, params).status == CertificateStatus::verified);

  Json broken = doc;
  broken.erase("partition");
  CHECK_THROWS_AS(claim_from_json(broken), ParseError);
  broken = doc;
  broken["cut_matrices"][0]["c"] = "x";
  CHECK_THROWS_AS(claim_from_json(broken), ParseError);
}

TEST_CASE("manifest and timing stripping") {
  RunManifest m{"decompose", {"a.txt"}, Json{{"eps", 0.3}}, {{"read", 1.5}}};
  Json doc;
  doc["manifest"] = to_json(m);
  doc["nested"] = Json{{"timings_ms", 3}, {"keep", 1}};
  CHECK(doc["manifest"]["version"] == LPREG_VERSION);
  const Json s = strip_timings(doc);
  CHECK_FALSE(s["manifest"].contains("timings_ms"));
  CHECK_FALSE(s["nested"].contains("timings_ms"));
  CHECK(s["nested"]["keep"] == 1);
  CHECK(s["manifest"]["command"] == "decompose");
}
