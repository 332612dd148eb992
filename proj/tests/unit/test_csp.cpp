#include <doctest.h>

#include <cmath>

#include "../support/brute.hpp"
#include "lpreg/csp.hpp"
#include "lpreg/error.hpp"

using namespace lpreg;

namespace {

constexpr TruthTable kAnd = 0b1000;
constexpr TruthTable kXor = 0b0110;
constexpr TruthTable kOr = 0b1110;

CSPInstance random_instance(int n, int m, Rng& rng) {
  std::vector<Constraint> cs;
  for (int c = 0; c < m; ++c) {
    int a = static_cast<int>(uniform_below(rng, n)), b = static_cast<int>(uniform_below(rng, n - 1));
    if (b >= a) ++b;
    cs.push_back(Constraint{1 + uniform_below(rng, 15), {std::min(a, b), std::max(a, b)}});
  }
  return CSPInstance(n, 2, cs);
}

}  // namespace

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(CSPInstance(3, 1, {}), InvalidArgument);
  CHECK_THROWS_AS(CSPInstance(3, 7, {}), InvalidArgument);
  CHECK_THROWS_AS(CSPInstance(3, 2, {Constraint{0, {0, 1}}}), InvalidArgument);
  CHECK_THROWS_AS(CSPInstance(3, 2, {Constraint{16, {0, 1}}}), InvalidArgument);
  CHECK_THROWS_AS(CSPInstance(3, 2, {Constraint{kAnd, {1, 0}}}), InvalidArgument);
  CHECK_THROWS_AS(CSPInstance(3, 2, {Constraint{kAnd, {1, 3}}}), InvalidArgument);
  CHECK_THROWS_AS(CSPInstance(3, 2, {Constraint{kAnd, {0, 1, 2}}}), InvalidArgument);
}

TEST_CASE("type tensors") {
  const auto single = build_type_tensors(CSPInstance(2, 2, {Constraint{kAnd, {0, 1}}}));
  REQUIRE(single.size() == 1);
  CHECK(single.at(kAnd).count() == 1);
  CHECK(single.at(kAnd).at(Tuple{0, 1}));
  CHECK(build_type_tensors(CSPInstance(4, 2, {})).empty());
  const auto two = build_type_tensors(CSPInstance(2, 2, {Constraint{kAnd, {0, 1}}, Constraint{kXor, {0, 1}}}));
  CHECK(two.size() == 2);
  CHECK(two.at(kXor).count() == 1);
  const auto k3 = build_type_tensors(CSPInstance(4, 3, {Constraint{0x80, {0, 2, 3}}}));
  CHECK(k3.at(0x80).dims().size() == 3);
  CHECK(k3.at(0x80).at(Tuple{0, 2, 3}));
}

TEST_CASE("evaluate assignments") {
  const CSPInstance a(2, 2, {Constraint{kAnd, {0, 1}}});
  CHECK(evaluate_assignment(a, {1, 1}) == 1);
  CHECK(evaluate_assignment(a, {1, 0}) == 0);
  const CSPInstance ax(2, 2, {Constraint{kAnd, {0, 1}}, Constraint{kXor, {0, 1}}});
  CHECK(evaluate_assignment(ax, {0, 0}) == 0);
  CHECK(evaluate_assignment(ax, {0, 1}) == 1);
  CHECK(evaluate_assignment(ax, {1, 0}) == 1);
  CHECK(evaluate_assignment(ax, {1, 1}) == 1);
  // the first variable is the most significant bit
  const CSPInstance imp(2, 2, {Constraint{0b0010, {0, 1}}});
  CHECK(evaluate_assignment(imp, {0, 1}) == 1);
  CHECK(evaluate_assignment(imp, {1, 0}) == 0);
  CHECK_THROWS_AS(evaluate_assignment(a, {1}), InvalidArgument);
}

TEST_CASE("brute-force optimum") {
  const OptResult a = opt_bruteforce(CSPInstance(2, 2, {Constraint{kAnd, {0, 1}}}));
  CHECK(a.value == 1);
  CHECK(a.sigma == Assignment{1, 1});
  const OptResult ax = opt_bruteforce(CSPInstance(2, 2, {Constraint{kAnd, {0, 1}}, Constraint{kXor, {0, 1}}}));
  CHECK(ax.value == 1);
  CHECK(ax.sigma == Assignment{0, 1});
  CHECK(opt_bruteforce(CSPInstance(3, 2, {})).value == 0);
  CHECK_THROWS_AS(opt_bruteforce(CSPInstance(25, 2, {})), LimitExceeded);

  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const CSPInstance inst = random_instance(3 + static_cast<int>(uniform_below(rng, 8)), 12, rng);
    const OptResult r = opt_bruteforce(inst);
    CHECK(r.value == brute::csp_opt(inst));
    CHECK(evaluate_assignment(inst, r.sigma) == r.value);
  }
}

TEST_CASE("approximate MAX-CSP examples") {
  const CSPInstance a(2, 2, {Constraint{kAnd, {0, 1}}});
  const MaxCspResult r = approx_max_csp(a, 0.25, 1.0, 2.0, OracleConfig::exact());
  CHECK(r.value == 1);
  REQUIRE(r.opt);
  CHECK(*r.opt == 1);
  CHECK(*r.ratio == 1.0);
  CHECK(r.accuracy == doctest::Approx(0.25 * std::pow(2.0, -(4 + 4 + 2))));

  const MaxCspResult e = approx_max_csp(CSPInstance(4, 2, {}), 0.3, 1.0, 2.0, OracleConfig::exact());
  CHECK(e.value == 0);
  CHECK(e.sigma.size() == 4);
  CHECK(*e.ratio == 1.0);

  const MaxCspResult o = approx_max_csp(CSPInstance(3, 2, {Constraint{kOr, {0, 1}}, Constraint{kOr, {1, 2}}}), 0.3,
                                        2.0, 2.0, OracleConfig::exact());
  CHECK(o.value == 2);
}

TEST_CASE("approximate MAX-CSP reports the true value") {
  Rng rng(30);
  for (int trial = 0; trial < 8; ++trial) {
    const CSPInstance inst = random_instance(6 + static_cast<int>(uniform_below(rng, 4)), 10, rng);
    const MaxCspResult r = approx_max_csp(inst, 0.3, 2.0, 2.0, OracleConfig::exact());
    CHECK(r.value == evaluate_assignment(inst, r.sigma));
    REQUIRE(r.opt);
    CHECK(*r.opt == brute::csp_opt(inst));
    CHECK(r.value <= *r.opt);
    const MaxCspResult again = approx_max_csp(inst, 0.3, 2.0, 2.0, OracleConfig::exact());
    CHECK(again.sigma == r.sigma);
  }
}

TEST_CASE("approximate MAX-CSP refuses an oversized grid") {
  Rng rng(1);
  const CSPInstance inst = random_instance(12, 40, rng);
  CHECK_THROWS_AS(approx_max_csp(inst, 0.3, 2.0, 2.0, OracleConfig::exact(), 1), LimitExceeded);
}
