#include <doctest.h>

#include <cmath>

#include "../support/brute.hpp"
#include "lpreg/error.hpp"
#include "lpreg/regularity.hpp"

using namespace lpreg;

TEST_CASE("exponents and parameter validation") {
  CHECK(dagger_exponent(1.5) == 1.5);
  CHECK(dagger_exponent(kInfinity) == 2.0);
  CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0));
  CHECK(conjugate_exponent(1.5) == doctest::Approx(3.0));
  CHECK(conjugate_exponent(kInfinity) == 1.0);
  const RegularityParams rp = RegularityParams::make(2.0, 0.25, 1.5);
  CHECK(rp.q() == doctest::Approx(3.0));
  CHECK(RegularityParams::make(1.0, 1.0, kInfinity).q() == doctest::Approx(2.0));
  CHECK_THROWS_AS(RegularityParams::make(0.5, 0.25, 2.0), InvalidArgument);
  CHECK_THROWS_AS(RegularityParams::make(1.0, 0.0, 2.0), InvalidArgument);
  CHECK_THROWS_AS(RegularityParams::make(1.0, 1.5, 2.0), InvalidArgument);
  CHECK_THROWS_AS(RegularityParams::make(1.0, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("is_bounded examples") {
  CHECK(is_bounded(BinaryMatrix::full(4, 5), 1.0, 0.2).bounded);
  const BoundednessVerdict id = is_bounded(BinaryMatrix::identity(2), 1.0, 0.5);
  CHECK_FALSE(id.bounded);
  REQUIRE(id.violator);
  CHECK(*id.violator == make_rectangle({0}, {0}));
  CHECK(id.violator_average == 1.0);
  CHECK(id.threshold == 0.5);
  CHECK(is_bounded(BinaryMatrix::empty(3, 3), 1.0, 0.1).bounded);
  CHECK_THROWS_AS(is_bounded(BinaryMatrix::full(16, 16), 1.0, 0.5), LimitExceeded);
}

TEST_CASE("is_bounded agrees with full enumeration") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int n1 = 2 + static_cast<int>(uniform_below(rng, 5));
    const int n2 = 2 + static_cast<int>(uniform_below(rng, 5));
    const BinaryMatrix f = brute::random_matrix(n1, n2, 0.35, rng);
    for (double C : {1.0, 1.5, 2.5})
      for (double eta : {0.2, 0.34, 0.5}) CHECK(is_bounded(f, C, eta).bounded == brute::bounded(f, C, eta));
  }
}

TEST_CASE("sampled boundedness never reports a false violation") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryMatrix f = brute::random_matrix(7, 7, 0.3, rng);
    const BoundednessVerdict v = is_bounded_sampled(f, 1.2, 0.3, 16, static_cast<std::uint64_t>(trial));
    CHECK(v.sampled);
    if (!v.bounded) {
      REQUIRE(v.violator);
      CHECK(static_cast<double>(brute::rect_count(f, *v.violator)) / static_cast<double>(v.violator->size()) >
            1.2 * density(f));
      CHECK_FALSE(brute::bounded(f, 1.2, 0.3));
    }
  }
}

TEST_CASE("regularity witness search examples") {
  const WitnessReport ones = regularity_witness_search(BinaryMatrix::full(4, 4), RegularityParams::make(1.0, 0.25, kInfinity),
                                                       SearchMode::grid_exhaustive);
  CHECK_FALSE(ones.violated);
  CHECK(ones.partitions_checked == 15 * 15);

  const WitnessReport id = regularity_witness_search(BinaryMatrix::identity(2), RegularityParams::make(1.0, 0.5, kInfinity),
                                                     SearchMode::grid_exhaustive);
  CHECK(id.violated);
  REQUIRE(id.violating_partition);
  CHECK(id.violating_partition->size() == 4);
  CHECK(*id.attained_lp == 1.0);

  Rng rng(6);
  const BinaryMatrix f = brute::random_matrix(6, 6, 0.3, rng);
  const double c = 1.0 / density(f);
  CHECK_FALSE(regularity_witness_search(f, RegularityParams::make(c, 1.0 / 6.0, kInfinity), SearchMode::grid_exhaustive).violated);
  CHECK_FALSE(regularity_witness_search(f, RegularityParams::make(c, 1.0 / 6.0, 2.0), SearchMode::random, 500, 3).violated);

  CHECK_THROWS_AS(regularity_witness_search(BinaryMatrix::full(9, 9), RegularityParams::make(1.0, 0.5, 2.0),
                                            SearchMode::grid_exhaustive),
                  LimitExceeded);
  CHECK_THROWS_AS(regularity_witness_search(f, RegularityParams::make(1.0, 0.5, 2.0), SearchMode::random, 0), InvalidArgument);
}

TEST_CASE("violations are genuine and monotone in p") {
  Rng rng(12);
  int violations = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const BinaryMatrix f = brute::random_matrix(5, 5, 0.3, rng);
    if (f.count() == 0) continue;
    const WitnessReport w =
        regularity_witness_search(f, RegularityParams::make(1.6, 0.2, 1.5), SearchMode::grid_exhaustive);
    if (!w.violated) continue;
    ++violations;
    const RectPartition& p = *w.violating_partition;
    CHECK(iota(p) >= 0.2 - 1e-12);
    CHECK(brute::step_norm(f, p, 1.5) > 1.6 * density(f));
    for (double e : {2.0, 3.0, kInfinity}) CHECK(brute::step_norm(f, p, e) > 1.6 * density(f));
  }
  CHECK(violations > 0);
}

TEST_CASE("random split partitions respect side minima and step L1 equals density") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const RectPartition p = random_split_partition(9, 7, 2, 3, 6, rng);
    for (const Rectangle& cell : p.cells()) {
      CHECK(cell.rows.size() >= 2);
      CHECK(cell.cols.size() >= 3);
    }
    const BinaryMatrix f = brute::random_matrix(9, 7, 0.3, rng);
    double l1 = 0.0;
    const StepMatrix s = conditional_expectation(f, p);
    for (std::size_t c = 0; c < p.size(); ++c) l1 += s.value(c) * p.measure(c);
    CHECK(l1 == doctest::Approx(density(f)).epsilon(1e-12));
  }
}

TEST_CASE("holder bound examples") {
  CHECK(holder_bound_check(BinaryMatrix::full(4, 4), RegularityParams::make(1.0, 0.1, 2.0)).holds);
  CHECK(holder_bound_check(BinaryMatrix::empty(4, 4), RegularityParams::make(1.0, 0.1, 2.0)).holds);
  const HolderReport bad = holder_bound_check(BinaryMatrix(4, 4, {{0, 0}}), RegularityParams::make(1.0, 0.01, 2.0));
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.counterexample);
  CHECK(bad.lhs > bad.rhs);
}

TEST_CASE("holder bound holds whenever the partition search finds nothing") {
  Rng rng(44);
  int regular = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const BinaryMatrix f = brute::random_matrix(6, 6, 0.5, rng);
    if (f.count() == 0) continue;
    const RegularityParams rp = RegularityParams::make(1.5, 1.0 / 6.0, 2.0);
    if (regularity_witness_search(f, rp, SearchMode::grid_exhaustive).violated) continue;
    if (regularity_witness_search(f, rp, SearchMode::random, 2000, 1).violated) continue;
    ++regular;
    CHECK(holder_bound_check(f, rp).holds);
  }
  CHECK(regular > 0);
}

TEST_CASE("certified constant makes every partition pass") {
  Rng rng(50);
  const BinaryMatrix f = brute::random_matrix(6, 5, 0.3, rng);
  for (double p : {1.5, 2.0, kInfinity}) {
    const double c = certified_regularity_constant(f, p);
    CHECK(c >= 1.0);
    CHECK_FALSE(regularity_witness_search(f, RegularityParams::make(c, 0.2, p), SearchMode::grid_exhaustive).violated);
  }
  CHECK(certified_regularity_constant(BinaryMatrix::full(3, 3), 2.0) == doctest::Approx(1.0));
  CHECK(certified_regularity_constant(BinaryMatrix::identity(4), kInfinity) == doctest::Approx(4.0));
  CHECK(certified_regularity_constant(BinaryMatrix::identity(4), 2.0) == doctest::Approx(2.0));
}

TEST_CASE("boundedness audit examples") {
  CHECK(boundedness_vs_regularity_audit(BinaryMatrix::full(4, 4), 1.0, 0.25).ok());
  CHECK(boundedness_vs_regularity_audit(BinaryMatrix::empty(4, 4), 1.0, 0.25).ok());
  Rng rng(60);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryMatrix f = brute::random_matrix(6, 6, 0.4, rng);
    CHECK(boundedness_vs_regularity_audit(f, 2.0, 1.0 / 3.0).ok());
  }
}

TEST_CASE("W-random generator") {
  CHECK(generate_w_random(WGrid::flat(), 10, 0.0, 1).matrix.count() == 0);
  const WRandomSample a = generate_w_random(WGrid::flat(), 200, 0.1, 7);
  const double sigma = std::sqrt(0.1 * 0.9 / (200.0 * 200.0));
  CHECK(std::abs(density(a.matrix) - 0.1) <= 3 * sigma);
  CHECK(a.clipped == 0);
  CHECK(generate_w_random(WGrid::flat(), 30, 0.2, 7).matrix == generate_w_random(WGrid::flat(), 30, 0.2, 7).matrix);

  const WRandomSample sym = generate_w_random(WGrid::flat(), 20, 0.3, 2, true);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) CHECK(sym.matrix.at(i, j) == sym.matrix.at(j, i));

  const WGrid skew{2, {3.0, 1.0, 1.0, 0.0}};
  const WRandomSample clipped = generate_w_random(skew, 16, 0.9, 3);
  CHECK(clipped.clipped > 0);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(clipped.matrix.at(i, j));
  for (int i = 8; i < 16; ++i)
    for (int j = 8; j < 16; ++j) CHECK_FALSE(clipped.matrix.at(i, j));

  CHECK_THROWS_AS(generate_w_random(WGrid{2, {1.0, -1.0, 1.0, 1.0}}, 8, 0.1, 0), InvalidArgument);
  CHECK_THROWS_AS(generate_w_random(WGrid{1, {0.0}}, 8, 0.1, 0), InvalidArgument);
  CHECK_THROWS_AS(generate_w_random(WGrid::flat(), 8, 1.5, 0), InvalidArgument);
}

TEST_CASE("flat W-random matrices at n = 64 have genuinely dense 16 x 16 blocks") {
  // At this size the densest quarter-by-quarter block of G(64, 64, 0.1)
  // sits near density 0.3, so (2, 1/4)-boundedness fails; every reported
  // violator must check out entry by entry.
  int violated = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BinaryMatrix f = generate_w_random(WGrid::flat(), 64, 0.1, seed).matrix;
    const BoundednessVerdict v = is_bounded_sampled(f, 2.0, 0.25, 32, seed);
    if (v.bounded) continue;
    ++violated;
    REQUIRE(v.violator);
    CHECK(v.violator->rows.size() >= 16);
    CHECK(v.violator->cols.size() >= 16);
    const double avg = static_cast<double>(brute::rect_count(f, *v.violator)) / static_cast<double>(v.violator->size());
    CHECK(avg == doctest::Approx(v.violator_average));
    CHECK(avg > 2.0 * density(f));
  }
  CHECK(violated > 0);
}
