#include <cstdlib>

#include "cantordim/core_model.hpp"
#include "cantordim/errors.hpp"
#include "cantordim/rng.hpp"
#include "doctest.h"

using namespace cantordim;

namespace {

Rational frac(std::int64_t p, std::int64_t q) { return Rational(p, q); }

}  // namespace

TEST_CASE("validate_stochastic accepts a symmetric two-point vector") {
  const auto v = validate_stochastic({{0, 0.5}, {1, 0.5}}, 1e-12);
  CHECK(v.support_max() == 1);
  CHECK(v.support_min() == 0);
  CHECK(v[0] == 0.5);
  CHECK(v[7] == 0.0);
}

TEST_CASE("validate_stochastic reports the actual sum and never renormalizes") {
  try {
    validate_stochastic({{0, 0.5}, {1, 0.6}}, 1e-12);
    FAIL("expected SumNotOne");
  } catch (const SumNotOne& e) {
    CHECK(e.actual_sum() == doctest::Approx(1.1).epsilon(1e-15));
  }
  CHECK_THROWS_AS(validate_stochastic({{0, 0.5}, {1, 0.5 + 1e-9}}, 1e-12), SumNotOne);
}

TEST_CASE("validate_stochastic rejects negative entries and empty support") {
  try {
    validate_stochastic({{0, 1.25}, {3, -0.25}});
    FAIL("expected NegativeEntry");
  } catch (const NegativeEntry& e) {
    CHECK(e.index() == 3);
  }
  CHECK_THROWS_AS(validate_stochastic({}), EmptySupport);
  CHECK_THROWS_AS(validate_stochastic({{2, 0.0}}), EmptySupport);
}

TEST_CASE("zero entries are dropped from the stored support") {
  const auto v = validate_stochastic({{0, 0.0}, {1, 1.0}, {2, 0.0}});
  CHECK(v.entries().size() == 1);
  CHECK(v.support_min() == 1);
  CHECK(v.support_max() == 1);
}

TEST_CASE("d = {2: 2/3, 3: 1/3} is a valid base-frequency vector") {
  const auto d = StochasticVector::from_exact({{2, frac(2, 3)}, {3, frac(1, 3)}});
  CHECK(d.support_max() == 3);
  REQUIRE(d.exact());
  CHECK(d.exact()->at(3) == frac(1, 3));
  CHECK(d[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-16));
}

TEST_CASE("from_exact demands an exact unit sum") {
  CHECK_THROWS_AS(StochasticVector::from_exact({{0, frac(1, 3)}, {1, frac(1, 3)}}), SumNotOne);
  CHECK_THROWS_AS(StochasticVector::from_exact({{0, frac(4, 3)}, {1, frac(-1, 3)}}),
                  NegativeEntry);
}

TEST_CASE("base_frequencies_from_pattern counts exactly") {
  SUBCASE("pattern (2,2,3)") {
    const auto d = base_frequencies_from_pattern(BasePattern({2, 2, 3}));
    CHECK(d.exact()->at(2) == frac(2, 3));
    CHECK(d.exact()->at(3) == frac(1, 3));
  }
  SUBCASE("constant pattern (2)") {
    const auto d = base_frequencies_from_pattern(BasePattern({2}));
    CHECK(d.exact()->at(2) == Rational(1));
    CHECK(d.entries().size() == 1);
  }
  SUBCASE("pattern (2,3,4,5)") {
    const auto d = base_frequencies_from_pattern(BasePattern({2, 3, 4, 5}));
    for (std::size_t k = 2; k <= 5; ++k) CHECK(d.exact()->at(k) == frac(1, 4));
  }
}

TEST_CASE("BasePattern rejects bases below 2") {
  CHECK_THROWS_AS(BasePattern({2, 1, 3}), InvalidBase);
  CHECK_THROWS_AS(BasePattern({0}), InvalidBase);
  CHECK_THROWS_AS(BasePattern({}), InvalidBase);
}

TEST_CASE("BasePattern repeats its period") {
  const BasePattern a({2, 2, 3});
  CHECK(a.period() == 3);
  CHECK(a.base_at(0) == 2);
  CHECK(a.base_at(2) == 3);
  CHECK(a.base_at(5) == 3);
  CHECK(a.base_at(6) == 2);
  const auto counts = a.base_counts(7);
  CHECK(counts.at(2) == 5);
  CHECK(counts.at(3) == 2);
}

TEST_CASE("pattern_from_frequencies examples") {
  SUBCASE("{2: 2/3, 3: 1/3}") {
    const auto d = StochasticVector::from_exact({{2, frac(2, 3)}, {3, frac(1, 3)}});
    const auto p = pattern_from_frequencies(d);
    CHECK(p.period() == 3);
    CHECK(p.base_counts(3).at(2) == 2);
    CHECK(p.base_counts(3).at(3) == 1);
  }
  SUBCASE("{5: 1}") {
    const auto d = StochasticVector::from_exact({{5, Rational(1)}});
    CHECK(pattern_from_frequencies(d) == BasePattern({5}));
  }
  SUBCASE("{2: 1/2, 3: 1/2}") {
    const auto d = StochasticVector::from_exact({{2, frac(1, 2)}, {3, frac(1, 2)}});
    CHECK(pattern_from_frequencies(d) == BasePattern({2, 3}));
  }
  SUBCASE("decimal doubles that are exactly representable rationals") {
    const auto d = validate_stochastic({{2, 0.25}, {4, 0.75}});
    const auto p = pattern_from_frequencies(d);
    CHECK(p.period() == 4);
    CHECK(p.base_counts(4).at(4) == 3);
  }
}

TEST_CASE("pattern_from_frequencies errors") {
  SUBCASE("irrational-looking double") {
    const double x = 1.0 / 3.14159265358979;
    const auto d = validate_stochastic({{2, x}, {3, 1.0 - x}});
    CHECK_THROWS_AS(pattern_from_frequencies(d, 1000), IrrationalFrequency);
  }
  SUBCASE("denominator above the limit") {
    const auto d = StochasticVector::from_exact({{2, frac(1, 1009)}, {3, frac(1008, 1009)}});
    try {
      pattern_from_frequencies(d, 1000);
      FAIL("expected DenominatorTooLarge");
    } catch (const DenominatorTooLarge& e) {
      CHECK(e.denominator() == 1009);
    }
    CHECK(pattern_from_frequencies(d, 1009).period() == 1009);
  }
  SUBCASE("mass below base 2") {
    const auto d = StochasticVector::from_exact({{1, frac(1, 2)}, {3, frac(1, 2)}});
    CHECK_THROWS_AS(pattern_from_frequencies(d), InvalidBase);
  }
}

TEST_CASE("pattern round trip and apportionment error on random rational vectors") {
  Rng rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t bases = 1 + rng.below(6);
    const std::int64_t q = 1 + static_cast<std::int64_t>(rng.below(60));
    // Random composition of q into `bases` positive-or-zero parts over bases 2..
    std::vector<std::int64_t> parts(bases, 0);
    for (std::int64_t u = 0; u < q; ++u) ++parts[rng.below(bases)];
    StochasticVector::ExactEntries exact;
    for (std::size_t i = 0; i < bases; ++i) {
      if (parts[i] > 0) exact.emplace(2 + 3 * i, Rational(parts[i], q));
    }
    const auto d = StochasticVector::from_exact(exact);
    const auto pattern = pattern_from_frequencies(d);

    // Round trip: base_frequencies_from_pattern . pattern_from_frequencies = id.
    const auto back = base_frequencies_from_pattern(pattern);
    CHECK(*back.exact() == *d.exact());

    // D_k(n)/n is exact at multiples of the period, within #bases/n elsewhere.
    const auto distinct = static_cast<double>(exact.size());
    for (std::uint64_t n = 1; n <= 3 * pattern.period(); ++n) {
      const auto counts = pattern.base_counts(n);
      for (const auto& [k, dk] : exact) {
        const auto it = counts.find(static_cast<std::uint32_t>(k));
        const std::int64_t c = it == counts.end() ? 0 : static_cast<std::int64_t>(it->second);
        const Rational err = Rational(c, static_cast<std::int64_t>(n)) - dk;
        if (n % pattern.period() == 0) {
          CHECK(err.numerator() == 0);
        } else {
          CHECK(std::abs(to_double(err)) <= distinct / static_cast<double>(n));
        }
      }
    }
  }
}

TEST_CASE("FrequencyMatrix invariants") {
  CHECK_NOTHROW(FrequencyMatrix(FrequencyMatrix::Rows{{2, {0.5, 0.5}}, {3, {0.2, 0.3, 0.5}}}));
  CHECK_THROWS_AS(FrequencyMatrix(FrequencyMatrix::Rows{{2, {0.5, 0.5, 0.0}}}), InvalidMatrix);
  CHECK_THROWS_AS(FrequencyMatrix(FrequencyMatrix::Rows{{2, {1.2, -0.2}}}), InvalidMatrix);
  CHECK_THROWS_AS(FrequencyMatrix(FrequencyMatrix::Rows{{2, {0.5, 0.6}}}), InvalidMatrix);
  CHECK_THROWS_AS(FrequencyMatrix(FrequencyMatrix::Rows{{1, {1.0}}}), InvalidMatrix);

  const FrequencyMatrix p({{3, {0.2, 0.3, 0.5}}});
  CHECK(p.has_row(3));
  CHECK_FALSE(p.has_row(2));
  CHECK(p.at(3, 2) == 0.5);
  CHECK(p.at(3, 3) == 0.0);
  CHECK(p.at(2, 0) == 0.0);
  CHECK_THROWS_AS(p.row(2), InvalidMatrix);
}
