#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <random>

#include "switchcount/function.hpp"
#include "switchcount/hypercube.hpp"
#include "switchcount/rng.hpp"

#include "oracles.hpp"

using namespace swc;

TEST_CASE("BiasParam rejects the boundary") {
  CHECK_THROWS_AS(BiasParam(0.0), std::invalid_argument);
  CHECK_THROWS_AS(BiasParam(1.0), std::invalid_argument);
  CHECK_THROWS_AS(BiasParam(-0.2), std::invalid_argument);
  CHECK(BiasParam(0.5).value() == 0.5);
}

TEST_CASE("Point and SubsetMask reject stray bits") {
  CHECK_THROWS_AS(Point(0b100, 2), std::invalid_argument);
  CHECK_THROWS_AS(SubsetMask(0b1000, 3), std::invalid_argument);
  CHECK(SubsetMask::full(3).size() == 3);
}

TEST_CASE("flip_bit and set_bit") {
  Point x(0b000, 3);
  CHECK(flip_bit(x, 2).bits == 0b010);
  CHECK(flip_bit(Point(0b111, 3), 1).bits == 0b110);
  CHECK(set_bit(Point(0b010, 3), 2, 1).bits == 0b010);
  CHECK(set_bit(Point(0b010, 3), 2, 0).bits == 0b000);
  CHECK_THROWS_AS(flip_bit(x, 4), std::out_of_range);
  CHECK_THROWS_AS(flip_bit(x, 0), std::out_of_range);

  // involution and identity-set, exhaustive for n <= 10
  for (int n = 1; n <= 10; n += 3) {
    for (std::uint64_t w = 0; w < (1ull << n); ++w) {
      Point q(w, n);
      for (int i = 1; i <= n; ++i) {
        CHECK(flip_bit(flip_bit(q, i), i) == q);
        CHECK(set_bit(q, i, q.bit(i)) == q);
        CHECK(set_bit(q, i, 1).bit(i) == 1);
      }
    }
  }
}

TEST_CASE("family evaluation matches the definitions") {
  BooleanFunction dict = BooleanFunction::dictator(3);
  CHECK(dict.evaluate(Point(0b011, 3)) == 1);
  CHECK(dict.evaluate(Point(0b110, 3)) == 0);

  BooleanFunction par = BooleanFunction::parity(2);
  CHECK(par.evaluate(Point(0b11, 2)) == 1);  // sum 2 is even
  CHECK(par.evaluate(Point(0b01, 2)) == 0);

  BooleanFunction maj = BooleanFunction::majority(3);
  CHECK(maj.evaluate(Point(0b011, 3)) == 1);
  CHECK(maj.evaluate(Point(0b100, 3)) == 0);

  CHECK_THROWS_AS(dict.evaluate(Point(0, 4)), std::invalid_argument);
}

TEST_CASE("family and table backings agree on every point") {
  for (int n : {2, 5, 9, 12}) {
    std::vector<BooleanFunction> fns = {
        BooleanFunction::dictator(n), BooleanFunction::majority(n),
        BooleanFunction::parity(n), BooleanFunction::all_and(n), BooleanFunction::any_or(n)};
    if (n % 3 == 0) fns.push_back(BooleanFunction::tribes(3, n));
    for (const auto& f : fns) {
      REQUIRE(f.has_table());
      REQUIRE(f.family().has_value());
      for (std::uint64_t x = 0; x < (1ull << n); ++x) {
        CHECK(f.table()[x] == detail::eval_family_word(*f.family(), x, n));
      }
    }
  }
}

TEST_CASE("tribes validates divisibility") {
  CHECK_THROWS_AS(BooleanFunction::tribes(4, 10), std::invalid_argument);
  BooleanFunction t = BooleanFunction::tribes(2, 6);
  CHECK(t.evaluate(Point(0b000011, 6)) == 1);  // first tribe complete
  CHECK(t.evaluate(Point(0b000101, 6)) == 0);
}

TEST_CASE("measure weights") {
  BiasParam half(0.5);
  ProductMeasure pi2(half, 2);
  for (std::uint64_t x = 0; x < 4; ++x) {
    CHECK(pi2.weight(Point(x, 2)) == Catch::Approx(0.25).margin(1e-15));
  }
  ProductMeasure pi3(BiasParam(0.3), 3);
  CHECK(pi3.weight(Point(0b101, 3)) == Catch::Approx(0.3 * 0.3 * 0.7).margin(1e-15));

  for (int n : {4, 10, 16}) {
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      ProductMeasure pi(BiasParam(p), n);
      NeumaierSum acc;
      for (std::uint64_t x = 0; x < (1ull << n); ++x) acc.add(pi.weight_word(x));
      CHECK(std::abs(acc.value() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("resample_bit semantics") {
  CounterRng rng(42);
  Point x(0b0110, 4);

  SECTION("degenerate p=1 forces the bit (test-harness path)") {
    for (int i = 1; i <= 4; ++i) {
      Point y = detail::resample_bit_raw(x, i, 1.0, rng);
      CHECK(y.bit(i) == 1);
    }
  }

  SECTION("other bits never move") {
    for (int rep = 0; rep < 2000; ++rep) {
      int i = 1 + int(rng.uniform_below(4));
      Point y = resample_bit(x, i, BiasParam(0.3), rng);
      std::uint64_t others = 0b1111ull & ~(1ull << (i - 1));
      CHECK((y.bits & others) == (x.bits & others));
    }
  }

  SECTION("change probability is 2p(1-p) under stationarity") {
    const long long draws = 100000;
    double p = 0.3;
    long long changed = 0;
    for (long long t = 0; t < draws; ++t) {
      std::uint64_t w = 0;
      for (int i = 0; i < 6; ++i) {
        if (rng.bernoulli(p)) w |= (1ull << i);
      }
      Point z(w, 6);
      int i = 1 + int(rng.uniform_below(6));
      Point y = resample_bit(z, i, BiasParam(p), rng);
      if (y.bits != z.bits) ++changed;
    }
    double q = 2 * p * (1 - p);
    double se = std::sqrt(q * (1 - q) / double(draws));
    CHECK(std::abs(double(changed) / double(draws) - q) <= 3 * se);
  }
}

TEST_CASE("is_increasing") {
  CHECK(is_increasing(BooleanFunction::majority(3)));
  CHECK(is_increasing(BooleanFunction::dictator(7)));
  CHECK(is_increasing(BooleanFunction::tribes(3, 9)));
  CHECK_FALSE(is_increasing(BooleanFunction::parity(2)));
  CHECK_FALSE(is_increasing(BooleanFunction::parity(6)));
  CHECK(is_increasing(BooleanFunction::all_and(5)));
  CHECK(is_increasing(BooleanFunction::any_or(5)));
}

TEST_CASE("nondegeneracy") {
  CHECK(nondegeneracy(BooleanFunction::dictator(5), BiasParam(0.3)).value ==
        Catch::Approx(0.3).margin(1e-14));
  CHECK(nondegeneracy(BooleanFunction::parity(2), BiasParam(0.5)).value ==
        Catch::Approx(0.5).margin(1e-14));
  // brute force over 8 points
  CHECK(nondegeneracy(BooleanFunction::majority(3), BiasParam(0.5)).value ==
        Catch::Approx(0.5).margin(1e-14));

  auto est = nondegeneracy_estimate(BooleanFunction::majority(9), BiasParam(0.5), 20000, 7);
  CHECK_FALSE(est.exact);
  CHECK(std::abs(est.value - 0.5) <= 4 * est.std_error);
}

TEST_CASE("truth table file round trip") {
  BooleanFunction f = BooleanFunction::majority(4);
  std::string path = "maj4_table.txt";
  f.save_table(path);
  BooleanFunction g = BooleanFunction::load_table(path);
  CHECK(g.n() == 4);
  CHECK(g.table() == f.table());
  std::remove(path.c_str());
}

TEST_CASE("truth table loader validates") {
  {
    std::ofstream out("bad_table.txt");
    out << "n=3\n0101\n";  // wrong length
  }
  CHECK_THROWS_AS(BooleanFunction::load_table("bad_table.txt"), std::runtime_error);
  {
    std::ofstream out("bad_table.txt");
    out << "m=3\n01010101\n";
  }
  CHECK_THROWS_AS(BooleanFunction::load_table("bad_table.txt"), std::runtime_error);
  {
    std::ofstream out("bad_table.txt");
    out << "n=2\n01x1\n";
  }
  CHECK_THROWS_AS(BooleanFunction::load_table("bad_table.txt"), std::runtime_error);
  std::remove("bad_table.txt");
}
