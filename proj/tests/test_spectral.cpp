#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "switchcount/spectral.hpp"

#include "oracles.hpp"

using namespace swc;

TEST_CASE("chi_eval") {
  BiasParam p5(0.5);
  CHECK(chi_eval(SubsetMask::empty(4), Point(0b1010, 4), p5) == 1.0);
  CHECK(chi_eval(SubsetMask::singleton(1, 3), Point(0b001, 3), p5) == Catch::Approx(1.0));
  CHECK(chi_eval(SubsetMask::singleton(1, 3), Point(0b010, 3), p5) == Catch::Approx(-1.0));
  // direct arithmetic: ((1-0.3)/sqrt(0.21))^2 = 0.7/0.3
  CHECK(chi_eval(SubsetMask(0b11, 2), Point(0b11, 2), BiasParam(0.3)) ==
        Catch::Approx(0.7 / 0.3).margin(1e-12));
}

TEST_CASE("dictator and parity spectra") {
  BiasParam p(0.3);
  Spectrum s = transform(BooleanFunction::dictator(4), p);
  CHECK(s[0] == Catch::Approx(0.3).margin(1e-14));
  CHECK(s[1] == Catch::Approx(std::sqrt(0.21)).margin(1e-14));
  for (std::uint64_t m = 2; m < 16; ++m) CHECK(std::abs(s[m]) < 1e-14);

  Spectrum par = transform(BooleanFunction::parity(2), BiasParam(0.5));
  CHECK(par[0b00] == Catch::Approx(0.5).margin(1e-14));
  CHECK(par[0b11] == Catch::Approx(0.5).margin(1e-14));
  CHECK(std::abs(par[0b01]) < 1e-14);
  CHECK(std::abs(par[0b10]) < 1e-14);
}

TEST_CASE("butterfly equals the naive quadratic transform") {
  std::mt19937_64 gen(11);
  for (int n : {1, 3, 6, 10}) {
    BooleanFunction f = oracle::random_function(n, gen);
    for (double pv : {0.1, 0.3, 0.5, 0.9}) {
      Spectrum fast = transform(f, BiasParam(pv));
      std::vector<double> values(f.table().begin(), f.table().end());
      std::vector<double> slow = oracle::naive_transform(values, n, pv);
      for (std::uint64_t m = 0; m < slow.size(); ++m) {
        CHECK(std::abs(fast[m] - slow[m]) < 1e-12);
      }
    }
  }
}

TEST_CASE("inverse transform round trip and corruption guard") {
  std::mt19937_64 gen(12);
  for (int n : {2, 7, 12}) {
    BooleanFunction f = oracle::random_function(n, gen);
    for (double pv : {0.1, 0.5, 0.7}) {
      BooleanFunction g = inverse_transform(transform(f, BiasParam(pv)));
      CHECK(g.table() == f.table());
    }
  }

  Spectrum zero(3, 0.5, std::vector<double>(8, 0.0));
  BooleanFunction z = inverse_transform(zero);
  for (auto b : z.table()) CHECK(b == 0);

  // parity_2 spectrum reconstructs the table 1,0,0,1
  std::vector<double> coeffs = {0.5, 0.0, 0.0, 0.5};
  BooleanFunction rec = inverse_transform(Spectrum(2, 0.5, coeffs));
  CHECK(rec.table() == std::vector<std::uint8_t>{1, 0, 0, 1});

  std::vector<double> broken = {0.5, 0.2, 0.0, 0.5};
  CHECK_THROWS_AS(inverse_transform(Spectrum(2, 0.5, broken)), std::runtime_error);
}

TEST_CASE("inner product: orthonormality and f with itself") {
  BiasParam p(0.3);
  BooleanFunction dict = BooleanFunction::dictator(3);
  CHECK(inner_product(dict, dict, p) == Catch::Approx(0.3).margin(1e-14));

  int n = 6;
  for (double pv : {0.3, 0.5, 0.7}) {
    ProductMeasure pi(BiasParam(pv), n);
    double worst = 0.0;
    for (std::uint64_t s = 0; s < (1ull << n); ++s) {
      for (std::uint64_t t = s; t < (1ull << n); ++t) {
        NeumaierSum acc;
        for (std::uint64_t x = 0; x < (1ull << n); ++x) {
          acc.add(pi.weight_word(x) * oracle::chi(s, x, pv) * oracle::chi(t, x, pv));
        }
        worst = std::max(worst, std::abs(acc.value() - (s == t ? 1.0 : 0.0)));
      }
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("parseval ties coefficients to E[f]") {
  std::mt19937_64 gen(13);
  for (int n : {4, 9}) {
    BooleanFunction f = oracle::random_function(n, gen);
    for (double pv : {0.1, 0.5, 0.9}) {
      Spectrum s = transform(f, BiasParam(pv));
      NeumaierSum acc;
      for (double c : s.coeffs()) acc.add(c * c);
      CHECK(std::abs(acc.value() - nondegeneracy(f, BiasParam(pv)).value) < 1e-10);
    }
  }
}

TEST_CASE("product coefficient equals transform of the pointwise product") {
  BiasParam p5(0.5);
  BooleanFunction dict = BooleanFunction::dictator(2);
  CHECK(product_coefficient(dict, dict, SubsetMask::empty(2), p5) ==
        Catch::Approx(0.5).margin(1e-12));
  BooleanFunction par = BooleanFunction::parity(2);
  CHECK(product_coefficient(par, par, SubsetMask::empty(2), p5) ==
        Catch::Approx(0.5).margin(1e-12));

  std::mt19937_64 gen(14);
  for (int n : {3, 6, 8}) {
    BooleanFunction f = oracle::random_function(n, gen);
    BooleanFunction g = oracle::random_function(n, gen);
    std::vector<std::uint8_t> prod(std::size_t(1) << n);
    for (std::size_t x = 0; x < prod.size(); ++x) prod[x] = f.table()[x] & g.table()[x];
    BooleanFunction fg = BooleanFunction::from_table(std::move(prod), n, "fg");
    for (double pv : {0.3, 0.5, 0.8}) {
      BiasParam p(pv);
      Spectrum direct = transform(fg, p);
      for (std::uint64_t s = 0; s < (1ull << n); ++s) {
        CHECK(std::abs(product_coefficient(f, g, SubsetMask(s, n), p) - direct[s]) < 1e-10);
      }
    }
  }
}

TEST_CASE("tri-product expectation") {
  BiasParam p3(0.3);
  int n = 3;
  CHECK(tri_product_expectation(SubsetMask(1, n), SubsetMask(1, n), SubsetMask::empty(n),
                                BiasParam(0.5)) == 1.0);
  CHECK(tri_product_expectation(SubsetMask(1, n), SubsetMask(1, n), SubsetMask(1, n),
                                BiasParam(0.5)) == 0.0);
  CHECK(tri_product_expectation(SubsetMask(1, n), SubsetMask(1, n), SubsetMask(1, n), p3) ==
        Catch::Approx(0.4 / std::sqrt(0.21)).margin(1e-12));

  // brute force over all triples, n <= 5
  for (double pv : {0.3, 0.5, 0.7}) {
    int m = 5;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < (1ull << m); ++s) {
      for (std::uint64_t t = 0; t < (1ull << m); ++t) {
        for (std::uint64_t r = 0; r < (1ull << m); ++r) {
          double acc = 0.0;
          for (std::uint64_t x = 0; x < (1ull << m); ++x) {
            acc += oracle::pi_weight(x, m, pv) * oracle::chi(s, x, pv) *
                   oracle::chi(t, x, pv) * oracle::chi(r, x, pv);
          }
          double closed = tri_product_expectation(SubsetMask(s, m), SubsetMask(t, m),
                                                  SubsetMask(r, m), BiasParam(pv));
          worst = std::max(worst, std::abs(acc - closed));
        }
      }
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("pair product expansion is the pointwise product") {
  // disjoint masks reduce to the union
  BiasParam p(0.3);
  int n = 6;
  CHECK(pair_product_expand(SubsetMask(0b000011, n), SubsetMask(0b110000, n), Point(0b101010, n),
                            p) ==
        Catch::Approx(chi_eval(SubsetMask(0b110011, n), Point(0b101010, n), p)).margin(1e-12));
  CHECK(pair_product_expand(SubsetMask(1, 2), SubsetMask(1, 2), Point(1, 2), BiasParam(0.5)) ==
        Catch::Approx(1.0).margin(1e-12));

  std::mt19937_64 gen(15);
  for (double pv : {0.2, 0.5, 0.8}) {
    for (int rep = 0; rep < 300; ++rep) {
      std::uint64_t s = gen() & 0xFF, t = gen() & 0xFF, x = gen() & 0xFF;
      double lhs = pair_product_expand(SubsetMask(s, 8), SubsetMask(t, 8), Point(x, 8),
                                       BiasParam(pv));
      double rhs = oracle::chi(s, x, pv) * oracle::chi(t, x, pv);
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("derivative expansion equals the direct difference") {
  BiasParam p(0.5);
  BooleanFunction dict = BooleanFunction::dictator(3);
  auto d1 = derivative_expansion(dict, 1, p);
  auto d2 = derivative_expansion(dict, 2, p);
  for (std::size_t x = 0; x < 8; ++x) {
    CHECK(d1[x] == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(d2[x]) < 1e-12);
  }

  BooleanFunction maj = BooleanFunction::majority(3);
  auto dm = derivative_expansion(maj, 1, p);
  for (std::uint64_t x = 0; x < 8; ++x) {
    int pivotal = ((x >> 1) & 1) != ((x >> 2) & 1);
    CHECK(dm[x] == Catch::Approx(double(pivotal)).margin(1e-12));
  }

  std::mt19937_64 gen(16);
  for (int n : {4, 8, 10}) {
    BooleanFunction f = oracle::random_function(n, gen);
    for (double pv : {0.2, 0.5, 0.7}) {
      for (int i = 1; i <= n; ++i) {
        auto spec = derivative_expansion(f, i, BiasParam(pv));
        auto direct = derivative_direct(f, i);
        double worst = 0.0;
        for (std::size_t x = 0; x < spec.size(); ++x) {
          worst = std::max(worst, std::abs(spec[x] - direct[x]));
        }
        CHECK(worst < 1e-10);
      }
    }
  }
}

TEST_CASE("a corrupted butterfly weight breaks the round trip") {
  // same stages as the forward butterfly, one weight off by 1e-6
  int n = 6;
  double p = 0.3;
  BooleanFunction f = BooleanFunction::majority(n);
  std::vector<double> v(f.table().begin(), f.table().end());
  double sigma = std::sqrt(p * (1 - p)) + 1e-6;
  for (int b = 0; b < n; ++b) {
    std::size_t half = std::size_t(1) << b;
    for (std::size_t base = 0; base < v.size(); base += 2 * half) {
      for (std::size_t j = base; j < base + half; ++j) {
        double v0 = v[j], v1 = v[j + half];
        v[j] = (1 - p) * v0 + p * v1;
        v[j + half] = sigma * (v1 - v0);
      }
    }
  }
  Spectrum corrupted(n, p, v);
  // Parseval now fails beyond the declared tolerance
  NeumaierSum acc;
  for (double c : corrupted.coeffs()) acc.add(c * c);
  double ef = nondegeneracy(f, BiasParam(p)).value;
  CHECK(std::abs(acc.value() - ef) > 1e-10);
}

TEST_CASE("spectrum CSV round trip") {
  BooleanFunction f = BooleanFunction::majority(3);
  BiasParam p(0.4);
  Spectrum s = transform(f, p);
  std::stringstream buf;
  write_spectrum_csv(s, buf);
  Spectrum back = read_spectrum_csv(buf, 3, 0.4);
  for (std::uint64_t m = 0; m < 8; ++m) CHECK(back[m] == s[m]);  // 17 digits round-trip doubles

  BooleanFunction rec = inverse_transform(back);
  CHECK(rec.table() == f.table());
}
