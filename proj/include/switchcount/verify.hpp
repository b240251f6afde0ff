#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "switchcount/dynamics.hpp"
#include "switchcount/function.hpp"
#include "switchcount/hypercube.hpp"
#include "switchcount/moments.hpp"
#include "switchcount/simulate.hpp"
#include "switchcount/spectral.hpp"

namespace swc {

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyConfig {
  int n_max = 10;
  std::vector<double> p_grid = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::uint64_t seed = 12345;
  long long mc_trials = 100000;
};

namespace detail {

inline BooleanFunction random_function(int n, std::mt19937_64& gen, const std::string& tag) {
  std::vector<std::uint8_t> table(std::size_t(1) << n);
  for (auto& b : table) b = std::uint8_t(gen() & 1u);
  return BooleanFunction::from_table(std::move(table), n, tag);
}

// Random increasing function: close a random table upward along covering pairs.
inline BooleanFunction random_increasing_function(int n, std::mt19937_64& gen,
                                                  const std::string& tag) {
  std::vector<std::uint8_t> table(std::size_t(1) << n);
  std::bernoulli_distribution coin(0.35);
  for (auto& b : table) b = coin(gen) ? 1 : 0;
  for (std::size_t x = 0; x < table.size(); ++x) {
    for (int b = 0; b < n; ++b) {
      std::uint64_t m = 1ull << b;
      if ((x & m) == 0 && table[x]) table[x | m] = 1;
    }
  }
  return BooleanFunction::from_table(std::move(table), n, tag);
}

inline std::vector<BooleanFunction> named_functions(int n) {
  std::vector<BooleanFunction> out;
  out.push_back(BooleanFunction::dictator(n));
  out.push_back(BooleanFunction::majority(n));
  out.push_back(BooleanFunction::parity(n));
  out.push_back(BooleanFunction::all_and(n));
  out.push_back(BooleanFunction::any_or(n));
  for (int w : {2, 3, 4}) {
    if (n % w == 0 && n / w >= 2) {
      out.push_back(BooleanFunction::tribes(w, n));
      break;
    }
  }
  return out;
}

// Upper chi-square quantile via the Wilson-Hilferty cube approximation;
// plenty for a 1e-3 significance gate.
inline double chi_square_quantile(int dof, double z_upper) {
  double k = double(dof);
  double a = 2.0 / (9.0 * k);
  double t = 1.0 - a + z_upper * std::sqrt(a);
  return k * t * t * t;
}

}  // namespace detail

class VerifySuite {
 public:
  explicit VerifySuite(const VerifyConfig& cfg) : cfg_(cfg) {}

  std::vector<CheckResult> run() {
    results_.clear();
    check_measure_normalization();
    check_family_table_agreement();
    check_bit_ops();
    check_increasing_predicates();
    check_resample_law();
    check_orthonormality();
    check_parseval();
    check_round_trip();
    check_derivative_lemma();
    check_product_coefficient();
    check_tri_product();
    check_pair_product();
    check_stochasticity();
    check_decomposition();
    check_reversibility();
    check_eigen_relation();
    check_influence_equation();
    check_pairing_routes();
    check_expected_count_is_influence();
    check_second_moment_routes();
    check_increasing_constant();
    check_increasing_route();
    check_mgf_derivatives();
    check_increasing_upper();
    check_pz_monotone();
    check_exact_distribution();
    check_mc_vs_exact();
    check_seed_determinism();
    check_stationarity();
    return results_;
  }

 private:
  void record(const std::string& name, double residual, double tol, std::string note = "") {
    results_.push_back({name, residual, tol, residual <= tol, std::move(note)});
  }

  void record_bool(const std::string& name, bool ok, std::string note = "") {
    results_.push_back({name, ok ? 0.0 : 1.0, 0.5, ok, std::move(note)});
  }

  void check_measure_normalization() {
    double worst = 0.0;
    for (int n = 1; n <= std::min(cfg_.n_max + 4, 16); ++n) {
      for (double pv : cfg_.p_grid) {
        ProductMeasure pi(BiasParam(pv), n);
        NeumaierSum acc;
        for (std::uint64_t x = 0; x < (1ull << n); ++x) acc.add(pi.weight_word(x));
        worst = std::max(worst, std::abs(acc.value() - 1.0));
      }
    }
    record("measure-normalization", worst, 1e-12);
  }

  void check_family_table_agreement() {
    bool ok = true;
    for (int n = 2; n <= std::min(cfg_.n_max, 12); ++n) {
      for (const auto& f : detail::named_functions(n)) {
        if (!f.family()) continue;
        for (std::uint64_t x = 0; x < (1ull << n); ++x) {
          if (f.table()[x] != detail::eval_family_word(*f.family(), x, n)) ok = false;
        }
      }
    }
    record_bool("family-table-agreement", ok);
  }

  void check_bit_ops() {
    bool ok = true;
    for (int n = 1; n <= std::min(cfg_.n_max, 10); ++n) {
      for (std::uint64_t w = 0; w < (1ull << n); ++w) {
        Point x(w, n);
        for (int i = 1; i <= n; ++i) {
          if (flip_bit(flip_bit(x, i), i) != x) ok = false;
          if (set_bit(x, i, 1).bit(i) != 1 || set_bit(x, i, 0).bit(i) != 0) ok = false;
          if (set_bit(x, i, x.bit(i)) != x) ok = false;
        }
      }
    }
    record_bool("bit-ops-involution-and-set", ok);
  }

  void check_increasing_predicates() {
    bool ok = is_increasing(BooleanFunction::dictator(5)) &&
              is_increasing(BooleanFunction::majority(5)) &&
              is_increasing(BooleanFunction::tribes(2, 6)) &&
              !is_increasing(BooleanFunction::parity(4)) &&
              is_increasing(BooleanFunction::all_and(4)) &&
              is_increasing(BooleanFunction::any_or(4));
    record_bool("increasing-predicates", ok);
  }

  void check_resample_law() {
    // P(resample changes the bit) = 2p(1-p), and bits j != i never move.
    double worst_sigma = 0.0;
    bool untouched = true;
    long long draws = 100000;
    for (double pv : {0.3, 0.5}) {
      BiasParam p(pv);
      int n = 6;
      long long changed = 0;
      CounterRng rng(cfg_.seed, 777);
      for (long long t = 0; t < draws; ++t) {
        std::uint64_t w = 0;
        for (int i = 0; i < n; ++i) {
          if (rng.bernoulli(pv)) w |= (1ull << i);
        }
        Point x(w, n);
        int i = 1 + int(rng.uniform_below(std::uint64_t(n)));
        Point y = resample_bit(x, i, p, rng);
        if (y.bits != x.bits) ++changed;
        std::uint64_t mask_others = ((1ull << n) - 1) & ~(1ull << (i - 1));
        if ((y.bits & mask_others) != (x.bits & mask_others)) untouched = false;
      }
      double q = 2.0 * pv * (1.0 - pv);
      double se = std::sqrt(q * (1.0 - q) / double(draws));
      worst_sigma = std::max(worst_sigma, std::abs(double(changed) / double(draws) - q) / se);
    }
    record("resample-law-sigmas", worst_sigma, 3.0,
           untouched ? "other bits untouched" : "OTHER BITS MOVED");
    if (!untouched) results_.back().pass = false;
  }

  void check_orthonormality() {
    double worst = 0.0;
    int n = std::min(cfg_.n_max, 8);
    for (double pv : cfg_.p_grid) {
      ProductMeasure pi(BiasParam(pv), n);
      std::vector<double> weights = pi.weight_vector();
      std::vector<std::vector<double>> chis(std::size_t(1) << n);
      for (std::uint64_t s = 0; s < chis.size(); ++s) chis[s] = chi_vector(s, n, pv);
      for (std::uint64_t s = 0; s < chis.size(); ++s) {
        for (std::uint64_t t = s; t < chis.size(); ++t) {
          NeumaierSum acc;
          for (std::size_t x = 0; x < weights.size(); ++x) {
            acc.add(weights[x] * chis[s][x] * chis[t][x]);
          }
          double want = s == t ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(acc.value() - want));
        }
      }
    }
    record("orthonormality", worst, 1e-10);
  }

  void check_parseval() {
    double worst = 0.0;
    std::mt19937_64 gen(cfg_.seed);
    for (int n : {4, 8, std::min(cfg_.n_max, 12)}) {
      std::vector<BooleanFunction> fns = detail::named_functions(n);
      fns.push_back(detail::random_function(n, gen, "rand"));
      for (double pv : cfg_.p_grid) {
        BiasParam p(pv);
        for (const auto& f : fns) {
          Spectrum s = transform(f, p);
          NeumaierSum acc;
          for (double c : s.coeffs()) acc.add(c * c);
          double ef = nondegeneracy(f, p).value;
          worst = std::max(worst, std::abs(acc.value() - ef));
          double var_direct = ef - ef * ef;
          NeumaierSum var_spec;
          for (std::uint64_t m = 1; m < s.coeffs().size(); ++m) var_spec.add(s[m] * s[m]);
          worst = std::max(worst, std::abs(var_spec.value() - var_direct));
        }
      }
    }
    record("parseval-and-variance", worst, 1e-10);
  }

  void check_round_trip() {
    bool ok = true;
    std::mt19937_64 gen(cfg_.seed + 1);
    for (int n : {2, 6, std::min(cfg_.n_max, 12)}) {
      std::vector<BooleanFunction> fns = detail::named_functions(n);
      fns.push_back(detail::random_function(n, gen, "rand"));
      for (double pv : cfg_.p_grid) {
        BiasParam p(pv);
        for (const auto& f : fns) {
          BooleanFunction g = inverse_transform(transform(f, p));
          if (g.table() != f.table()) ok = false;
        }
      }
    }
    record_bool("transform-round-trip", ok);
  }

  void check_derivative_lemma() {
    double worst = 0.0;
    std::mt19937_64 gen(cfg_.seed + 2);
    int n = std::min(cfg_.n_max, 10);
    for (int rep = 0; rep < 10; ++rep) {
      BooleanFunction f = detail::random_function(n, gen, "rand");
      for (double pv : cfg_.p_grid) {
        BiasParam p(pv);
        for (int i = 1; i <= n; ++i) {
          std::vector<double> spec = derivative_expansion(f, i, p);
          std::vector<double> direct = derivative_direct(f, i);
          for (std::size_t x = 0; x < spec.size(); ++x) {
            worst = std::max(worst, std::abs(spec[x] - direct[x]));
          }
        }
      }
    }
    record("derivative-expansion", worst, 1e-10);
  }

  void check_product_coefficient() {
    double worst = 0.0;
    std::mt19937_64 gen(cfg_.seed + 3);
    int n = std::min(cfg_.n_max, 8);
    for (int rep = 0; rep < 3; ++rep) {
      BooleanFunction f = detail::random_function(n, gen, "f");
      BooleanFunction g = detail::random_function(n, gen, "g");
      std::vector<std::uint8_t> prod(std::size_t(1) << n);
      for (std::size_t x = 0; x < prod.size(); ++x) prod[x] = f.table()[x] & g.table()[x];
      BooleanFunction fg = BooleanFunction::from_table(std::move(prod), n, "fg");
      for (double pv : {0.3, 0.5, 0.7}) {
        BiasParam p(pv);
        Spectrum direct = transform(fg, p);
        for (std::uint64_t s = 0; s < direct.coeffs().size(); ++s) {
          double formula = product_coefficient(f, g, SubsetMask(s, n), p);
          worst = std::max(worst, std::abs(formula - direct[s]));
        }
      }
    }
    record("product-coefficient", worst, 1e-10);
  }

  void check_tri_product() {
    double worst = 0.0;
    int n = std::min(cfg_.n_max, 6);
    for (double pv : {0.3, 0.5}) {
      BiasParam p(pv);
      ProductMeasure pi(p, n);
      std::vector<double> weights = pi.weight_vector();
      std::vector<std::vector<double>> chis(std::size_t(1) << n);
      for (std::uint64_t s = 0; s < chis.size(); ++s) chis[s] = chi_vector(s, n, pv);
      for (std::uint64_t s = 0; s < chis.size(); ++s) {
        for (std::uint64_t t = 0; t < chis.size(); ++t) {
          for (std::uint64_t r = 0; r < chis.size(); ++r) {
            NeumaierSum acc;
            for (std::size_t x = 0; x < weights.size(); ++x) {
              acc.add(weights[x] * chis[s][x] * chis[t][x] * chis[r][x]);
            }
            double closed =
                tri_product_expectation(SubsetMask(s, n), SubsetMask(t, n), SubsetMask(r, n), p);
            worst = std::max(worst, std::abs(acc.value() - closed));
          }
        }
      }
    }
    record("tri-product-expectation", worst, 1e-9);
  }

  void check_pair_product() {
    double worst = 0.0;
    int n = std::min(cfg_.n_max, 8);
    for (double pv : {0.3, 0.5, 0.7}) {
      BiasParam p(pv);
      std::mt19937_64 gen(cfg_.seed + 4);
      for (int rep = 0; rep < 200; ++rep) {
        std::uint64_t s = gen() & ((1ull << n) - 1);
        std::uint64_t t = gen() & ((1ull << n) - 1);
        std::uint64_t xw = gen() & ((1ull << n) - 1);
        Point x(xw, n);
        double lhs = pair_product_expand(SubsetMask(s, n), SubsetMask(t, n), x, p);
        double rhs = chi_eval(SubsetMask(s, n), x, p) * chi_eval(SubsetMask(t, n), x, p);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    record("pair-product-expand", worst, 1e-10);
  }

  void check_stochasticity() {
    double worst = 0.0;
    for (int n : {1, 6, std::min(cfg_.n_max + 4, 16)}) {
      for (double pv : cfg_.p_grid) {
        JumpOperator qn = JumpOperator::jump_chain(n, BiasParam(pv));
        std::vector<double> ones(std::size_t(1) << n, 1.0);
        std::vector<double> out = qn.apply(ones);
        for (double v : out) worst = std::max(worst, std::abs(v - 1.0));
      }
    }
    record("jump-chain-stochasticity", worst, 1e-13);
  }

  void check_decomposition() {
    double worst = 0.0;
    std::mt19937_64 gen(cfg_.seed + 5);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int n : {3, std::min(cfg_.n_max, 12)}) {
      BooleanFunction f = detail::random_function(n, gen, "rand");
      for (double pv : {0.3, 0.5}) {
        BiasParam p(pv);
        JumpOperator qn = JumpOperator::jump_chain(n, p);
        JumpOperator qdf = JumpOperator::boundary(f, p);
        JumpOperator qf = JumpOperator::interior(f, p);
        std::vector<double> v(std::size_t(1) << n);
        for (auto& x : v) x = unif(gen);
        std::vector<double> a = qn.apply(v);
        std::vector<double> b = qdf.apply(v);
        std::vector<double> c = qf.apply(v);
        for (std::size_t x = 0; x < v.size(); ++x) {
          worst = std::max(worst, std::abs(a[x] - b[x] - c[x]));
        }
      }
    }
    record("operator-decomposition", worst, 1e-12);
  }

  void check_reversibility() {
    double worst = 0.0;
    for (int n = 1; n <= std::min(cfg_.n_max, 10); ++n) {
      for (double pv : cfg_.p_grid) {
        ProductMeasure pi(BiasParam(pv), n);
        for (std::uint64_t x = 0; x < (1ull << n); ++x) {
          for (int b = 0; b < n; ++b) {
            std::uint64_t y = x ^ (1ull << b);
            int xi = int(x >> b) & 1;
            int yi = 1 - xi;
            double lhs = pi.weight_word(y) * (pv * (1 - yi) + (1.0 - pv) * yi);
            double rhs = pi.weight_word(x) * (pv * (1 - xi) + (1.0 - pv) * xi);
            worst = std::max(worst, std::abs(lhs - rhs));
          }
        }
      }
    }
    record("detailed-balance", worst, 1e-15);
  }

  void check_eigen_relation() {
    double worst = 0.0;
    int n = std::min(cfg_.n_max, 10);
    for (double pv : cfg_.p_grid) {
      BiasParam p(pv);
      for (std::uint64_t s = 0; s < (1ull << n); ++s) {
        worst = std::max(worst, eigen_residual(SubsetMask(s, n), p));
      }
    }
    record("eigen-relation", worst, 1e-12);
  }

  void check_influence_equation() {
    double worst = 0.0;
    std::mt19937_64 gen(cfg_.seed + 6);
    for (int n : {2, 5, std::min(cfg_.n_max, 10)}) {
      std::vector<BooleanFunction> fns = detail::named_functions(n);
      fns.push_back(detail::random_function(n, gen, "rand"));
      for (double pv : cfg_.p_grid) {
        BiasParam p(pv);
        ProductMeasure pi(p, n);
        for (const auto& f : fns) {
          InfluenceProfile prof = influence_profile(f, p);
          std::vector<double> sens = sensitivity_function(f, p);
          NeumaierSum acc;
          for (std::uint64_t x = 0; x < sens.size(); ++x) {
            acc.add(pi.weight_word(x) * sens[x]);
          }
          worst = std::max(worst, std::abs(prof.total - double(n) * acc.value()));
        }
      }
    }
    record("influence-equation", worst, 1e-12);
  }

  void check_pairing_routes() {
    double worst = 0.0;
    std::mt19937_64 gen(cfg_.seed + 7);
    int n = std::min(cfg_.n_max, 8);
    std::vector<BooleanFunction> fns = detail::named_functions(n);
    fns.push_back(detail::random_function(n, gen, "rand"));
    fns.push_back(detail::random_increasing_function(n, gen, "rand-incr"));
    for (double pv : {0.3, 0.5, 0.7}) {
      BiasParam p(pv);
      for (const auto& f : fns) {
        for (std::uint64_t s = 0; s < (1ull << n); ++s) {
          PairingReport rep = boundary_pairing(f, SubsetMask(s, n), p);
          worst = std::max(worst, rep.max_spread());
        }
      }
    }
    record("pairing-route-agreement", worst, 1e-9);
  }

  void check_expected_count_is_influence() {
    double worst = 0.0;
    std::mt19937_64 gen(cfg_.seed + 8);
    for (int n : {2, 6, std::min(cfg_.n_max, 12)}) {
      std::vector<BooleanFunction> fns = detail::named_functions(n);
      fns.push_back(detail::random_function(n, gen, "rand"));
      for (double pv : cfg_.p_grid) {
        BiasParam p(pv);
        for (const auto& f : fns) {
          worst = std::max(worst,
                           std::abs(expected_count(f, p) - influence_profile(f, p).total));
        }
      }
    }
    record("expected-count-equals-influence", worst, 1e-10);
  }

  void check_second_moment_routes() {
    double worst = 0.0;
    std::mt19937_64 gen(cfg_.seed + 9);
    int n = std::min(cfg_.n_max, 10);
    std::vector<BooleanFunction> fns = detail::named_functions(n);
    for (int rep = 0; rep < 5; ++rep) fns.push_back(detail::random_function(n, gen, "rand"));
    for (double pv : cfg_.p_grid) {
      BiasParam p(pv);
      for (const auto& f : fns) {
        double series = second_moment_series(f, p);
        double fourier = second_moment_fourier(f, p);
        worst = std::max(worst, std::abs(series - fourier));
      }
    }
    record("second-moment-series-vs-fourier", worst, 1e-8);
  }

  void check_increasing_constant() {
    const auto& r = increasing_constant();
    std::ostringstream note;
    note << "resolved c = " << r.resolved << " (raw " << r.raw << ", pin residual "
         << r.pin_residual << ") from the n=1, p=0.3 dictator run";
    record("increasing-second-moment-constant", r.pin_residual, 1e-9, note.str());
  }

  void check_increasing_route() {
    double worst = 0.0;
    std::mt19937_64 gen(cfg_.seed + 10);
    for (int n : {1, 3, 6, std::min(cfg_.n_max, 10)}) {
      std::vector<BooleanFunction> fns;
      fns.push_back(BooleanFunction::dictator(n));
      fns.push_back(BooleanFunction::majority(n));
      fns.push_back(BooleanFunction::all_and(n));
      fns.push_back(BooleanFunction::any_or(n));
      if (n >= 4) fns.push_back(detail::random_increasing_function(n, gen, "rand-incr"));
      for (double pv : cfg_.p_grid) {
        BiasParam p(pv);
        for (const auto& f : fns) {
          double series = second_moment_series(f, p);
          double incr = second_moment_increasing(f, p);
          worst = std::max(worst, std::abs(series - incr));
        }
      }
    }
    record("increasing-second-moment-route", worst, 1e-8);
  }

  void check_mgf_derivatives() {
    double worst_first = 0.0, worst_second = 0.0;
    TruncationPolicy fixed;
    fixed.fixed_terms = 160;
    double h = 1e-5;
    for (const auto& f : {BooleanFunction::majority(3), BooleanFunction::dictator(2)}) {
      for (double pv : {0.3, 0.5}) {
        BiasParam p(pv);
        double m_plus = mgf(f, p, h, fixed);
        double m_minus = mgf(f, p, -h, fixed);
        double m_zero = mgf(f, p, 0.0, fixed);
        double d1 = (m_plus - m_minus) / (2.0 * h);
        double d2 = (m_plus - 2.0 * m_zero + m_minus) / (h * h);
        worst_first = std::max(worst_first, std::abs(d1 - expected_count(f, p)));
        worst_second = std::max(worst_second, std::abs(d2 - second_moment_series(f, p)));
      }
    }
    record("mgf-first-derivative", worst_first, 1e-4);
    record("mgf-second-derivative", worst_second, 1e-3);
  }

  void check_increasing_upper() {
    double worst = 0.0;  // violation amount
    std::mt19937_64 gen(cfg_.seed + 11);
    for (int n : {1, 4, 8, std::min(cfg_.n_max, 12)}) {
      std::vector<BooleanFunction> fns;
      fns.push_back(BooleanFunction::dictator(n));
      fns.push_back(BooleanFunction::majority(n));
      fns.push_back(BooleanFunction::all_and(n));
      if (n >= 4) fns.push_back(detail::random_increasing_function(n, gen, "rand-incr"));
      for (double pv : cfg_.p_grid) {
        BiasParam p(pv);
        for (const auto& f : fns) {
          double series = n <= kSecondMomentDimGate ? second_moment_series(f, p)
                                                    : second_moment_fourier(f, p);
          double bound = increasing_upper_bound(f, p);
          worst = std::max(worst, series - bound);
        }
      }
    }
    record("increasing-upper-bound", worst, 1e-9);
  }

  void check_pz_monotone() {
    bool ok = true;
    BiasParam p(0.5);
    for (const auto& f : {BooleanFunction::majority(5), BooleanFunction::parity(4)}) {
      double prev = 1e300;
      for (double th : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        double b = pz_lower_bound(f, p, th);
        if (b > prev + 1e-12) ok = false;
        prev = b;
      }
    }
    record_bool("pz-monotone-in-theta", ok);
  }

  void check_exact_distribution() {
    std::mt19937_64 gen(cfg_.seed + 12);
    std::vector<BooleanFunction> fns = {BooleanFunction::majority(3),
                                        BooleanFunction::dictator(4),
                                        detail::random_function(std::min(cfg_.n_max, 8), gen,
                                                                "rand")};
    double worst_mass = 0.0, worst_mean = 0.0, worst_m2 = 0.0;
    for (double pv : {0.3, 0.5}) {
      BiasParam p(pv);
      for (const auto& f : fns) {
        CountDistribution dist = exact_count_distribution(f, p, 48);
        double mass = compensated_sum(dist.probs) + dist.truncation_mass;
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
        worst_mean = std::max(worst_mean, std::abs(dist.mean() - expected_count(f, p)));
        worst_m2 = std::max(worst_m2,
                            std::abs(dist.second_moment() - second_moment_series(f, p)));
      }
    }
    record("exact-distribution-mass", worst_mass, 1e-12);
    record("exact-distribution-mean", worst_mean, 1e-8);
    record("exact-distribution-second-moment", worst_m2, 1e-7);
  }

  void check_mc_vs_exact() {
    // Empirical tails within 4 binomial standard errors of the exact law
    // wherever the exact mass is at least 1e-3.
    double worst_sigma = 0.0;
    for (const auto& f : {BooleanFunction::dictator(4), BooleanFunction::majority(3)}) {
      BiasParam p(0.5);
      CountDistribution dist = exact_count_distribution(f, p, 40);
      McConfig cfg;
      cfg.trials = cfg_.mc_trials;
      cfg.seed = cfg_.seed;
      cfg.tail_k_max = 16;
      McMoments mc = monte_carlo_moments(f, p, cfg);
      double exact_tail = 1.0;
      for (int k = 0; k <= cfg.tail_k_max; ++k) {
        if (k > 0) exact_tail -= dist.probs[std::size_t(k - 1)];
        if (exact_tail < 1e-3) break;
        double se = std::sqrt(std::max(exact_tail * (1.0 - exact_tail), 1e-12) /
                              double(cfg.trials));
        worst_sigma =
            std::max(worst_sigma, std::abs(mc.tail[std::size_t(k)] - exact_tail) / se);
      }
    }
    record("mc-vs-exact-tails-sigmas", worst_sigma, 4.0);
  }

  void check_seed_determinism() {
    McConfig cfg;
    cfg.trials = 2000;
    cfg.seed = cfg_.seed;
    BooleanFunction f = BooleanFunction::majority(5);
    BiasParam p(0.3);
    McMoments a = monte_carlo_moments(f, p, cfg);
    cfg.batch = 97;  // different batching must not change anything
    McMoments b = monte_carlo_moments(f, p, cfg);
    bool ok = a.mean == b.mean && a.second_moment == b.second_moment && a.tail == b.tail;
    record_bool("seed-determinism", ok);
  }

  void check_stationarity() {
    // X_1 over trials against pi_n, chi-square at significance 1e-3.
    int n = 6;
    double pv = 0.3;
    long long trials = 20000;
    std::vector<long long> counts(std::size_t(1) << n, 0);
    for (long long t = 0; t < trials; ++t) {
      ++counts[simulate_chain_final(n, BiasParam(pv), cfg_.seed + 99, std::uint64_t(t))];
    }
    ProductMeasure pi(BiasParam(pv), n);
    double stat = 0.0;
    for (std::uint64_t x = 0; x < counts.size(); ++x) {
      double expect = pi.weight_word(x) * double(trials);
      double diff = double(counts[x]) - expect;
      stat += diff * diff / expect;
    }
    int dof = int(counts.size()) - 1;
    double crit = detail::chi_square_quantile(dof, 3.090232306167814);  // z at 1 - 1e-3
    std::ostringstream note;
    note << "chi-square " << stat << " vs critical " << crit << " (dof " << dof << ")";
    record("stationarity-chi-square", stat, crit, note.str());
  }

  VerifyConfig cfg_;
  std::vector<CheckResult> results_;
};

inline std::vector<CheckResult> run_verification(const VerifyConfig& cfg) {
  return VerifySuite(cfg).run();
}

}  // namespace swc
