#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "switchcount/dynamics.hpp"
#include "switchcount/function.hpp"
#include "switchcount/hypercube.hpp"
#include "switchcount/spectral.hpp"

namespace swc {

inline constexpr int kSecondMomentDimGate = 14;

// Truncation control for the operator power series. A run that cannot certify
// its tail fails loudly instead of returning a silent estimate.
struct TruncationPolicy {
  double tol = 1e-12;
  int k_max = 0;        // 0: use max(8n, 128)
  int fixed_terms = 0;  // >0: evaluate exactly this many terms, then certify

  int resolve_k_max(int n) const { return k_max > 0 ? k_max : std::max(8 * n, 128); }
};

inline double expected_count(const BooleanFunction& f, const BiasParam& p) {
  ProductMeasure pi(p, f.n());
  std::vector<double> sens = sensitivity_function(f, p);
  NeumaierSum acc;
  for (std::size_t x = 0; x < sens.size(); ++x) acc.add(pi.weight_word(x) * sens[x]);
  return double(f.n()) * acc.value();
}

namespace detail {

// Remaining mass of sum_{j>k} r^j / j! via the geometric majorant; requires
// r/(k+2) < 1. Returns +inf when not yet certifiable.
inline double exp_series_tail(double r, int k, double term_k1) {
  double q = r / double(k + 2);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return term_k1 / (1.0 - q);
}

inline double series_weight(int s) {
  // (e^{-s} - (1-s)) / s^2
  double ds = double(s);
  return (std::exp(-ds) - (1.0 - ds)) / (ds * ds);
}

}  // namespace detail

// E[C_f^2] as the truncated operator power series
//   E[C] + 2 sum_{k>=2} (n^k/k!) pi^T Q_df (Q_n - I)^{k-2} Q_df 1.
inline double second_moment_series(const BooleanFunction& f, const BiasParam& p,
                                   const TruncationPolicy& policy = {}) {
  int n = f.n();
  if (n > kSecondMomentDimGate) {
    throw std::invalid_argument("second_moment_series: gated at n <= 14");
  }
  ProductMeasure pim(p, n);
  std::vector<double> weights = pim.weight_vector();
  JumpOperator qn = JumpOperator::jump_chain(n, p);
  JumpOperator qdf = JumpOperator::boundary(f, p);

  std::vector<double> u = sensitivity_function(f, p);
  double u_inf = 0.0;
  for (double v : u) u_inf = std::max(u_inf, std::abs(v));

  NeumaierSum total;
  double ec = double(n) * compensated_dot(weights, u);
  total.add(ec);
  if (u_inf == 0.0) return total.value();  // constant f

  int k_cap = policy.resolve_k_max(n);
  std::vector<double> w = u;
  std::vector<double> scratch(u.size());
  double coef = double(n) * double(n) / 2.0;  // n^k/k! at k=2
  double t_k = 2.0 * double(n) * double(n);   // tail majorant (2n)^k/k! at k=2
  for (int k = 2; k <= k_cap; ++k) {
    std::vector<double> qw = qdf.apply(w);
    double a_k = compensated_dot(weights, qw);
    total.add(2.0 * coef * a_k);

    double t_next = t_k * (2.0 * double(n)) / double(k + 1);
    double bound = 0.5 * u_inf * detail::exp_series_tail(2.0 * double(n), k, t_next);
    if (bound <= policy.tol) return total.value();

    qn.apply_into(w, scratch);
    for (std::size_t x = 0; x < w.size(); ++x) w[x] = scratch[x] - w[x];
    coef *= double(n) / double(k + 1);
    t_k = t_next;
  }
  throw std::runtime_error("second_moment_series: tail not certified within k_max=" +
                           std::to_string(k_cap));
}

// E[C_f^2] from one transform of the sensitivity function:
//   E[C] + E[C]^2 + 2 sum_{S nonempty} w(|S|) (n <Q_df 1, chi_S>)^2,
// w(s) = (e^{-s} - (1-s)) / s^2.
inline double second_moment_fourier(const BooleanFunction& f, const BiasParam& p) {
  int n = f.n();
  if (n > kSecondMomentDimGate) {
    throw std::invalid_argument("second_moment_fourier: gated at n <= 14");
  }
  std::vector<double> sens = sensitivity_function(f, p);
  Spectrum c = transform_values(std::move(sens), n, p);
  double ec = double(n) * c[0];
  NeumaierSum total;
  total.add(ec);
  total.add(ec * ec);
  for (std::uint64_t s = 1; s < c.coeffs().size(); ++s) {
    double nc = double(n) * c[s];
    total.add(2.0 * detail::series_weight(std::popcount(s)) * nc * nc);
  }
  return total.value();
}

// The leading constant of the increasing-function second-moment form is
// pinned at runtime against the series route on the 1-bit dictator at
// p = 0.3 (the series route has an independent derivation); the raw solved
// value, the integer it resolves to, and the pin residual are all reported.
struct IncreasingConstantResolution {
  double raw = 0.0;
  double resolved = 0.0;
  double pin_residual = 0.0;
};

namespace detail {

inline double increasing_bracket_sum(const Spectrum& fh, int n, double p) {
  double sigma = std::sqrt(p * (1.0 - p));
  NeumaierSum total;
  for (std::uint64_t s = 1; s < fh.coeffs().size(); ++s) {
    int sz = std::popcount(s);
    NeumaierSum bracket;
    bracket.add((1.0 - 2.0 * p) * double(sz) * fh[s]);
    for (int b = 0; b < n; ++b) {
      std::uint64_t m = 1ull << b;
      if ((s & m) == 0) bracket.add(2.0 * sigma * fh[s | m]);
    }
    double br = bracket.value();
    total.add(series_weight(sz) * br * br);
  }
  return total.value();
}

}  // namespace detail

inline const IncreasingConstantResolution& increasing_constant() {
  static const IncreasingConstantResolution resolution = [] {
    BooleanFunction f = BooleanFunction::dictator(1);
    BiasParam p(0.3);
    double series = second_moment_series(f, p);
    double ec = expected_count(f, p);
    double bsum = detail::increasing_bracket_sum(transform(f, p), 1, 0.3);
    IncreasingConstantResolution r;
    r.raw = (series - ec - ec * ec) / bsum;
    r.resolved = std::round(r.raw);
    r.pin_residual = std::abs(r.raw - r.resolved);
    return r;
  }();
  return resolution;
}

// E[C_f^2] for increasing f directly from the spectrum of f.
inline double second_moment_increasing(const BooleanFunction& f, const BiasParam& p) {
  int n = f.n();
  if (n > kSecondMomentDimGate) {
    throw std::invalid_argument("second_moment_increasing: gated at n <= 14");
  }
  if (!is_increasing(f)) {
    throw std::invalid_argument("second_moment_increasing: function is not increasing");
  }
  double c = increasing_constant().resolved;
  double ec = expected_count(f, p);
  double bsum = detail::increasing_bracket_sum(transform(f, p), n, p.value());
  return ec + ec * ec + c * bsum;
}

// E[e^{s C_f}] = sum_k (n^k/k!) pi^T ((Q_n - I) + (e^s - 1) Q_df)^k 1.
// Safe for s <= 0 and small positive s; the certified radius is whatever the
// tail bound reaches within k_max.
inline double mgf(const BooleanFunction& f, const BiasParam& p, double s,
                  const TruncationPolicy& policy = {}) {
  int n = f.n();
  if (n > kSecondMomentDimGate) {
    throw std::invalid_argument("mgf: gated at n <= 14");
  }
  ProductMeasure pim(p, n);
  std::vector<double> weights = pim.weight_vector();
  JumpOperator qn = JumpOperator::jump_chain(n, p);
  JumpOperator qdf = JumpOperator::boundary(f, p);
  double es1 = std::expm1(s);
  double beta = 2.0 + std::abs(es1);

  std::size_t size = std::size_t(1) << n;
  std::vector<double> v(size, 1.0);
  std::vector<double> a(size), b(size);
  NeumaierSum total;
  total.add(1.0);  // k = 0

  int k_cap = policy.resolve_k_max(n);
  if (policy.fixed_terms > 0) k_cap = policy.fixed_terms;
  double coef = 1.0;
  double t_k = 1.0;  // (n beta)^k / k!
  double certified = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_cap; ++k) {
    qn.apply_into(v, a);
    qdf.apply_into(v, b);
    for (std::size_t x = 0; x < size; ++x) v[x] = a[x] - v[x] + es1 * b[x];
    coef *= double(n) / double(k);
    total.add(coef * compensated_dot(weights, v));
    t_k *= (double(n) * beta) / double(k);
    double t_next = t_k * (double(n) * beta) / double(k + 1);
    certified = detail::exp_series_tail(double(n) * beta, k, t_next);
    if (policy.fixed_terms == 0 && certified <= policy.tol) return total.value();
  }
  if (certified <= policy.tol) return total.value();
  throw std::runtime_error("mgf: tail not certified at s=" + std::to_string(s) +
                           " within k_max=" + std::to_string(k_cap));
}

// Paley-Zygmund: P(C > theta E[C]) >= (1-theta) E[C]^2 / E[C^2].
inline double pz_lower_bound(const BooleanFunction& f, const BiasParam& p, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("pz_lower_bound: theta must lie in (0,1)");
  }
  double ec = expected_count(f, p);
  if (ec == 0.0) return 0.0;
  double m2 = second_moment_fourier(f, p);
  return (1.0 - theta) * ec * ec / m2;
}

// Upper bound on E[C^2] for increasing f:
// E[C] + E[C]^2 + 4(1-2p)^2 E[C] + 32 p(1-p) n Var(f).
inline double increasing_upper_bound(const BooleanFunction& f, const BiasParam& p) {
  if (!is_increasing(f)) {
    throw std::invalid_argument("increasing_upper_bound: function is not increasing");
  }
  double ec = expected_count(f, p);
  double mu = nondegeneracy(f, p).value;
  double var = mu - mu * mu;
  double pv = p.value();
  double one_minus_2p = 1.0 - 2.0 * pv;
  return ec + ec * ec + 4.0 * one_minus_2p * one_minus_2p * ec +
         32.0 * pv * (1.0 - pv) * double(f.n()) * var;
}

struct CriterionResult {
  double ratio = 0.0;
  bool satisfied = false;
};

// ratio = p(1-p) n Var(f) / I(f)^2; satisfied iff ratio <= c_const.
inline CriterionResult nontame_criterion(const BooleanFunction& f, const BiasParam& p,
                                         double c_const) {
  InfluenceProfile prof = influence_profile(f, p);
  if (prof.total <= 0.0) {
    throw std::domain_error("nontame_criterion: I(f)=0, ratio undefined");
  }
  double mu = nondegeneracy(f, p).value;
  double var = mu - mu * mu;
  double ratio = p.value() * (1.0 - p.value()) * double(f.n()) * var / (prof.total * prof.total);
  return {ratio, ratio <= c_const};
}

struct RegularityReport {
  bool regular = false;
  double sq_sum = 0.0;        // sum of I_i^2
  double threshold_sq = 0.0;  // D^2
  bool applicable = false;    // regular and sq_sum > D^2
  double total_influence = 0.0;
  double influence_lower = 0.0;  // D sqrt(n)
  bool implication_holds = false;
  bool monotone_applicable = false;  // increasing f
  double monotone_upper = 0.0;       // sqrt(n p)
  bool monotone_holds = false;
};

// Checks the regularity consequence: if f is regular and sum I_i^2 > D^2,
// then I(f) >= D sqrt(n). Also reports the monotone diagnostic I(f) <= sqrt(np)
// (meaningful for increasing f only).
inline RegularityReport regularity_influence_bound(const BooleanFunction& f, const BiasParam& p,
                                                   double d) {
  InfluenceProfile prof = influence_profile(f, p);
  RegularityReport r;
  r.regular = is_regular(prof);
  r.sq_sum = prof.sq_sum;
  r.threshold_sq = d * d;
  r.total_influence = prof.total;
  r.influence_lower = d * std::sqrt(double(f.n()));
  r.applicable = r.regular && r.sq_sum > r.threshold_sq;
  r.implication_holds = !r.applicable || r.total_influence + 1e-12 >= r.influence_lower;
  r.monotone_applicable = is_increasing(f);
  r.monotone_upper = std::sqrt(double(f.n()) * p.value());
  r.monotone_holds = r.monotone_applicable && prof.total <= r.monotone_upper + 1e-12;
  return r;
}

// One function, one bias: every moment route plus the bounds, with residuals.
struct MomentReport {
  std::string function_name;
  int n = 0;
  double p = 0.0;
  double expected_count = 0.0;
  double second_series = 0.0;
  double second_fourier = 0.0;
  std::optional<double> second_increasing;
  double variance_f = 0.0;
  std::vector<std::pair<double, double>> pz;  // (theta, bound)
  std::optional<double> increasing_upper;
  std::optional<double> criterion_ratio;  // absent when I(f)=0
  InfluenceProfile influence;
};

inline MomentReport moment_report(const BooleanFunction& f, const BiasParam& p,
                                  const TruncationPolicy& policy = {},
                                  const std::vector<double>& thetas = {0.25, 0.5, 0.75}) {
  MomentReport r;
  r.function_name = f.name();
  r.n = f.n();
  r.p = p.value();
  r.influence = influence_profile(f, p);
  r.expected_count = expected_count(f, p);
  r.second_series = second_moment_series(f, p, policy);
  r.second_fourier = second_moment_fourier(f, p);
  double mu = nondegeneracy(f, p).value;
  r.variance_f = mu - mu * mu;
  bool incr = is_increasing(f);
  if (incr) {
    r.second_increasing = second_moment_increasing(f, p);
    r.increasing_upper = increasing_upper_bound(f, p);
  }
  for (double th : thetas) {
    double bound = 0.0;
    if (r.expected_count > 0.0) {
      bound = (1.0 - th) * r.expected_count * r.expected_count / r.second_fourier;
    }
    r.pz.emplace_back(th, bound);
  }
  if (r.influence.total > 0.0) {
    r.criterion_ratio = p.value() * (1.0 - p.value()) * double(f.n()) * r.variance_f /
                        (r.influence.total * r.influence.total);
  }
  return r;
}

}  // namespace swc
