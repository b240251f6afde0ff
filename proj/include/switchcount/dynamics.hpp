#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchcount/function.hpp"
#include "switchcount/hypercube.hpp"
#include "switchcount/spectral.hpp"

namespace swc {

inline constexpr int kPairingDimGate = 12;       // routes (a),(b),(c)
inline constexpr int kGeneralRouteDimGate = 8;   // route (d)

enum class OperatorKind { JumpChain, Boundary, Interior };

// Matrix-free Q_n / Q_df / Q_f. Row structure: the diagonal entry is
// (1/n) sum_i b(x(i)) and the neighbor entry toward x^e_i is (1/n) b(1-x(i)),
// where b(v) = p if v=1 else 1-p. Q_df keeps only neighbor entries across
// boundary edges (f changes) with zero diagonal; Q_f = Q_n - Q_df.
// Never materialized; every apply is O(n 2^n).
class JumpOperator {
 public:
  static JumpOperator jump_chain(int n, const BiasParam& p) {
    return JumpOperator(OperatorKind::JumpChain, std::nullopt, n, p.value());
  }
  static JumpOperator boundary(const BooleanFunction& f, const BiasParam& p) {
    return JumpOperator(OperatorKind::Boundary, f, f.n(), p.value());
  }
  static JumpOperator interior(const BooleanFunction& f, const BiasParam& p) {
    return JumpOperator(OperatorKind::Interior, f, f.n(), p.value());
  }

  OperatorKind kind() const { return kind_; }
  int n() const { return n_; }
  double p() const { return p_; }

  std::vector<double> apply(const std::vector<double>& v) const {
    std::vector<double> out(v.size());
    apply_into(v, out, false);
    return out;
  }

  std::vector<double> apply_transposed(const std::vector<double>& v) const {
    std::vector<double> out(v.size());
    apply_into(v, out, true);
    return out;
  }

  void apply_into(const std::vector<double>& v, std::vector<double>& out,
                  bool transposed = false) const {
    std::size_t size = std::size_t(1) << n_;
    if (v.size() != size || out.size() != size) {
      throw std::invalid_argument("apply: vector length must be 2^n");
    }
    double p = p_;
    double inv_n = 1.0 / n_;
    const std::vector<std::uint8_t>* table =
        kind_ == OperatorKind::JumpChain ? nullptr : &f_->table();
    for (std::size_t x = 0; x < size; ++x) {
      int pc = std::popcount(x);
      double diag = inv_n * (double(pc) * p + double(n_ - pc) * (1.0 - p));
      double acc = kind_ == OperatorKind::Boundary ? 0.0 : diag * v[x];
      for (int b = 0; b < n_; ++b) {
        std::size_t y = x ^ (std::size_t(1) << b);
        bool crosses = table && (*table)[x] != (*table)[y];
        if (kind_ == OperatorKind::Boundary && !crosses) continue;
        if (kind_ == OperatorKind::Interior && crosses) continue;
        // weight of the move: probability of drawing the destination bit
        // (transposed: the source bit).
        int drawn = int((transposed ? x : y) >> b) & 1;
        acc += inv_n * (drawn ? p : 1.0 - p) * v[y];
      }
      out[x] = acc;
    }
  }

 private:
  JumpOperator(OperatorKind kind, std::optional<BooleanFunction> f, int n, double p)
      : kind_(kind), f_(std::move(f)), n_(n), p_(p) {
    detail::check_dim(n);
    if (kind != OperatorKind::JumpChain) {
      if (!f_ || !f_->has_table()) {
        throw std::invalid_argument("boundary/interior operator needs a truth table");
      }
    }
  }

  OperatorKind kind_;
  std::optional<BooleanFunction> f_;
  int n_;
  double p_;
};

// sup-norm of (Q_n - I) chi_S + (|S|/n) chi_S; zero up to roundoff since the
// chi_S are eigenvectors with eigenvalue -|S|/n.
inline double eigen_residual(const SubsetMask& s, const BiasParam& p) {
  if (s.n > 16) throw std::invalid_argument("eigen_residual: gated at n <= 16");
  std::vector<double> chi = chi_vector(s.bits, s.n, p.value());
  JumpOperator qn = JumpOperator::jump_chain(s.n, p);
  std::vector<double> out = qn.apply(chi);
  double rate = double(s.size()) / double(s.n);
  double worst = 0.0;
  for (std::size_t x = 0; x < chi.size(); ++x) {
    worst = std::max(worst, std::abs(out[x] - chi[x] + rate * chi[x]));
  }
  return worst;
}

// Q_df applied to the all-ones vector: the (weighted) count of boundary
// neighbors at each point.
inline std::vector<double> sensitivity_function(const BooleanFunction& f, const BiasParam& p) {
  if (f.n() > kExactDimGate) {
    throw std::invalid_argument("sensitivity_function: dimension exceeds exact gate");
  }
  const auto& t = f.table();
  std::size_t size = t.size();
  double pv = p.value();
  double inv_n = 1.0 / f.n();
  std::vector<double> out(size, 0.0);
  for (std::size_t x = 0; x < size; ++x) {
    double acc = 0.0;
    for (int b = 0; b < f.n(); ++b) {
      std::size_t y = x ^ (std::size_t(1) << b);
      if (t[x] != t[y]) {
        int xi = int(x >> b) & 1;
        acc += xi ? (1.0 - pv) : pv;
      }
    }
    out[x] = acc * inv_n;
  }
  return out;
}

struct InfluenceProfile {
  std::vector<double> per_bit;  // I_1..I_n
  double total = 0.0;           // I(f)
  double sq_sum = 0.0;          // sum of I_i^2

  // The conventional flip-influence, I_i / (2p(1-p)).
  std::vector<double> normalized(double p) const {
    std::vector<double> out(per_bit);
    double d = 2.0 * p * (1.0 - p);
    for (auto& v : out) v /= d;
    return out;
  }
};

// I_i(f) = E[ (p(1-x(i)) + (1-p)x(i)) (D_i f(x))^2 ], exactly.
inline InfluenceProfile influence_profile(const BooleanFunction& f, const BiasParam& p) {
  if (f.n() > kExactDimGate) {
    throw std::invalid_argument("influence_profile: dimension exceeds exact gate");
  }
  const auto& t = f.table();
  int n = f.n();
  double pv = p.value();
  ProductMeasure pi(p, n);
  InfluenceProfile prof;
  prof.per_bit.resize(n);
  NeumaierSum total;
  for (int b = 0; b < n; ++b) {
    NeumaierSum acc;
    std::size_t m = std::size_t(1) << b;
    for (std::size_t x = 0; x < t.size(); ++x) {
      if (t[x] != t[x ^ m]) {
        int xi = int(x >> b) & 1;
        acc.add(pi.weight_word(x) * (xi ? (1.0 - pv) : pv));
      }
    }
    prof.per_bit[b] = acc.value();
    total.add(prof.per_bit[b]);
    prof.sq_sum += prof.per_bit[b] * prof.per_bit[b];
  }
  prof.total = total.value();
  return prof;
}

// Monte Carlo influence estimate for family-backed functions past the exact
// gate (one resample of every coordinate per trial).
inline InfluenceProfile influence_profile_estimate(const BooleanFunction& f, const BiasParam& p,
                                                   long long trials, std::uint64_t seed) {
  int n = f.n();
  if (n > kMaxWordDim) {
    throw std::invalid_argument("influence_profile_estimate: needs n <= 63");
  }
  std::vector<long long> hits(n, 0);
  for (long long t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    std::uint64_t x = 0;
    for (int i = 0; i < n; ++i) {
      if (rng.bernoulli(p.value())) x |= (1ull << i);
    }
    int fx = f.value_at(x);
    for (int b = 0; b < n; ++b) {
      std::uint64_t m = 1ull << b;
      std::uint64_t y = rng.bernoulli(p.value()) ? (x | m) : (x & ~m);
      if (y != x && f.value_at(y) != fx) ++hits[b];
    }
  }
  InfluenceProfile prof;
  prof.per_bit.resize(n);
  NeumaierSum total;
  for (int b = 0; b < n; ++b) {
    prof.per_bit[b] = double(hits[b]) / double(trials);
    total.add(prof.per_bit[b]);
    prof.sq_sum += prof.per_bit[b] * prof.per_bit[b];
  }
  prof.total = total.value();
  return prof;
}

inline bool is_regular(const InfluenceProfile& prof, double tol = 1e-10) {
  if (prof.per_bit.empty()) return true;
  double lo = prof.per_bit[0], hi = prof.per_bit[0];
  for (double v : prof.per_bit) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo <= tol;
}

// pi^T Q_df chi_S computed by up to four routes that must agree:
//   direct           pi . (Q_df chi_S)
//   via_sensitivity  <Q_df 1, chi_S>
//   increasing_form  (1/n)[(1-2p)|S| fh(S) + 2 sigma sum_{i not in S} fh(S|{i})]
//   general_form     the spectral double sum over pairs (T,T')
struct PairingReport {
  SubsetMask s;
  double direct = 0.0;
  double via_sensitivity = 0.0;
  std::optional<double> increasing_form;
  std::optional<double> general_form;

  double max_spread() const {
    double lo = std::min(direct, via_sensitivity);
    double hi = std::max(direct, via_sensitivity);
    for (const auto& v : {increasing_form, general_form}) {
      if (v) {
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
    }
    return hi - lo;
  }
};

namespace detail {

inline double pairing_increasing_form(const Spectrum& fh, std::uint64_t S, int n, double p) {
  double sigma = std::sqrt(p * (1.0 - p));
  NeumaierSum acc;
  acc.add((1.0 - 2.0 * p) * double(std::popcount(S)) * fh[S]);
  for (int b = 0; b < n; ++b) {
    std::uint64_t m = 1ull << b;
    if ((S & m) == 0) acc.add(2.0 * sigma * fh[S | m]);
  }
  return acc.value() / double(n);
}

// Pairs (T,T') with T^T' subset of S subset of T|T' enumerated as
// T = K|A, T' = K|(D\A): D over submasks of S, A over submasks of D,
// K = (S\D)|M with M over submasks of the complement of S. Cost 3^|S| 2^(n-|S|).
inline double pairing_general_form(const Spectrum& fh, std::uint64_t S, int n, double p) {
  double sigma = std::sqrt(p * (1.0 - p));
  double lambda = (1.0 - 2.0 * p) / sigma;
  std::uint64_t full = (n == 64) ? ~0ull : ((1ull << n) - 1);
  NeumaierSum acc;
  std::uint64_t D = S;
  while (true) {
    std::uint64_t forced = S & ~D;
    int ks = std::popcount(forced);  // |S & T & T'|
    double lam_pow = 1.0;
    for (int k = 0; k < ks; ++k) lam_pow *= lambda;
    std::uint64_t rest = full & ~S;
    std::uint64_t M = rest;
    while (true) {
      std::uint64_t K = forced | M;
      double weight = lam_pow * double(2 * std::popcount(K) - ks);
      if (weight != 0.0) {
        std::uint64_t A = D;
        while (true) {
          acc.add(fh[K | A] * fh[K | (D & ~A)] * weight);
          if (A == 0) break;
          A = (A - 1) & D;
        }
      }
      if (M == 0) break;
      M = (M - 1) & rest;
    }
    if (D == 0) break;
    D = (D - 1) & S;
  }
  return acc.value() / double(n);
}

}  // namespace detail

struct PairingOptions {
  bool want_increasing_form = true;  // filled only when f is increasing
  bool want_general_form = true;     // filled only within its gate
  bool verify = false;               // throw if routes spread beyond tolerance
  double tolerance = 1e-9;
};

inline PairingReport boundary_pairing(const BooleanFunction& f, const SubsetMask& s,
                                      const BiasParam& p, const PairingOptions& opt = {}) {
  if (f.n() != s.n) throw std::invalid_argument("boundary_pairing: dimension mismatch");
  if (f.n() > kPairingDimGate) {
    throw std::invalid_argument("boundary_pairing: gated at n <= 12");
  }
  int n = f.n();
  ProductMeasure pi(p, n);
  std::vector<double> weights = pi.weight_vector();
  std::vector<double> chi = chi_vector(s.bits, n, p.value());

  PairingReport report{s};
  JumpOperator qdf = JumpOperator::boundary(f, p);
  report.direct = compensated_dot(weights, qdf.apply(chi));

  std::vector<double> sens = sensitivity_function(f, p);
  {
    NeumaierSum acc;
    for (std::size_t x = 0; x < sens.size(); ++x) acc.add(weights[x] * sens[x] * chi[x]);
    report.via_sensitivity = acc.value();
  }

  if (opt.want_increasing_form || opt.want_general_form) {
    Spectrum fh = transform(f, p);
    if (opt.want_increasing_form && is_increasing(f)) {
      report.increasing_form = detail::pairing_increasing_form(fh, s.bits, n, p.value());
    }
    if (opt.want_general_form && n <= kGeneralRouteDimGate) {
      report.general_form = detail::pairing_general_form(fh, s.bits, n, p.value());
    }
  }

  if (opt.verify && report.max_spread() > opt.tolerance) {
    throw std::runtime_error("boundary_pairing: routes disagree by " +
                             std::to_string(report.max_spread()) + " at mask " +
                             std::to_string(s.bits));
  }
  return report;
}

}  // namespace swc
