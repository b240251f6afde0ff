#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "switchcount/dynamics.hpp"
#include "switchcount/function.hpp"
#include "switchcount/hypercube.hpp"
#include "switchcount/moments.hpp"
#include "switchcount/rng.hpp"

namespace swc {

inline constexpr int kExactDistDimGate = 12;

struct TrajectoryStats {
  long long count = 0;  // switches of f in (0,1)
  long long jumps = 0;  // total resampling events
  std::uint64_t seed = 0;
};

struct McConfig {
  long long trials = 100000;
  std::uint64_t seed = 1;
  long long batch = 0;  // 0: pick from hardware concurrency
  int tail_k_max = 16;
};

// O(1)-update evaluation state for one trajectory. Family functions carry a
// sufficient statistic (running sum, parity, per-tribe counts) so an event
// costs O(1) even at n in the millions; table-backed functions keep the point
// word and look up directly.
class IncrementalEvaluator {
 public:
  // Family evaluator; n may exceed the word/table gates.
  IncrementalEvaluator(const FamilySpec& spec, long long n) : n_(n), spec_(spec) {
    if (n < 1) throw std::invalid_argument("evaluator: n >= 1");
    if (spec.kind == Family::Custom) {
      throw std::invalid_argument("custom family needs a table-backed function");
    }
    if (spec.kind == Family::Tribes) {
      if (spec.tribe_size < 1 || n % spec.tribe_size != 0) {
        throw std::invalid_argument("tribes: tribe_size must divide n");
      }
      tribe_counts_.assign(std::size_t(n_ / spec_.tribe_size), 0);
    }
    bits_.assign(std::size_t(n_), 0);
  }

  explicit IncrementalEvaluator(const BooleanFunction& f) : n_(f.n()) {
    if (f.family() && f.family()->kind != Family::Custom) {
      spec_ = *f.family();
      if (spec_.kind == Family::Tribes) {
        tribe_counts_.assign(std::size_t(n_ / spec_.tribe_size), 0);
      }
    } else {
      spec_.kind = Family::Custom;
      table_ = &f.table();
    }
    bits_.assign(std::size_t(n_), 0);
  }

  long long n() const { return n_; }

  template <typename Rng>
  void reset(Rng& rng, double p) {
    word_ = 0;
    ones_ = 0;
    complete_tribes_ = 0;
    if (!tribe_counts_.empty()) std::fill(tribe_counts_.begin(), tribe_counts_.end(), 0);
    for (long long i = 0; i < n_; ++i) {
      int v = rng.bernoulli(p) ? 1 : 0;
      bits_[std::size_t(i)] = std::uint8_t(v);
      if (v) {
        ++ones_;
        if (table_) word_ |= (1ull << i);
        if (spec_.kind == Family::Tribes) {
          auto t = std::size_t(i / spec_.tribe_size);
          if (++tribe_counts_[t] == spec_.tribe_size) ++complete_tribes_;
        }
      }
    }
  }

  void reset_bits(const std::vector<std::uint8_t>& bits) {
    if (bits.size() != std::size_t(n_)) {
      throw std::invalid_argument("reset_bits: wrong length");
    }
    struct Replay {
      const std::vector<std::uint8_t>* src;
      std::size_t i = 0;
      bool bernoulli(double) { return (*src)[i++] != 0; }
    } replay{&bits};
    reset(replay, 0.0);
  }

  int bit(long long i) const { return bits_[std::size_t(i)]; }

  // Assign coordinate i (0-based) to v, updating the statistic.
  void assign(long long i, int v) {
    int old = bits_[std::size_t(i)];
    if (old == v) return;
    bits_[std::size_t(i)] = std::uint8_t(v);
    ones_ += v ? 1 : -1;
    if (table_) word_ ^= (1ull << i);
    if (spec_.kind == Family::Tribes) {
      auto t = std::size_t(i / spec_.tribe_size);
      int c = tribe_counts_[t] += v ? 1 : -1;
      if (v && c == spec_.tribe_size) ++complete_tribes_;
      if (!v && c == spec_.tribe_size - 1) --complete_tribes_;
    }
  }

  int value() const {
    switch (spec_.kind) {
      case Family::Dictator: return bits_[0];
      case Family::Majority: return 2 * ones_ >= n_ ? 1 : 0;
      case Family::Parity: return (ones_ & 1) == 0 ? 1 : 0;
      case Family::Tribes: return complete_tribes_ > 0 ? 1 : 0;
      case Family::And: return ones_ == n_ ? 1 : 0;
      case Family::Or: return ones_ > 0 ? 1 : 0;
      case Family::Custom: return (*table_)[word_];
    }
    return 0;
  }

 private:
  long long n_;
  FamilySpec spec_;
  const std::vector<std::uint8_t>* table_ = nullptr;
  std::vector<std::uint8_t> bits_;
  std::uint64_t word_ = 0;
  long long ones_ = 0;
  long long complete_tribes_ = 0;
  std::vector<int> tribe_counts_;
};

// One trajectory of the dynamics over (0,1): X_0 ~ pi_n, T ~ Poisson(n)
// events, each resampling a uniformly chosen coordinate. Event times are
// never drawn; only the ordered event sequence matters for the count.
// Deterministic given (seed, stream).
inline TrajectoryStats sample_count(IncrementalEvaluator& ev, const BiasParam& p,
                                    std::uint64_t seed, std::uint64_t stream = 0) {
  CounterRng rng(seed, stream);
  double pv = p.value();
  ev.reset(rng, pv);
  long long n = ev.n();
  long long jumps = poisson_draw(rng, double(n));
  TrajectoryStats stats{0, jumps, seed};
  int cur = ev.value();
  for (long long e = 0; e < jumps; ++e) {
    long long i = (long long)rng.uniform_below(std::uint64_t(n));
    int v = rng.bernoulli(pv) ? 1 : 0;
    if (v != ev.bit(i)) {
      ev.assign(i, v);
      int nv = ev.value();
      if (nv != cur) {
        ++stats.count;
        cur = nv;
      }
    }
  }
  return stats;
}

inline TrajectoryStats sample_count(const BooleanFunction& f, const BiasParam& p,
                                    std::uint64_t seed, std::uint64_t stream = 0) {
  IncrementalEvaluator ev(f);
  return sample_count(ev, p, seed, stream);
}

inline TrajectoryStats sample_count(const FamilySpec& spec, long long n, const BiasParam& p,
                                    std::uint64_t seed, std::uint64_t stream = 0) {
  IncrementalEvaluator ev(spec, n);
  return sample_count(ev, p, seed, stream);
}

// Final state of the underlying chain alone (no function), for stationarity
// checks; n <= 63.
inline std::uint64_t simulate_chain_final(int n, const BiasParam& p, std::uint64_t seed,
                                          std::uint64_t stream = 0) {
  detail::check_dim(n);
  CounterRng rng(seed, stream);
  double pv = p.value();
  std::uint64_t x = 0;
  for (int i = 0; i < n; ++i) {
    if (rng.bernoulli(pv)) x |= (1ull << i);
  }
  long long jumps = poisson_draw(rng, double(n));
  for (long long e = 0; e < jumps; ++e) {
    int i = int(rng.uniform_below(std::uint64_t(n)));
    std::uint64_t m = 1ull << i;
    x = rng.bernoulli(pv) ? (x | m) : (x & ~m);
  }
  return x;
}

struct McMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double se_mean = 0.0;
  double se_second = 0.0;
  std::vector<double> tail;  // P(C >= k), k = 0..tail_k_max
  long long trials = 0;
  std::uint64_t seed = 0;
};

// Batched Monte Carlo estimates. Trials run in parallel; trial t always uses
// stream t of cfg.seed, so the result is independent of scheduling.
template <typename MakeEvaluator>
McMoments monte_carlo_moments_impl(MakeEvaluator make_evaluator, const BiasParam& p,
                                   const McConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("monte_carlo_moments: trials >= 1");
  struct BatchSums {
    double c = 0.0, c2 = 0.0, c4 = 0.0;
    std::vector<long long> hist;
  };
  int kmax = cfg.tail_k_max;
  long long batch = cfg.batch;
  if (batch <= 0) {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    batch = std::max<long long>(1, (cfg.trials + hw - 1) / hw);
  }

  auto run_batch = [&](long long lo, long long hi) {
    BatchSums s;
    s.hist.assign(std::size_t(kmax) + 1, 0);
    IncrementalEvaluator ev = make_evaluator();
    for (long long t = lo; t < hi; ++t) {
      auto stats = sample_count(ev, p, cfg.seed, std::uint64_t(t));
      double c = double(stats.count);
      s.c += c;
      s.c2 += c * c;
      s.c4 += c * c * c * c;
      ++s.hist[std::size_t(std::min<long long>(stats.count, kmax))];
    }
    return s;
  };

  std::vector<std::future<BatchSums>> futures;
  for (long long lo = 0; lo < cfg.trials; lo += batch) {
    long long hi = std::min(cfg.trials, lo + batch);
    futures.push_back(std::async(std::launch::async, run_batch, lo, hi));
  }

  NeumaierSum sum_c, sum_c2, sum_c4;
  std::vector<long long> hist(std::size_t(kmax) + 1, 0);
  for (auto& fut : futures) {
    BatchSums s = fut.get();
    sum_c.add(s.c);
    sum_c2.add(s.c2);
    sum_c4.add(s.c4);
    for (std::size_t k = 0; k < hist.size(); ++k) hist[k] += s.hist[k];
  }

  McMoments out;
  out.trials = cfg.trials;
  out.seed = cfg.seed;
  double nt = double(cfg.trials);
  out.mean = sum_c.value() / nt;
  out.second_moment = sum_c2.value() / nt;
  double m4 = sum_c4.value() / nt;
  out.se_mean = std::sqrt(std::max(out.second_moment - out.mean * out.mean, 0.0) / nt);
  out.se_second =
      std::sqrt(std::max(m4 - out.second_moment * out.second_moment, 0.0) / nt);
  out.tail.resize(std::size_t(kmax) + 1);
  long long below = 0;
  for (int k = 0; k <= kmax; ++k) {
    out.tail[std::size_t(k)] = double(cfg.trials - below) / nt;
    below += hist[std::size_t(k)];
  }
  return out;
}

inline McMoments monte_carlo_moments(const BooleanFunction& f, const BiasParam& p,
                                     const McConfig& cfg) {
  return monte_carlo_moments_impl([&] { return IncrementalEvaluator(f); }, p, cfg);
}

inline McMoments monte_carlo_moments(const FamilySpec& spec, long long n, const BiasParam& p,
                                     const McConfig& cfg) {
  return monte_carlo_moments_impl([&] { return IncrementalEvaluator(spec, n); }, p, cfg);
}

struct CountDistribution {
  std::vector<double> probs;     // P(C = m), m = 0..k_max
  double truncation_mass = 0.0;  // mass beyond k_max plus uncovered jump tail

  double mean() const {
    NeumaierSum acc;
    for (std::size_t m = 1; m < probs.size(); ++m) acc.add(double(m) * probs[m]);
    return acc.value();
  }
  double second_moment() const {
    NeumaierSum acc;
    for (std::size_t m = 1; m < probs.size(); ++m) acc.add(double(m) * double(m) * probs[m]);
    return acc.value();
  }
};

// Exact law of C_f up to k_max: conditions on the Poisson(n) jump count,
// propagates count-stratified row vectors u_m <- u_m Q_f + u_{m-1} Q_df, and
// mixes over jump counts with Poisson weights. Mass that outruns k_max is
// accumulated into truncation_mass, so probs + truncation_mass is exactly 1.
inline CountDistribution exact_count_distribution(const BooleanFunction& f, const BiasParam& p,
                                                  int k_max,
                                                  const TruncationPolicy& policy = {}) {
  int n = f.n();
  if (n > kExactDistDimGate) {
    throw std::invalid_argument("exact_count_distribution: gated at n <= 12");
  }
  if (k_max < 0) throw std::invalid_argument("exact_count_distribution: k_max >= 0");
  ProductMeasure pim(p, n);
  JumpOperator qf = JumpOperator::interior(f, p);
  JumpOperator qdf = JumpOperator::boundary(f, p);
  std::vector<double> sens = sensitivity_function(f, p);

  std::size_t size = std::size_t(1) << n;
  std::vector<std::vector<double>> u(std::size_t(k_max) + 1);
  u[0] = pim.weight_vector();
  for (int m = 1; m <= k_max; ++m) u[std::size_t(m)].assign(size, 0.0);

  CountDistribution dist;
  dist.probs.assign(std::size_t(k_max) + 1, 0.0);

  double w = std::exp(-double(n));  // Poisson(n) weight at k jumps
  double cum = w;
  dist.probs[0] += w;  // zero jumps: all mass still at count 0

  double overflow = 0.0;
  NeumaierSum trunc_acc;
  std::vector<double> scratch(size), scratch2(size);
  int jump_cap = policy.resolve_k_max(n);
  bool certified = false;
  for (int k = 1; k <= jump_cap; ++k) {
    overflow += compensated_dot(u[std::size_t(k_max)], sens);
    for (int m = k_max; m >= 0; --m) {
      qf.apply_into(u[std::size_t(m)], scratch, /*transposed=*/true);
      if (m > 0) {
        qdf.apply_into(u[std::size_t(m - 1)], scratch2, /*transposed=*/true);
        for (std::size_t x = 0; x < size; ++x) scratch[x] += scratch2[x];
      }
      u[std::size_t(m)].swap(scratch);
    }
    w *= double(n) / double(k);
    cum += w;
    for (int m = 0; m <= k_max; ++m) {
      dist.probs[std::size_t(m)] += w * compensated_sum(u[std::size_t(m)]);
    }
    trunc_acc.add(w * overflow);
    if (1.0 - cum <= policy.tol && k >= n) {
      certified = true;
      break;
    }
  }
  if (!certified) {
    throw std::runtime_error("exact_count_distribution: jump truncation not certified");
  }
  dist.truncation_mass = trunc_acc.value() + (1.0 - cum);
  return dist;
}

}  // namespace swc
