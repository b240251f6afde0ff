#pragma once

#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "switchcount/function.hpp"
#include "switchcount/moments.hpp"
#include "switchcount/schedule.hpp"
#include "switchcount/simulate.hpp"

namespace swc {

struct SweepConfig {
  FamilySpec family;
  std::vector<long long> n_grid;
  Schedule schedule;
  std::vector<double> thetas = {0.25, 0.5, 0.75};
  std::vector<int> k_grid = {1, 2, 4, 8, 16};
  McConfig mc;
  TruncationPolicy policy;
};

// One n of a family sweep. Exact fields are absent past their dimension
// gates (emitted as explicit NA, never silently estimated); the Monte Carlo
// fields are always present.
struct SweepRow {
  long long n = 0;
  double p = 0.0;
  std::optional<double> prob_one;
  std::optional<double> influence_total;
  std::optional<double> influence_sq_sum;
  std::optional<double> expected_count;
  std::optional<double> second_series;
  std::optional<double> second_fourier;
  std::optional<double> second_increasing;
  std::optional<double> variance;
  std::vector<std::optional<double>> pz;  // aligned with thetas
  std::optional<double> increasing_upper;
  std::optional<double> criterion_ratio;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  std::vector<double> tail;  // aligned with k_grid
};

inline SweepRow sweep_one(const SweepConfig& cfg, long long n, double pv) {
  SweepRow row;
  row.n = n;
  row.p = pv;
  BiasParam p(pv);

  if (n <= kExactDimGate) {
    BooleanFunction f = BooleanFunction::from_family(cfg.family, int(n));
    row.prob_one = nondegeneracy(f, p).value;
    InfluenceProfile prof = influence_profile(f, p);
    row.influence_total = prof.total;
    row.influence_sq_sum = prof.sq_sum;
    row.expected_count = expected_count(f, p);
    double mu = *row.prob_one;
    row.variance = mu - mu * mu;
    if (prof.total > 0.0) {
      row.criterion_ratio = pv * (1.0 - pv) * double(n) * (*row.variance) /
                            (prof.total * prof.total);
    }
    bool incr = is_increasing(f);
    if (incr) row.increasing_upper = increasing_upper_bound(f, p);
    if (n <= kSecondMomentDimGate) {
      row.second_series = second_moment_series(f, p, cfg.policy);
      row.second_fourier = second_moment_fourier(f, p);
      if (incr) row.second_increasing = second_moment_increasing(f, p);
      for (double th : cfg.thetas) {
        double ec = *row.expected_count;
        row.pz.emplace_back(ec > 0.0 ? (1.0 - th) * ec * ec / *row.second_fourier : 0.0);
      }
    }
  }
  if (row.pz.empty()) row.pz.assign(cfg.thetas.size(), std::nullopt);

  McConfig mc = cfg.mc;
  int kmax = mc.tail_k_max;
  for (int k : cfg.k_grid) kmax = std::max(kmax, k);
  mc.tail_k_max = kmax;
  McMoments m = monte_carlo_moments(cfg.family, n, p, mc);
  row.mc_mean = m.mean;
  row.mc_se = m.se_mean;
  for (int k : cfg.k_grid) row.tail.push_back(m.tail[std::size_t(k)]);
  return row;
}

// Rows run in parallel across n and are joined in grid order.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  std::vector<double> biases;
  biases.reserve(cfg.n_grid.size());
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    biases.push_back(cfg.schedule.at(cfg.n_grid[i], i));  // validates before any work
  }
  std::vector<std::future<SweepRow>> futures;
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    futures.push_back(std::async(std::launch::async, sweep_one, std::cref(cfg), cfg.n_grid[i],
                                 biases[i]));
  }
  std::vector<SweepRow> rows;
  rows.reserve(futures.size());
  for (auto& fut : futures) rows.push_back(fut.get());
  return rows;
}

namespace detail {

inline std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline std::string csv_cell(const std::optional<double>& v) {
  return v ? format_g17(*v) : std::string("NA");
}

}  // namespace detail

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const SweepConfig& cfg,
                            std::ostream& out) {
  out << "n,p,prob_one,influence_total,influence_sq_sum,expected_count,second_series,"
         "second_fourier,second_increasing,variance";
  for (double th : cfg.thetas) out << ",pz_" << detail::format_short(th);
  out << ",increasing_upper,criterion_ratio,mc_mean,mc_se";
  for (int k : cfg.k_grid) out << ",tail_" << k;
  out << "\n";
  for (const auto& r : rows) {
    out << r.n << "," << detail::format_g17(r.p) << "," << detail::csv_cell(r.prob_one) << ","
        << detail::csv_cell(r.influence_total) << "," << detail::csv_cell(r.influence_sq_sum)
        << "," << detail::csv_cell(r.expected_count) << "," << detail::csv_cell(r.second_series)
        << "," << detail::csv_cell(r.second_fourier) << ","
        << detail::csv_cell(r.second_increasing) << "," << detail::csv_cell(r.variance);
    for (const auto& v : r.pz) out << "," << detail::csv_cell(v);
    out << "," << detail::csv_cell(r.increasing_upper) << ","
        << detail::csv_cell(r.criterion_ratio) << "," << detail::format_g17(r.mc_mean) << ","
        << detail::format_g17(r.mc_se);
    for (double t : r.tail) out << "," << detail::format_g17(t);
    out << "\n";
  }
}

}  // namespace swc
