// Test-only oracles, independent of the library's computation paths:
// naive quadratic transforms, dense operator matrices, Poisson closed forms.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "switchcount/function.hpp"
#include "switchcount/hypercube.hpp"

namespace oracle {

inline double pi_weight(std::uint64_t x, int n, double p) {
  int k = std::popcount(x);
  return std::pow(p, k) * std::pow(1.0 - p, n - k);
}

inline double chi(std::uint64_t s, std::uint64_t x, double p) {
  double sigma = std::sqrt(p * (1.0 - p));
  double v = 1.0;
  for (std::uint64_t rest = s; rest; rest &= rest - 1) {
    int b = std::countr_zero(rest);
    v *= (double((x >> b) & 1u) - p) / sigma;
  }
  return v;
}

// O(4^n) double loop; the butterfly must match this.
inline std::vector<double> naive_transform(const std::vector<double>& values, int n, double p) {
  std::size_t size = std::size_t(1) << n;
  std::vector<double> coeffs(size, 0.0);
  for (std::uint64_t s = 0; s < size; ++s) {
    double acc = 0.0;
    for (std::uint64_t x = 0; x < size; ++x) {
      acc += pi_weight(x, n, p) * values[x] * chi(s, x, p);
    }
    coeffs[s] = acc;
  }
  return coeffs;
}

// Dense 2^n x 2^n jump-chain matrix, built straight from the row definition.
inline std::vector<std::vector<double>> dense_qn(int n, double p) {
  std::size_t size = std::size_t(1) << n;
  std::vector<std::vector<double>> q(size, std::vector<double>(size, 0.0));
  for (std::uint64_t x = 0; x < size; ++x) {
    double diag = 0.0;
    for (int b = 0; b < n; ++b) {
      int xi = int(x >> b) & 1;
      diag += (1.0 - p) * (1 - xi) + p * xi;
      q[x][x ^ (1ull << b)] += (p * (1 - xi) + (1.0 - p) * xi) / n;
    }
    q[x][x] = diag / n;
  }
  return q;
}

inline std::vector<std::vector<double>> dense_qdf(const swc::BooleanFunction& f, double p) {
  int n = f.n();
  std::size_t size = std::size_t(1) << n;
  std::vector<std::vector<double>> q(size, std::vector<double>(size, 0.0));
  for (std::uint64_t x = 0; x < size; ++x) {
    for (int b = 0; b < n; ++b) {
      std::uint64_t y = x ^ (1ull << b);
      if (f.table()[x] != f.table()[y]) {
        int xi = int(x >> b) & 1;
        q[x][y] = (p * (1 - xi) + (1.0 - p) * xi) / n;
      }
    }
  }
  return q;
}

inline std::vector<double> dense_apply(const std::vector<std::vector<double>>& q,
                                       const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t x = 0; x < v.size(); ++x) {
    for (std::size_t y = 0; y < v.size(); ++y) out[x] += q[x][y] * v[y];
  }
  return out;
}

// pi^T Q_df chi_S straight from the dense matrix.
inline double dense_pairing(const swc::BooleanFunction& f, std::uint64_t s, double p) {
  int n = f.n();
  auto q = dense_qdf(f, p);
  std::size_t size = std::size_t(1) << n;
  double acc = 0.0;
  for (std::uint64_t x = 0; x < size; ++x) {
    for (std::uint64_t y = 0; y < size; ++y) {
      acc += pi_weight(x, n, p) * q[x][y] * chi(s, y, p);
    }
  }
  return acc;
}

inline double poisson_pmf(int k, double lambda) {
  double logp = -lambda + k * std::log(lambda) - std::lgamma(double(k) + 1.0);
  return std::exp(logp);
}

inline swc::BooleanFunction random_function(int n, std::mt19937_64& gen) {
  std::vector<std::uint8_t> table(std::size_t(1) << n);
  for (auto& b : table) b = std::uint8_t(gen() & 1u);
  return swc::BooleanFunction::from_table(std::move(table), n, "rand");
}

inline swc::BooleanFunction random_increasing(int n, std::mt19937_64& gen) {
  std::vector<std::uint8_t> table(std::size_t(1) << n);
  std::bernoulli_distribution coin(0.35);
  for (auto& b : table) b = coin(gen) ? 1 : 0;
  for (std::size_t x = 0; x < table.size(); ++x) {
    for (int b = 0; b < n; ++b) {
      std::uint64_t m = 1ull << b;
      if ((x & m) == 0 && table[x]) table[x | m] = 1;
    }
  }
  return swc::BooleanFunction::from_table(std::move(table), n, "rand-incr");
}

}  // namespace oracle
