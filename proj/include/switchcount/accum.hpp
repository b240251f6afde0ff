#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace swc {

// Neumaier compensated summation. Keeps long expectation sums honest at
// the 1e-10 tolerances used throughout.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

inline double compensated_dot(const std::vector<double>& a,
                              const std::vector<double>& b) {
  NeumaierSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

inline double compensated_sum(const std::vector<double>& a) {
  NeumaierSum acc;
  for (double v : a) acc.add(v);
  return acc.value();
}

}  // namespace swc
