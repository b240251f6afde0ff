#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchcount/accum.hpp"

namespace swc {

// Coordinate convention, used everywhere: coordinate i in {1..n} lives at
// word bit position i-1; a truth table is indexed by the little-endian word.
inline constexpr int kMaxWordDim = 63;

// Dimension cap for routines that touch all 2^n points or hold dense
// 2^n-length vectors.
inline constexpr int kExactDimGate = 20;

class BiasParam {
 public:
  explicit BiasParam(double p) : p_(p) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("BiasParam: p must lie in (0,1), got " +
                                  std::to_string(p));
    }
  }

  double value() const { return p_; }

 private:
  double p_;
};

namespace detail {

inline void check_dim(int n) {
  if (n < 1 || n > kMaxWordDim) {
    throw std::invalid_argument("dimension out of range [1,63]: " +
                                std::to_string(n));
  }
}

inline void check_index(int i, int n) {
  if (i < 1 || i > n) {
    throw std::out_of_range("coordinate index " + std::to_string(i) +
                            " out of range [1," + std::to_string(n) + "]");
  }
}

inline void check_word(std::uint64_t bits, int n) {
  check_dim(n);
  if (n < 64 && (bits >> n) != 0) {
    throw std::invalid_argument("word has bits set above position n");
  }
}

}  // namespace detail

// A point x in {0,1}^n packed into a word.
struct Point {
  std::uint64_t bits = 0;
  int n = 1;

  Point(std::uint64_t bits_, int n_) : bits(bits_), n(n_) {
    detail::check_word(bits, n);
  }

  static Point zero(int n) { return Point(0, n); }

  int bit(int i) const {
    detail::check_index(i, n);
    return static_cast<int>((bits >> (i - 1)) & 1u);
  }

  bool operator==(const Point&) const = default;
};

// A subset S of [n] packed into a word.
struct SubsetMask {
  std::uint64_t bits = 0;
  int n = 1;

  SubsetMask(std::uint64_t bits_, int n_) : bits(bits_), n(n_) {
    detail::check_word(bits, n);
  }

  static SubsetMask empty(int n) { return SubsetMask(0, n); }
  static SubsetMask full(int n) {
    return SubsetMask(n == 64 ? ~0ull : ((1ull << n) - 1), n);
  }
  static SubsetMask singleton(int i, int n) {
    detail::check_index(i, n);
    return SubsetMask(1ull << (i - 1), n);
  }

  int size() const { return std::popcount(bits); }
  bool contains(int i) const {
    detail::check_index(i, n);
    return ((bits >> (i - 1)) & 1u) != 0;
  }

  bool operator==(const SubsetMask&) const = default;
};

inline Point flip_bit(const Point& x, int i) {
  detail::check_index(i, x.n);
  return Point(x.bits ^ (1ull << (i - 1)), x.n);
}

inline Point set_bit(const Point& x, int i, int y) {
  detail::check_index(i, x.n);
  if (y != 0 && y != 1) throw std::invalid_argument("bit value must be 0 or 1");
  std::uint64_t m = 1ull << (i - 1);
  return Point(y ? (x.bits | m) : (x.bits & ~m), x.n);
}

namespace detail {

// Raw-p resampling; p outside (0,1) is reachable only through this helper,
// BiasParam gates the public entry point.
template <typename Rng>
Point resample_bit_raw(const Point& x, int i, double p, Rng& rng) {
  check_index(i, x.n);
  double u = rng.uniform();
  return set_bit(x, i, u < p ? 1 : 0);
}

}  // namespace detail

template <typename Rng>
Point resample_bit(const Point& x, int i, const BiasParam& p, Rng& rng) {
  return detail::resample_bit_raw(x, i, p.value(), rng);
}

// The p-biased product measure on {0,1}^n.
class ProductMeasure {
 public:
  ProductMeasure(const BiasParam& p, int n) : p_(p.value()), n_(n) {
    detail::check_dim(n);
    pow_p_.resize(n + 1);
    pow_q_.resize(n + 1);
    pow_p_[0] = pow_q_[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
      pow_p_[k] = pow_p_[k - 1] * p_;
      pow_q_[k] = pow_q_[k - 1] * (1.0 - p_);
    }
  }

  int n() const { return n_; }
  double p() const { return p_; }

  double weight(const Point& x) const {
    if (x.n != n_) throw std::invalid_argument("measure/point dimension mismatch");
    return weight_word(x.bits);
  }

  double weight_word(std::uint64_t bits) const {
    int k = std::popcount(bits);
    return pow_p_[k] * pow_q_[n_ - k];
  }

  // Dense weight vector indexed by point word.
  std::vector<double> weight_vector() const {
    if (n_ > kExactDimGate + 4) {
      throw std::invalid_argument("weight_vector: dimension too large");
    }
    std::vector<double> w(std::size_t(1) << n_);
    for (std::size_t x = 0; x < w.size(); ++x) w[x] = weight_word(x);
    return w;
  }

 private:
  double p_;
  int n_;
  std::vector<double> pow_p_;
  std::vector<double> pow_q_;
};

inline double measure_weight(const ProductMeasure& pi, const Point& x) {
  return pi.weight(x);
}

}  // namespace swc
