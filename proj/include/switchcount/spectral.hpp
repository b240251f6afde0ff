#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchcount/function.hpp"
#include "switchcount/hypercube.hpp"

namespace swc {

// Normalizing constants of the biased basis: sigma = sqrt(p(1-p)) and
// lambda = (1-2p)/sigma. lambda vanishes exactly at p = 1/2.
struct BasisScale {
  double sigma;
  double lambda;

  explicit BasisScale(const BiasParam& p)
      : sigma(std::sqrt(p.value() * (1.0 - p.value()))),
        lambda((1.0 - 2.0 * p.value()) / sigma) {}
};

// Dense coefficient table S -> coeffs[S.bits] for one (n, p).
class Spectrum {
 public:
  Spectrum(int n, double p, std::vector<double> coeffs)
      : n_(n), p_(p), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != (std::size_t(1) << n)) {
      throw std::invalid_argument("spectrum length must be 2^n");
    }
  }

  int n() const { return n_; }
  double p() const { return p_; }
  double operator[](std::uint64_t mask) const { return coeffs_[mask]; }
  double at(const SubsetMask& s) const {
    if (s.n != n_) throw std::invalid_argument("spectrum/mask dimension mismatch");
    return coeffs_[s.bits];
  }
  const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  int n_;
  double p_;
  std::vector<double> coeffs_;
};

inline double chi_eval(const SubsetMask& s, const Point& x, const BiasParam& p) {
  if (s.n != x.n) throw std::invalid_argument("chi_eval: dimension mismatch");
  BasisScale sc(p);
  double hi = (1.0 - p.value()) / sc.sigma;  // factor when x(i)=1
  double lo = -p.value() / sc.sigma;         // factor when x(i)=0
  int ones = std::popcount(s.bits & x.bits);
  int zeros = s.size() - ones;
  double v = 1.0;
  for (int k = 0; k < ones; ++k) v *= hi;
  for (int k = 0; k < zeros; ++k) v *= lo;
  return v;
}

// Dense chi_S as a vector over point words.
inline std::vector<double> chi_vector(std::uint64_t s_bits, int n, double p) {
  double sigma = std::sqrt(p * (1.0 - p));
  double hi = (1.0 - p) / sigma;
  double lo = -p / sigma;
  int s_size = std::popcount(s_bits);
  std::vector<double> out(std::size_t(1) << n);
  for (std::size_t x = 0; x < out.size(); ++x) {
    int ones = std::popcount(s_bits & x);
    double v = 1.0;
    for (int k = 0; k < ones; ++k) v *= hi;
    for (int k = 0; k < s_size - ones; ++k) v *= lo;
    out[x] = v;
  }
  return out;
}

namespace detail {

// One butterfly stage per coordinate. For the pair (v0, v1) = (value at
// x(i)=0, value at x(i)=1) the coefficients without/with coordinate i are
//   a = (1-p) v0 + p v1,   b = sqrt(p(1-p)) (v1 - v0),
// the unique 2x2 mixing consistent with the basis; the full transform is the
// tensor product of these stages.
inline void forward_butterfly(std::vector<double>& v, int n, double p) {
  double sigma = std::sqrt(p * (1.0 - p));
  std::size_t size = v.size();
  for (int b = 0; b < n; ++b) {
    std::size_t half = std::size_t(1) << b;
    for (std::size_t base = 0; base < size; base += 2 * half) {
      for (std::size_t j = base; j < base + half; ++j) {
        double v0 = v[j];
        double v1 = v[j + half];
        v[j] = (1.0 - p) * v0 + p * v1;
        v[j + half] = sigma * (v1 - v0);
      }
    }
  }
}

inline void inverse_butterfly(std::vector<double>& v, int n, double p) {
  double sigma = std::sqrt(p * (1.0 - p));
  double lo = -p / sigma;        // chi_{i}(x) at x(i)=0
  double hi = (1.0 - p) / sigma; // chi_{i}(x) at x(i)=1
  std::size_t size = v.size();
  for (int b = 0; b < n; ++b) {
    std::size_t half = std::size_t(1) << b;
    for (std::size_t base = 0; base < size; base += 2 * half) {
      for (std::size_t j = base; j < base + half; ++j) {
        double a = v[j];
        double c = v[j + half];
        v[j] = a + c * lo;
        v[j + half] = a + c * hi;
      }
    }
  }
}

}  // namespace detail

// Coefficients of an arbitrary real-valued vector over points, O(n 2^n).
inline Spectrum transform_values(std::vector<double> values, int n, const BiasParam& p) {
  if (values.size() != (std::size_t(1) << n)) {
    throw std::invalid_argument("transform_values: length must be 2^n");
  }
  detail::forward_butterfly(values, n, p.value());
  return Spectrum(n, p.value(), std::move(values));
}

inline Spectrum transform(const BooleanFunction& f, const BiasParam& p) {
  if (f.n() > kExactDimGate) {
    throw std::invalid_argument("transform: dimension exceeds exact gate");
  }
  const auto& t = f.table();
  std::vector<double> v(t.begin(), t.end());
  return transform_values(std::move(v), f.n(), p);
}

// Pointwise evaluation of the expansion at every point, O(n 2^n).
inline std::vector<double> evaluate_spectrum(const Spectrum& s) {
  std::vector<double> v = s.coeffs();
  detail::inverse_butterfly(v, s.n(), s.p());
  return v;
}

// Rounds the reconstruction back to bits; values farther than `guard` from
// {0,1} signal a corrupted spectrum.
inline BooleanFunction inverse_transform(const Spectrum& s, double guard = 1e-6) {
  std::vector<double> v = evaluate_spectrum(s);
  std::vector<std::uint8_t> bits(v.size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    double r = std::round(v[x]);
    if (std::abs(v[x] - r) > guard || (r != 0.0 && r != 1.0)) {
      throw std::runtime_error("inverse_transform: value " + std::to_string(v[x]) +
                               " is not within " + std::to_string(guard) + " of a bit");
    }
    bits[x] = static_cast<std::uint8_t>(r);
  }
  return BooleanFunction::from_table(std::move(bits), s.n(), "reconstructed");
}

inline double inner_product(const BooleanFunction& f, const BooleanFunction& g,
                            const BiasParam& p) {
  if (f.n() != g.n()) throw std::invalid_argument("inner_product: dimension mismatch");
  ProductMeasure pi(p, f.n());
  const auto& tf = f.table();
  const auto& tg = g.table();
  NeumaierSum acc;
  for (std::size_t x = 0; x < tf.size(); ++x) {
    if (tf[x] && tg[x]) acc.add(pi.weight_word(x));
  }
  return acc.value();
}

// <fg, chi_S> from the spectra of f and g alone: the double sum over pairs
// (T,T') with T^T' subset of S subset of T|T', weighted lambda^{|S&T&T'|}.
inline double product_coefficient(const BooleanFunction& f, const BooleanFunction& g,
                                  const SubsetMask& s, const BiasParam& p) {
  if (f.n() != g.n() || f.n() != s.n) {
    throw std::invalid_argument("product_coefficient: dimension mismatch");
  }
  int n = f.n();
  Spectrum fh = transform(f, p);
  Spectrum gh = transform(g, p);
  BasisScale sc(p);
  std::uint64_t full = (n == 64) ? ~0ull : ((1ull << n) - 1);
  std::uint64_t S = s.bits;
  NeumaierSum acc;
  // T = K|A, T' = K|(D\A) with D = T^T' a subset of S and K = T&T' covering S\D.
  std::uint64_t D = S;
  while (true) {
    std::uint64_t rest = full & ~S;
    std::uint64_t sub = S & ~D;  // forced part of K
    std::uint64_t M = rest;
    while (true) {
      std::uint64_t K = sub | M;
      int ks = std::popcount(K & S);
      double lam_pow = 1.0;
      for (int k = 0; k < ks; ++k) lam_pow *= sc.lambda;
      std::uint64_t A = D;
      while (true) {
        acc.add(fh[K | A] * gh[K | (D & ~A)] * lam_pow);
        if (A == 0) break;
        A = (A - 1) & D;
      }
      if (M == 0) break;
      M = (M - 1) & rest;
    }
    if (D == 0) break;
    D = (D - 1) & S;
  }
  return acc.value();
}

// E[chi_S chi_T chi_R] = 1(S^T^R == S&T&R) * lambda^{|S&T&R|}.
inline double tri_product_expectation(const SubsetMask& s, const SubsetMask& t,
                                      const SubsetMask& r, const BiasParam& p) {
  if (s.n != t.n || s.n != r.n) {
    throw std::invalid_argument("tri_product_expectation: dimension mismatch");
  }
  std::uint64_t sym = s.bits ^ t.bits ^ r.bits;
  std::uint64_t common = s.bits & t.bits & r.bits;
  if (sym != common) return 0.0;
  BasisScale sc(p);
  double v = 1.0;
  for (int k = 0; k < std::popcount(common); ++k) v *= sc.lambda;
  return v;
}

// chi_{S^T}(x) * prod_{i in S&T} (1 + lambda chi_{i}(x)); equals
// chi_S(x) chi_T(x) pointwise.
inline double pair_product_expand(const SubsetMask& s, const SubsetMask& t, const Point& x,
                                  const BiasParam& p) {
  if (s.n != t.n || s.n != x.n) {
    throw std::invalid_argument("pair_product_expand: dimension mismatch");
  }
  BasisScale sc(p);
  double v = chi_eval(SubsetMask(s.bits ^ t.bits, s.n), x, p);
  std::uint64_t both = s.bits & t.bits;
  while (both) {
    int b = std::countr_zero(both);
    both &= both - 1;
    v *= 1.0 + sc.lambda * chi_eval(SubsetMask(1ull << b, s.n), x, p);
  }
  return v;
}

// D_i f as a vector over points, evaluated through the spectrum:
// (1/sigma) sum_{T not containing i} fh(T|{i}) chi_T(x). Must match the
// direct difference f(x with bit i set) - f(x with bit i clear).
inline std::vector<double> derivative_expansion(const BooleanFunction& f, int i,
                                                const BiasParam& p) {
  detail::check_index(i, f.n());
  Spectrum s = transform(f, p);
  BasisScale sc(p);
  std::uint64_t m = 1ull << (i - 1);
  std::vector<double> shifted(s.coeffs().size(), 0.0);
  for (std::uint64_t t = 0; t < shifted.size(); ++t) {
    if ((t & m) == 0) shifted[t] = s[t | m] / sc.sigma;
  }
  detail::inverse_butterfly(shifted, f.n(), p.value());
  return shifted;
}

inline std::vector<double> derivative_direct(const BooleanFunction& f, int i) {
  detail::check_index(i, f.n());
  const auto& t = f.table();
  std::uint64_t m = 1ull << (i - 1);
  std::vector<double> out(t.size());
  for (std::uint64_t x = 0; x < t.size(); ++x) {
    out[x] = double(t[x | m]) - double(t[x & ~m]);
  }
  return out;
}

// --- spectrum CSV: columns mask (hex), subset (sorted indices), coefficient ---

namespace detail {

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string subset_string(std::uint64_t bits) {
  std::string out;
  while (bits) {
    int b = std::countr_zero(bits);
    bits &= bits - 1;
    if (!out.empty()) out += ' ';
    out += std::to_string(b + 1);
  }
  return out;
}

}  // namespace detail

inline void write_spectrum_csv(const Spectrum& s, std::ostream& out) {
  out << "mask,subset,coefficient\n";
  char hex[32];
  for (std::uint64_t mask = 0; mask < s.coeffs().size(); ++mask) {
    std::snprintf(hex, sizeof(hex), "0x%llx", static_cast<unsigned long long>(mask));
    out << hex << "," << detail::subset_string(mask) << "," << detail::format_g17(s[mask])
        << "\n";
  }
}

inline void write_spectrum_csv(const Spectrum& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write spectrum CSV: " + path);
  write_spectrum_csv(s, out);
}

inline Spectrum read_spectrum_csv(std::istream& in, int n, double p) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("mask,subset,coefficient", 0) != 0) {
    throw std::runtime_error("spectrum CSV: bad header");
  }
  std::vector<double> coeffs(std::size_t(1) << n, 0.0);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw std::runtime_error("spectrum CSV: bad row: " + line);
    }
    std::uint64_t mask = std::stoull(line.substr(0, c1), nullptr, 16);
    if (mask >= coeffs.size()) throw std::runtime_error("spectrum CSV: mask out of range");
    coeffs[mask] = std::stod(line.substr(c2 + 1));
    ++rows;
  }
  if (rows != coeffs.size()) throw std::runtime_error("spectrum CSV: wrong row count");
  return Spectrum(n, p, std::move(coeffs));
}

inline Spectrum read_spectrum_csv(const std::string& path, int n, double p) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read spectrum CSV: " + path);
  return read_spectrum_csv(in, n, p);
}

}  // namespace swc
