#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "switchcount/hypercube.hpp"
#include "switchcount/rng.hpp"

namespace swc {

// Truth tables are materialized up to this dimension (2^24 bytes).
inline constexpr int kTableDimGate = 24;

enum class Family {
  Dictator,
  Majority,
  Parity,
  Tribes,
  And,
  Or,
  Custom,
};

struct FamilySpec {
  Family kind = Family::Custom;
  int tribe_size = 0;     // Tribes only; must divide n
  std::string table_path;  // Custom only

  static FamilySpec dictator() { return {Family::Dictator, 0, {}}; }
  static FamilySpec majority() { return {Family::Majority, 0, {}}; }
  static FamilySpec parity() { return {Family::Parity, 0, {}}; }
  static FamilySpec tribes(int tribe_size) { return {Family::Tribes, tribe_size, {}}; }
  static FamilySpec all_and() { return {Family::And, 0, {}}; }
  static FamilySpec any_or() { return {Family::Or, 0, {}}; }
};

namespace detail {

inline void validate_family(const FamilySpec& spec, int n) {
  if (spec.kind == Family::Tribes) {
    if (spec.tribe_size < 1 || n % spec.tribe_size != 0) {
      throw std::invalid_argument("tribes: tribe_size must divide n");
    }
  }
}

inline int eval_family_word(const FamilySpec& spec, std::uint64_t bits, int n) {
  switch (spec.kind) {
    case Family::Dictator:
      return static_cast<int>(bits & 1u);
    case Family::Majority:
      return 2 * std::popcount(bits) >= n ? 1 : 0;
    case Family::Parity:
      return (std::popcount(bits) & 1) == 0 ? 1 : 0;
    case Family::Tribes: {
      int w = spec.tribe_size;
      std::uint64_t tribe = (w == 64) ? ~0ull : ((1ull << w) - 1);
      for (int t = 0; t < n / w; ++t) {
        if ((bits & tribe) == tribe) return 1;
        bits >>= w;
      }
      return 0;
    }
    case Family::And:
      return std::popcount(bits) == n ? 1 : 0;
    case Family::Or:
      return bits != 0 ? 1 : 0;
    case Family::Custom:
      throw std::logic_error("custom family has no formula backing");
  }
  throw std::logic_error("unknown family");
}

inline std::string family_name(const FamilySpec& spec, int n) {
  switch (spec.kind) {
    case Family::Dictator: return "dictator_" + std::to_string(n);
    case Family::Majority: return "majority_" + std::to_string(n);
    case Family::Parity: return "parity_" + std::to_string(n);
    case Family::Tribes:
      return "tribes_" + std::to_string(spec.tribe_size) + "_" + std::to_string(n);
    case Family::And: return "and_" + std::to_string(n);
    case Family::Or: return "or_" + std::to_string(n);
    case Family::Custom: return "custom_" + std::to_string(n);
  }
  return "unknown";
}

}  // namespace detail

// f: {0,1}^n -> {0,1}, backed by a truth table (index = little-endian point
// word), a family formula, or both. Families beyond the table gate stay
// formula-only; the simulator handles them incrementally.
class BooleanFunction {
 public:
  static BooleanFunction from_family(const FamilySpec& spec, int n) {
    detail::check_dim(n);
    detail::validate_family(spec, n);
    BooleanFunction f;
    f.n_ = n;
    f.family_ = spec;
    f.name_ = detail::family_name(spec, n);
    if (n <= kTableDimGate) {
      f.table_.emplace(std::size_t(1) << n);
      for (std::size_t x = 0; x < f.table_->size(); ++x) {
        (*f.table_)[x] = static_cast<std::uint8_t>(detail::eval_family_word(spec, x, n));
      }
    }
    return f;
  }

  static BooleanFunction dictator(int n) { return from_family(FamilySpec::dictator(), n); }
  static BooleanFunction majority(int n) { return from_family(FamilySpec::majority(), n); }
  static BooleanFunction parity(int n) { return from_family(FamilySpec::parity(), n); }
  static BooleanFunction tribes(int tribe_size, int n) {
    return from_family(FamilySpec::tribes(tribe_size), n);
  }
  static BooleanFunction all_and(int n) { return from_family(FamilySpec::all_and(), n); }
  static BooleanFunction any_or(int n) { return from_family(FamilySpec::any_or(), n); }

  static BooleanFunction constant(int value, int n, std::string name = "") {
    detail::check_dim(n);
    if (n > kTableDimGate) throw std::invalid_argument("constant: n too large for table");
    BooleanFunction f;
    f.n_ = n;
    f.name_ = name.empty() ? ("const" + std::to_string(value) + "_" + std::to_string(n)) : std::move(name);
    f.table_.emplace(std::size_t(1) << n, static_cast<std::uint8_t>(value != 0));
    return f;
  }

  static BooleanFunction from_table(std::vector<std::uint8_t> table, int n,
                                    std::string name = "table") {
    detail::check_dim(n);
    if (table.size() != (std::size_t(1) << n)) {
      throw std::invalid_argument("truth table length must be 2^n");
    }
    for (auto& b : table) {
      if (b > 1) throw std::invalid_argument("truth table entries must be 0/1");
    }
    BooleanFunction f;
    f.n_ = n;
    f.name_ = std::move(name);
    f.table_ = std::move(table);
    return f;
  }

  // File format: line 1 "n=<int>", line 2 exactly 2^n characters of '0'/'1'
  // in little-endian point order.
  static BooleanFunction load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open truth table file: " + path);
    std::string header, row;
    if (!std::getline(in, header) || header.rfind("n=", 0) != 0) {
      throw std::runtime_error("truth table file must start with 'n=<int>'");
    }
    int n = std::stoi(header.substr(2));
    detail::check_dim(n);
    if (n > kTableDimGate) throw std::runtime_error("truth table dimension too large");
    if (!std::getline(in, row)) throw std::runtime_error("missing truth table row");
    if (row.size() != (std::size_t(1) << n)) {
      throw std::runtime_error("truth table row has wrong length for n=" + std::to_string(n));
    }
    std::vector<std::uint8_t> table(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] != '0' && row[i] != '1') {
        throw std::runtime_error("truth table row must be '0'/'1' characters");
      }
      table[i] = static_cast<std::uint8_t>(row[i] - '0');
    }
    BooleanFunction f = from_table(std::move(table), n, path);
    f.family_ = FamilySpec{Family::Custom, 0, path};
    return f;
  }

  void save_table(const std::string& path) const {
    require_table("save_table");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write truth table file: " + path);
    out << "n=" << n_ << "\n";
    for (std::uint8_t b : *table_) out << char('0' + b);
    out << "\n";
  }

  int n() const { return n_; }
  const std::string& name() const { return name_; }
  bool has_table() const { return table_.has_value(); }
  const std::vector<std::uint8_t>& table() const {
    require_table("table");
    return *table_;
  }
  const std::optional<FamilySpec>& family() const { return family_; }

  int evaluate(const Point& x) const {
    if (x.n != n_) throw std::invalid_argument("evaluate: dimension mismatch");
    return value_at(x.bits);
  }

  int value_at(std::uint64_t word) const {
    if (table_) return (*table_)[word];
    return detail::eval_family_word(*family_, word, n_);
  }

 private:
  void require_table(const char* who) const {
    if (!table_) {
      throw std::invalid_argument(std::string(who) + ": function has no truth table backing (n=" +
                                  std::to_string(n_) + ")");
    }
  }

  int n_ = 1;
  std::string name_;
  std::optional<std::vector<std::uint8_t>> table_;
  std::optional<FamilySpec> family_;
};

inline int evaluate(const BooleanFunction& f, const Point& x) { return f.evaluate(x); }

// True iff f(x) <= f(x') whenever x <= x' coordinatewise; checked on all
// covering pairs.
inline bool is_increasing(const BooleanFunction& f) {
  const auto& t = f.table();
  int n = f.n();
  std::size_t size = std::size_t(1) << n;
  for (std::size_t x = 0; x < size; ++x) {
    for (int b = 0; b < n; ++b) {
      std::uint64_t m = 1ull << b;
      if ((x & m) == 0 && t[x] > t[x | m]) return false;
    }
  }
  return true;
}

struct ProbabilityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
};

// P(f(X_0)=1) under the p-biased measure; exact when a table fits the gate.
inline ProbabilityEstimate nondegeneracy(const BooleanFunction& f, const BiasParam& p) {
  if (!f.has_table() || f.n() > kExactDimGate) {
    throw std::invalid_argument("nondegeneracy: exact mode needs a truth table within the gate");
  }
  ProductMeasure pi(p, f.n());
  NeumaierSum acc;
  const auto& t = f.table();
  for (std::size_t x = 0; x < t.size(); ++x) {
    if (t[x]) acc.add(pi.weight_word(x));
  }
  return {acc.value(), 0.0, true};
}

inline ProbabilityEstimate nondegeneracy_estimate(const BooleanFunction& f, const BiasParam& p,
                                                  long long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("nondegeneracy_estimate: trials >= 1");
  int n = f.n();
  if (n > kMaxWordDim) {
    throw std::invalid_argument("nondegeneracy_estimate: word-backed sampling needs n <= 63");
  }
  long long ones = 0;
  for (long long t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    std::uint64_t x = 0;
    for (int i = 0; i < n; ++i) {
      if (rng.bernoulli(p.value())) x |= (1ull << i);
    }
    ones += f.value_at(x);
  }
  double q = double(ones) / double(trials);
  double se = std::sqrt(std::max(q * (1.0 - q), 1e-300) / double(trials));
  return {q, se, false};
}

}  // namespace swc
