#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace swc {

// Bias schedule p_n over an n grid. Every produced value must lie in (0,1);
// a schedule that steps outside is rejected before any computation starts.
struct Schedule {
  enum class Kind { Constant, Power, Inverse, Custom };

  Kind kind = Kind::Constant;
  double c = 0.5;
  double alpha = 0.5;
  std::vector<double> values;  // Custom

  double at(long long n, std::size_t index) const {
    double p = 0.0;
    switch (kind) {
      case Kind::Constant: p = c; break;
      case Kind::Power: p = c * std::pow(double(n), -alpha); break;
      case Kind::Inverse: p = c / double(n); break;
      case Kind::Custom:
        if (index >= values.size()) {
          throw std::invalid_argument("custom schedule shorter than the n grid");
        }
        p = values[index];
        break;
    }
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("schedule produced p=" + std::to_string(p) +
                                  " outside (0,1) at n=" + std::to_string(n));
    }
    return p;
  }

  std::string describe() const {
    std::ostringstream out;
    switch (kind) {
      case Kind::Constant: out << "constant:" << c; break;
      case Kind::Power: out << "power:" << c << "," << alpha; break;
      case Kind::Inverse: out << "inverse:" << c; break;
      case Kind::Custom:
        out << "custom:";
        for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
        break;
    }
    return out.str();
  }

  // "constant:0.5" | "power:c,alpha" | "inverse:c" | "custom:p1,p2,..."
  static Schedule parse(const std::string& text) {
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    std::vector<double> nums;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) nums.push_back(std::stod(tok));
    }
    Schedule s;
    if (kind == "constant") {
      if (nums.size() != 1) throw std::invalid_argument("constant schedule needs one value");
      s.kind = Kind::Constant;
      s.c = nums[0];
    } else if (kind == "power") {
      if (nums.size() != 2) throw std::invalid_argument("power schedule needs c,alpha");
      s.kind = Kind::Power;
      s.c = nums[0];
      s.alpha = nums[1];
    } else if (kind == "inverse") {
      if (nums.size() != 1) throw std::invalid_argument("inverse schedule needs c");
      s.kind = Kind::Inverse;
      s.c = nums[0];
    } else if (kind == "custom") {
      if (nums.empty()) throw std::invalid_argument("custom schedule needs values");
      s.kind = Kind::Custom;
      s.values = nums;
    } else {
      throw std::invalid_argument("unknown schedule kind: " + kind);
    }
    return s;
  }
};

}  // namespace swc
