#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace potts_af {

// A nonnegative-or-finite real that may also be +infinity. NaN is rejected.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN");
  }

  static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(v_) && v_ > 0; }
  bool is_finite() const { return std::isfinite(v_); }
  double value() const { return v_; }

  friend auto operator<=>(const ExtReal& a, const ExtReal& b) { return a.v_ <=> b.v_; }
  friend bool operator==(const ExtReal& a, const ExtReal& b) { return a.v_ == b.v_; }

 private:
  double v_ = 0.0;
};

inline ExtReal min(ExtReal a, ExtReal b) { return a <= b ? a : b; }

}  // namespace potts_af
