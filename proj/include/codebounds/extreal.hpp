#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace codebounds {

// Extended real value: any finite double or +infinity. Used for distances,
// where +infinity marks symbol pairs that can never be confused. NaN and
// -infinity are rejected at construction so downstream arithmetic stays total:
//   inf + finite = inf,  exp(-inf) = 0,  -log(0) = inf.
class ExtReal {
 public:
  constexpr ExtReal() : v_(0.0) {}

  ExtReal(double v) : v_(v) {  // NOLINT: implicit by design
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
      throw std::invalid_argument("ExtReal: value must be finite or +inf");
  }

  static ExtReal infinity() {
    return ExtReal(std::numeric_limits<double>::infinity());
  }

  [[nodiscard]] bool is_finite() const { return std::isfinite(v_); }

  // Finite payload; calling this on +inf is a programming error.
  [[nodiscard]] double finite_value() const {
    if (!is_finite()) throw std::logic_error("ExtReal: not finite");
    return v_;
  }

  // Lossless escape hatch: +inf maps to the IEEE infinity.
  [[nodiscard]] double as_double() const { return v_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.v_ + b.v_); }
  ExtReal& operator+=(ExtReal o) { v_ += o.v_; return *this; }

  // Scaling by a positive factor only; 0 * inf has no sensible value here.
  friend ExtReal operator*(double s, ExtReal a) {
    if (!(s > 0) && !a.is_finite())
      throw std::invalid_argument("ExtReal: non-positive scale of infinity");
    return ExtReal(s * a.v_);
  }

  friend auto operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }
  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }

  [[nodiscard]] std::string str() const {
    return is_finite() ? std::to_string(v_) : std::string("inf");
  }

 private:
  double v_;
};

// exp(-d) with exp(-inf) = 0; the similarity transform.
inline double exp_neg(ExtReal d) {
  return d.is_finite() ? std::exp(-d.finite_value()) : 0.0;
}

// -log(g) with -log(0) = +inf; inverse of the similarity transform.
inline ExtReal neg_log(double g) {
  if (g < 0.0) throw std::invalid_argument("neg_log: negative argument");
  if (g == 0.0) return ExtReal::infinity();
  return ExtReal(-std::log(g));
}

}  // namespace codebounds
