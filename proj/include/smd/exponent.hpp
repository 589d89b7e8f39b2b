#ifndef SMD_EXPONENT_HPP
#define SMD_EXPONENT_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace smd {

/// A norm exponent in [1, inf]. Infinity is a distinct tag, never a large
/// float, so code that cannot handle it has to reject it explicitly.
class Exponent {
 public:
  Exponent(double p) : p_(p), inf_(false) {
    if (!(p >= 1.0) || std::isinf(p) || std::isnan(p))
      throw std::invalid_argument("Exponent: p must be a finite real >= 1");
  }

  static Exponent infinity() {
    Exponent e;
    return e;
  }

  bool is_infinite() const { return inf_; }

  /// Finite value; invalid to call on the infinite exponent.
  double value() const {
    if (inf_) throw std::logic_error("Exponent: value() on infinite exponent");
    return p_;
  }

  /// Conjugate exponent p* with 1/p + 1/p* = 1, using 1 <-> inf.
  Exponent dual() const {
    if (inf_) return Exponent(1.0);
    if (p_ == 1.0) return infinity();
    Exponent d(p_ / (p_ - 1.0));
    return d;
  }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.p_ == b.p_;
  }
  friend bool operator!=(const Exponent& a, const Exponent& b) { return !(a == b); }

 private:
  Exponent() : p_(std::numeric_limits<double>::infinity()), inf_(true) {}

  double p_;
  bool inf_;
};

inline Exponent dual_exponent(const Exponent& p) { return p.dual(); }

}  // namespace smd

#endif  // SMD_EXPONENT_HPP
