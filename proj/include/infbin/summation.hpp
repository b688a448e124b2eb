#pragma once

#include <cmath>
#include <limits>

namespace infbin {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (!std::isfinite(t)) {
      // inf - inf would poison the correction term.
      sum_ = t;
      return;
    }
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  CompensatedSum& operator+=(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
    return *this;
  }

  double value() const noexcept { return std::isfinite(sum_) ? sum_ + comp_ : sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

}  // namespace infbin
