#pragma once

#include <cstddef>
#include <functional>

namespace polylat {

/// Worker count: POLYLAT_THREADS if set (>= 1), else the hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, count). Calls made from inside a running body
/// execute serially on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void add(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace polylat
