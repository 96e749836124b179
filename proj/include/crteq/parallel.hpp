#pragma once

#include <cstddef>
#include <functional>

namespace crteq {

/// Thread count: explicit request if nonzero, else CRT_EQUIDIST_THREADS, else 1.
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items are
/// claimed dynamically; callers write results into per-index slots so that the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Order-fixed Neumaier summation.
class CompensatedSum {
 public:
  void add(double x);
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace crteq
