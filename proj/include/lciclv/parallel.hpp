#pragma once

#include <functional>

namespace lciclv {

// Thread count resolution: explicit request > LCICLV_THREADS env > hardware.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, n) split into contiguous per-thread blocks.
// Callers write results into per-index slots, so the outcome is identical
// for every thread count.
void parallel_for(int n, int threads, const std::function<void(int, int)>& block_fn);

// Compensated (Kahan) accumulator; summation order is the caller's contract.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace lciclv
