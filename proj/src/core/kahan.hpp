#pragma once

namespace spinhop {

// Compensated accumulator. The dendrite node solve and the KCL residual checks
// need summation error independent of branch count to stay under the 1e-15
// residual budget at 100 branches.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};

}  // namespace spinhop
