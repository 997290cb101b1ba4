#pragma once

#include <cstddef>
#include <span>

namespace relaysel {

double mean(std::span<const double> xs);
/// Sample standard deviation (n − 1); 0 for fewer than two values.
double sample_sd(std::span<const double> xs);

struct TestResult {
  double mean_difference = 0.0;  ///< mean(a) − mean(b)
  double t = 0.0;
  double dof = 0.0;
  double p_two_sided = 1.0;
};

/// Paired t-test on a[i] − b[i]. Identical samples give p = 1; a constant
/// nonzero difference gives p = 0. Throws std::invalid_argument on size
/// mismatch or fewer than two pairs.
TestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// Welch two-sample t-test. Throws std::invalid_argument with fewer than two
/// values per side.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace relaysel
