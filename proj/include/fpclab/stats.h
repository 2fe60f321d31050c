#pragma once

#include <cstddef>
#include <span>

namespace fpclab {

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

struct Proportion {
  std::size_t count = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for count successes out of trials.
Proportion wilson(std::size_t count, std::size_t trials, double z = kZ99);

/// Upper-bound claim "rate <= bound" survives unless the interval lies
/// entirely above it.
bool within_upper(const Proportion& p, double bound) noexcept;
/// Lower-bound claim "rate >= bound".
bool within_lower(const Proportion& p, double bound) noexcept;

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> xs);

}  // namespace fpclab
