#include "fpclab/stats.h"

#include <algorithm>
#include <cmath>

namespace fpclab {

Proportion wilson(std::size_t count, std::size_t trials, double z) {
  Proportion p;
  p.count = count;
  p.trials = trials;
  if (trials == 0) return p;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(count) / n;
  const double z2 = z * z;
  const double center = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
  p.rate = phat;
  p.low = std::max(0.0, center - half);
  p.high = std::min(1.0, center + half);
  return p;
}

bool within_upper(const Proportion& p, double bound) noexcept { return p.trials > 0 && p.low <= bound; }

bool within_lower(const Proportion& p, double bound) noexcept { return p.trials > 0 && p.high >= bound; }

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace fpclab
