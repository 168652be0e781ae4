#include "uniblock/stats.hpp"

#include <cmath>

#include "uniblock/errors.hpp"

namespace uniblock {

double chernoff_tail(double mean, double delta) {
  if (mean < 0) throw PreconditionError("chernoff_tail: mean must be non-negative");
  if (delta <= 0.0 || delta >= 1.5)
    throw PreconditionError("chernoff_tail: delta must lie in (0, 3/2)");
  return 2.0 * std::exp(-delta * delta * mean / 3.0);
}

WilsonInterval wilson(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw PreconditionError("wilson: need 0 <= successes <= trials, trials > 0");
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double centre = p + z2 / (2.0 * nt);
  const double margin = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  return {std::max(0.0, (centre - margin) / denom), std::min(1.0, (centre + margin) / denom)};
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw PreconditionError("fit_slope: need two samples of equal length");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw PreconditionError("fit_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

} // namespace uniblock
