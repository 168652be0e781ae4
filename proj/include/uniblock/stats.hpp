#pragma once

#include <cstdint>
#include <vector>

namespace uniblock {

/// Binomial tail bound: Pr(|X - E X| > delta E X) < 2 exp(-delta^2 E X / 3),
/// valid for delta in (0, 3/2).
double chernoff_tail(double mean, double delta);

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Wilson score interval for a binomial proportion (default 95%).
WilsonInterval wilson(std::int64_t successes, std::int64_t trials, double z = 1.959963985);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace uniblock
