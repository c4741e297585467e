#pragma once

#include <vector>

namespace hbea::harness {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int count = 0;
};

/// Least squares y ≈ slope·x + intercept over the finite pairs.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log y against log x over pairs with x, y > 0.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log y against x over pairs with y > 0.
LinearFit fit_semilog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hbea::harness
