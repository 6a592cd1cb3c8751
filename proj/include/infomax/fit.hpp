#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace infomax {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  int points = 0;
};

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  const std::size_t n = x.size();
  f.points = static_cast<int>(n);
  if (n < 2) return f;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - (f.intercept + f.slope * x[i]);
      ssr += r * r;
    }
    f.slope_se = std::sqrt(ssr / (n - 2) / sxx);
  }
  return f;
}

}  // namespace infomax
