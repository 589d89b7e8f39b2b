#ifndef SMD_TESTS_HELPERS_HPP
#define SMD_TESTS_HELPERS_HPP

#include <algorithm>
#include <functional>
#include <vector>

#include "smd/norms.hpp"
#include "smd/rng.hpp"

namespace smd::testing {

/// Random vector with entries uniform in [-scale, scale].
inline Vec random_vec(SeededRng& rng, int d, double scale = 2.0) {
  Vec x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(-scale, scale);
  return x;
}

/// Random nonzero vector (resamples the rare all-zero draw).
inline Vec random_nonzero(SeededRng& rng, int d, double scale = 2.0) {
  Vec x = random_vec(rng, d, scale);
  while (x.cwiseAbs().maxCoeff() == 0.0) x = random_vec(rng, d, scale);
  return x;
}

/// Central finite differences of a scalar field, the independent gradient
/// oracle used against the closed-form gradients.
inline Vec central_diff(const std::function<double(const Vec&)>& f, const Vec& x,
                        double step = 1e-5) {
  Vec g(x.size());
  Vec e = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    e[i] = x[i] + step;
    const double up = f(e);
    e[i] = x[i] - step;
    const double down = f(e);
    e[i] = x[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

/// Median-of-means: the mean estimator of record under infinite variance.
inline double median_of_means(const std::vector<double>& samples, int blocks = 32) {
  const std::size_t n = samples.size();
  const std::size_t per = n / static_cast<std::size_t>(blocks);
  std::vector<double> means;
  for (int b = 0; b < blocks; ++b) {
    double sum = 0.0;
    for (std::size_t i = static_cast<std::size_t>(b) * per; i < (b + 1ul) * per; ++i)
      sum += samples[i];
    means.push_back(sum / static_cast<double>(per));
  }
  std::sort(means.begin(), means.end());
  const std::size_t m = means.size();
  return m % 2 ? means[m / 2] : 0.5 * (means[m / 2 - 1] + means[m / 2]);
}

/// Least-squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace smd::testing

#endif  // SMD_TESTS_HELPERS_HPP
