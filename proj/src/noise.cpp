#include "smd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smd {

double sample_sym_pareto(const NoiseSpec& spec, SeededRng& rng) {
  const double u = rng.uniform01();
  const double magnitude = spec.scale * std::pow(u, -1.0 / spec.beta);
  const bool negative = (rng.next_u64() & 1ULL) != 0;
  return negative ? -magnitude : magnitude;
}

double moment_bound(const NoiseSpec& spec, const Exponent& q, int dim, double lipschitz) {
  if (dim < 1) throw std::invalid_argument("moment_bound: dim >= 1");
  if (lipschitz < 0.0) throw std::invalid_argument("moment_bound: lipschitz >= 0");
  const double m = 1.0 + spec.kappa;
  if (m >= spec.beta) throw std::invalid_argument("moment_bound: 1+kappa >= beta");

  const double qv = q.is_infinite() ? m : std::min(q.value(), m);
  const double noise_m = std::pow(static_cast<double>(dim), m / qv) * spec.abs_moment(m);
  if (lipschitz == 0.0) return std::pow(noise_m, 1.0 / m);
  const double total = std::pow(2.0, spec.kappa) * (std::pow(lipschitz, m) + noise_m);
  return std::pow(total, 1.0 / m);
}

double hill_tail_index(std::vector<double> abs_samples, double tail_fraction) {
  if (!(tail_fraction > 0.0) || tail_fraction >= 1.0)
    throw std::invalid_argument("hill_tail_index: tail_fraction in (0, 1)");
  const std::size_t n = abs_samples.size();
  const auto k = static_cast<std::size_t>(tail_fraction * static_cast<double>(n));
  if (k < 2 || k + 1 > n) throw std::invalid_argument("hill_tail_index: too few samples");

  // Top k+1 order statistics of the magnitudes.
  std::nth_element(abs_samples.begin(), abs_samples.begin() + static_cast<long>(k),
                   abs_samples.end(), std::greater<double>());
  const double pivot = abs_samples[k];
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(abs_samples[i] / pivot);
  return static_cast<double>(k) / sum;
}

}  // namespace smd
