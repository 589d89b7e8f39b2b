#ifndef SMD_NOISE_HPP
#define SMD_NOISE_HPP

#include <vector>

#include "smd/exponent.hpp"
#include "smd/rng.hpp"

namespace smd {

/// Symmetrized Pareto noise with tail index beta and scale s: density
/// (beta s^beta) / (2 |x|^{beta+1}) on |x| >= s. The constraint
/// 1 + kappa < beta < 2 makes the (1+kappa)-th absolute moment finite while
/// the variance diverges, and fractional moments have the closed form
/// E|X|^m = beta s^m / (beta - m) for m < beta.
struct NoiseSpec {
  double beta;
  double scale;
  double kappa;

  NoiseSpec(double beta_, double scale_, double kappa_)
      : beta(beta_), scale(scale_), kappa(kappa_) {
    if (!(kappa > 0.0) || kappa > 1.0)
      throw std::invalid_argument("NoiseSpec: kappa in (0, 1]");
    if (!(beta > 1.0 + kappa) || !(beta < 2.0))
      throw std::invalid_argument("NoiseSpec: beta must lie in (1+kappa, 2)");
    if (!(scale > 0.0)) throw std::invalid_argument("NoiseSpec: scale > 0");
  }

  /// E|X|^m for m < beta.
  double abs_moment(double m) const {
    if (m >= beta) throw std::invalid_argument("abs_moment: diverges for m >= beta");
    return beta * std::pow(scale, m) / (beta - m);
  }
};

/// One draw: X = +/- s U^{-1/beta} by inversion, with an independent sign
/// bit. The magnitude uniform is drawn first, then the sign.
double sample_sym_pareto(const NoiseSpec& spec, SeededRng& rng);

/// Certified sigma such that E||v + xi||_q^{1+kappa} <= sigma^{1+kappa} for
/// any ||v||_q <= lipschitz and xi with iid sym-Pareto coordinates. Combines
/// (a+b)^{1+kappa} <= 2^kappa (a^{1+kappa} + b^{1+kappa}) with the
/// coordinate-wise norm bound
///   E||xi||_q^{1+kappa} <= d^{(1+kappa)/min(q, 1+kappa)} E|X|^{1+kappa},
/// which for q <= 1+kappa is the subadditivity bound d^{(1+kappa)/q} and for
/// q > 1+kappa falls back to the (1+kappa)-norm (the smaller power of d would
/// not dominate the max coordinate there). Deliberately conservative: the
/// step-size rule only needs an upper bound.
double moment_bound(const NoiseSpec& spec, const Exponent& q, int dim, double lipschitz);

/// Hill estimator of the tail index from the top tail_fraction of |samples|.
double hill_tail_index(std::vector<double> abs_samples, double tail_fraction);

}  // namespace smd

#endif  // SMD_NOISE_HPP
