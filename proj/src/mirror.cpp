#include "smd/mirror.hpp"

#include <stdexcept>

namespace smd {

double k_p(double p, double kappa) {
  if (!(kappa > 0.0) || kappa > 1.0)
    throw std::invalid_argument("k_p: kappa must lie in (0, 1]");
  if (!std::isfinite(p) || p < 1.0 + kappa)
    throw std::invalid_argument("k_p: requires finite p >= 1 + kappa");
  return 10.0 * std::max(1.0, std::pow(p - 1.0, (1.0 + kappa) / 2.0));
}

double conj_norm_value(double r, const Exponent& p, const Eigen::Ref<const Vec>& y) {
  if (!(r > 1.0)) throw std::invalid_argument("conj_norm_value: r must exceed 1");
  return (r - 1.0) / r * norm_power(y, p.dual(), r / (r - 1.0));
}

MirrorMap::MirrorMap(double p, double kappa) : p_(p), kappa_(kappa) {
  if (kappa < 0.1 || kappa > 1.0)
    throw std::invalid_argument("MirrorMap: kappa must lie in [0.1, 1]");
  kp_ = k_p(p, kappa);  // rejects p < 1 + kappa
  p_star_ = Exponent(p).dual().value();
  r_ = (1.0 + kappa) / kappa;
  log_scale_ = std::log(kp_) / kappa;
  scale_ = std::exp(log_scale_);
}

double MirrorMap::value(const Eigen::Ref<const Vec>& x) const {
  const double ln = log_p_norm(x, p_star_);
  if (std::isinf(ln)) return 0.0;
  return std::exp(log_scale_ + std::log(kappa_ / (1.0 + kappa_)) + r_ * ln);
}

DualVec MirrorMap::grad(const Eigen::Ref<const Vec>& x) const {
  return DualVec(signed_power_scaled(x, p_star_, r_, log_scale_));
}

Vec MirrorMap::grad_star(const DualVec& y) const {
  return signed_power_scaled(y.v, p_, 1.0 + kappa_, -std::log(kp_));
}

double MirrorMap::bregman(const Eigen::Ref<const Vec>& x,
                          const Eigen::Ref<const Vec>& y) const {
  return value(x) - value(y) - grad(y).v.dot(x - y);
}

double MirrorMap::r0(double box_radius, int dim) const {
  if (!(box_radius > 0.0) || dim < 1)
    throw std::invalid_argument("MirrorMap::r0: bad box");
  return std::exp(std::log(kp_) / (1.0 + kappa_) + std::log(box_radius) +
                  std::log(static_cast<double>(dim)) / p_star_);
}

}  // namespace smd
