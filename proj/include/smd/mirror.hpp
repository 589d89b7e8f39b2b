#ifndef SMD_MIRROR_HPP
#define SMD_MIRROR_HPP

#include "smd/norms.hpp"

namespace smd {

/// Curvature constant of the p-norm potential family:
/// K_p = 10 max{1, (p-1)^{(1+kappa)/2}}. Requires finite p >= 1+kappa and
/// kappa in (0, 1].
double k_p(double p, double kappa);

/// Closed form of the Fenchel conjugate of (1/r)||.||_p^r, namely
/// ((r-1)/r) ||y||_{p*}^{r/(r-1)}. Valid for r > 1 and p in [1, inf].
double conj_norm_value(double r, const Exponent& p, const Eigen::Ref<const Vec>& y);

/// The uniformly convex potential
///
///   Psi(x) = K_p^{1/kappa} * kappa/(1+kappa) * ||x||_{p*}^{(1+kappa)/kappa},
///
/// which is (1, (1+kappa)/kappa)-uniformly convex with respect to the
/// p*-norm. Immutable after construction; all members are pure, so a single
/// instance can be shared across threads.
class MirrorMap {
 public:
  /// Requires p finite with p >= 1+kappa and kappa in [0.1, 1]. The kappa
  /// floor keeps the (1+kappa)/kappa exponent within the range the
  /// log-domain evaluation has been validated for.
  MirrorMap(double p, double kappa);

  double p() const { return p_; }
  double p_star() const { return p_star_; }
  double kappa() const { return kappa_; }
  double kp() const { return kp_; }
  /// The folded-in scale c = K_p^{1/kappa}.
  double scale() const { return scale_; }
  /// Convexity exponent r = (1+kappa)/kappa.
  double convexity_exponent() const { return r_; }

  /// Psi(x); nonnegative, zero iff x = 0.
  double value(const Eigen::Ref<const Vec>& x) const;

  /// Mirror map: grad Psi(x) = c ||x||_{p*}^{(1+kappa)/kappa - p*} vpow(x, p*).
  DualVec grad(const Eigen::Ref<const Vec>& x) const;

  /// Inverse mirror map: grad Psi*(y) = (1/K_p) ||y||_p^{1+kappa-p} vpow(y, p),
  /// satisfying grad_star(grad(x)) = x.
  Vec grad_star(const DualVec& y) const;

  /// Bregman divergence D(x, y) = Psi(x) - Psi(y) - <grad Psi(y), x - y>.
  double bregman(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y) const;

  /// Initialization radius over the centered sup-ball of the given radius:
  /// R0 = ((1+kappa)/kappa * Psi(corner))^{kappa/(1+kappa)}
  ///    = K_p^{1/(1+kappa)} * radius * d^{1/p*}.
  double r0(double box_radius, int dim) const;

 private:
  double p_, kappa_, p_star_, r_, kp_, log_scale_, scale_;
};

}  // namespace smd

#endif  // SMD_MIRROR_HPP
