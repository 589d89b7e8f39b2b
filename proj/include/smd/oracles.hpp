#ifndef SMD_ORACLES_HPP
#define SMD_ORACLES_HPP

#include <Eigen/Core>
#include <functional>
#include <optional>

#include "smd/noise.hpp"
#include "smd/norms.hpp"
#include "smd/projection.hpp"

namespace smd {

/// One stochastic first-order oracle answer: unbiased noisy value and
/// subgradient. The noisy value is emitted for interface fidelity; the
/// solvers and estimators only consume g_hat.
struct OracleResponse {
  double f_hat = 0.0;
  DualVec g_hat;
};

/// Benign test problem f(x) = L ||x - x_star||_{q*} with additive
/// coordinate-wise sym-Pareto gradient noise and scalar value noise. The
/// optimum and optimal value are known, so rate experiments can report exact
/// errors. Pass an empty noise spec for the noiseless variant.
class SyntheticOracle {
 public:
  SyntheticOracle(Vec x_star, double lipschitz, Exponent q,
                  std::optional<NoiseSpec> noise);

  const Vec& minimizer() const { return x_star_; }
  double min_value() const { return 0.0; }
  double lipschitz() const { return lipschitz_; }
  const Exponent& q() const { return q_; }

  /// Deterministic objective value (L-Lipschitz w.r.t. the q*-norm).
  double value(const Eigen::Ref<const Vec>& x) const;

  /// Deterministic subgradient selection with ||g||_q <= L; zero at the
  /// minimizer and at norm kinks (ties pick the lowest index).
  Vec subgradient(const Eigen::Ref<const Vec>& x) const;

  /// Draw order per query: one scalar value-noise draw, then one sym-Pareto
  /// draw per coordinate for the gradient.
  OracleResponse sample(const Eigen::Ref<const Vec>& x, SeededRng& rng) const;

  /// Certified moment bound: E||g_hat||_q^{1+kappa} <= sigma()^{1+kappa}.
  double sigma() const;

 private:
  Vec x_star_;
  double lipschitz_;
  Exponent q_, q_star_;
  std::optional<NoiseSpec> noise_;
};

enum class HardRegime { small_q, large_q };

/// Adversarial piecewise-linear objective indexed by a hypercube vertex
/// alpha, together with its Bernoulli sampling oracle. The small_q regime
/// reveals one coordinate per query; the large_q regime reveals all
/// coordinates behind a 1/T gate. Minimized at -radius * alpha either way.
struct HardInstance {
  Eigen::VectorXi alpha;  // entries in {-1, +1}
  HardRegime regime;
  double delta;
  double lipschitz;
  double radius;
  double kappa;
  Exponent q;    // large_q prefactor d^{1/q}; small_q keeps it for bookkeeping
  long horizon;  // T, large_q only

  int dim() const { return static_cast<int>(alpha.size()); }

  /// Bernoulli parameter p = (4 delta)^{(kappa+1)/kappa} of the small_q
  /// oracle ("bern_" prefix: this is not a norm exponent).
  double bern_p() const;
  /// Payout scale with bern_p * lambda = 2 delta.
  double lambda() const;
  /// Scale in front of the large_q responses: L T^{1/(1+kappa)} d^{-1/q}.
  double large_payout_scale() const;
};

/// delta in (0, 1/8]; bern_p lands in (0, 1/2].
HardInstance make_hard_small(Eigen::VectorXi alpha, double delta, double lipschitz,
                             double radius, double kappa, Exponent q = Exponent(1.0));

/// delta in (0, 1/100]; horizon >= 1.
HardInstance make_hard_large(Eigen::VectorXi alpha, double delta, double lipschitz,
                             double radius, double kappa, Exponent q, long horizon);

/// Deterministic objective values, exact minima, and minimizers.
double g_alpha_value_small(const HardInstance& inst, const Eigen::Ref<const Vec>& x);
double g_alpha_value_large(const HardInstance& inst, const Eigen::Ref<const Vec>& x);
double hard_value(const HardInstance& inst, const Eigen::Ref<const Vec>& x);
double hard_min_value(const HardInstance& inst);
Vec hard_minimizer(const HardInstance& inst);

/// small_q query: pick a coordinate uniformly, then one Bernoulli; the
/// response is supported on that coordinate. Unbiased for g_alpha with
/// E||g_hat||_q^{1+kappa} <= L^{1+kappa}.
OracleResponse oracle_small(const HardInstance& inst, const Eigen::Ref<const Vec>& x,
                            SeededRng& rng);

/// large_q query: a Ber(1/T) gate, then d coordinate Bernoullis on success;
/// zero response otherwise. Same unbiasedness and moment contract.
OracleResponse oracle_large(const HardInstance& inst, const Eigen::Ref<const Vec>& x,
                            SeededRng& rng);

OracleResponse hard_sample(const HardInstance& inst, const Eigen::Ref<const Vec>& x,
                           SeededRng& rng);

/// Discrepancy rho(f, g) = inf_box [f + g - f* - g*] between two hard
/// objectives over their (shared) box, computed exactly coordinate by
/// coordinate from the piecewise-linear structure.
double discrepancy_exact(const HardInstance& a, const HardInstance& b);

/// Generic grid-based discrepancy for arbitrary objectives, d <= 3.
double discrepancy_rho(const std::function<double(const Vec&)>& fa,
                       const std::function<double(const Vec&)>& fb, const Box& box,
                       int points_per_axis = 201);

/// Sampler plus the deterministic objective a solver run reports errors
/// against (errors always use the true f, never the noisy f_hat).
struct OracleHandle {
  std::function<OracleResponse(const Eigen::Ref<const Vec>&, SeededRng&)> sample;
  std::function<double(const Eigen::Ref<const Vec>&)> objective;
  double min_value = 0.0;
};

OracleHandle make_oracle(const SyntheticOracle& oracle);
OracleHandle make_oracle(const HardInstance& inst);

}  // namespace smd

#endif  // SMD_ORACLES_HPP
