#include "smd/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace smd {

namespace {

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

// h(alpha, z) = (1/2) [ (1+alpha)|z+R| + (1-alpha)|z-R| ] and its derivative
// selection (zero at the kinks).
double h_value(int alpha, double z, double radius) {
  return 0.5 * ((1 + alpha) * std::abs(z + radius) + (1 - alpha) * std::abs(z - radius));
}

double h_slope(int alpha, double z, double radius) {
  return 0.5 * ((1 + alpha) * sgn(z + radius) + (1 - alpha) * sgn(z - radius));
}

}  // namespace

SyntheticOracle::SyntheticOracle(Vec x_star, double lipschitz, Exponent q,
                                 std::optional<NoiseSpec> noise)
    : x_star_(std::move(x_star)),
      lipschitz_(lipschitz),
      q_(q),
      q_star_(q.dual()),
      noise_(std::move(noise)) {
  if (!(lipschitz_ >= 0.0)) throw std::invalid_argument("SyntheticOracle: L >= 0");
  if (!all_finite(x_star_)) throw std::invalid_argument("SyntheticOracle: x_star finite");
}

double SyntheticOracle::value(const Eigen::Ref<const Vec>& x) const {
  return lipschitz_ * p_norm(x - x_star_, q_star_);
}

Vec SyntheticOracle::subgradient(const Eigen::Ref<const Vec>& x) const {
  const Vec z = x - x_star_;
  const Eigen::Index d = z.size();
  if (z.cwiseAbs().maxCoeff() == 0.0) return Vec::Zero(d);
  if (q_star_.is_infinite()) {
    // Needle on the first maximal coordinate.
    Eigen::Index j = 0;
    z.cwiseAbs().maxCoeff(&j);
    Vec g = Vec::Zero(d);
    g[j] = lipschitz_ * sgn(z[j]);
    return g;
  }
  const double qs = q_star_.value();
  if (qs == 1.0) {
    Vec g(d);
    for (Eigen::Index i = 0; i < d; ++i) g[i] = lipschitz_ * sgn(z[i]);
    return g;
  }
  // vpow(z, q*) / ||z||^{q*-1}, which has unit q-norm.
  return signed_power_scaled(z, qs, 1.0, std::log(lipschitz_));
}

OracleResponse SyntheticOracle::sample(const Eigen::Ref<const Vec>& x,
                                       SeededRng& rng) const {
  OracleResponse resp;
  resp.f_hat = value(x);
  Vec g = subgradient(x);
  if (noise_) {
    resp.f_hat += sample_sym_pareto(*noise_, rng);
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] += sample_sym_pareto(*noise_, rng);
  }
  resp.g_hat = DualVec(std::move(g));
  return resp;
}

double SyntheticOracle::sigma() const {
  if (!noise_) return lipschitz_;
  return moment_bound(*noise_, q_, static_cast<int>(x_star_.size()), lipschitz_);
}

double HardInstance::bern_p() const {
  return std::pow(4.0 * delta, (kappa + 1.0) / kappa);
}

double HardInstance::lambda() const {
  return 0.5 * std::pow(bern_p(), -1.0 / (1.0 + kappa));
}

double HardInstance::large_payout_scale() const {
  const double dinvq =
      q.is_infinite() ? 1.0 : std::pow(static_cast<double>(dim()), -1.0 / q.value());
  return lipschitz * std::pow(static_cast<double>(horizon), 1.0 / (1.0 + kappa)) * dinvq;
}

namespace {

void validate_common(const HardInstance& inst) {
  if (inst.dim() < 1) throw std::invalid_argument("HardInstance: empty alpha");
  for (int i = 0; i < inst.dim(); ++i)
    if (inst.alpha[i] != 1 && inst.alpha[i] != -1)
      throw std::invalid_argument("HardInstance: alpha entries must be +/-1");
  if (!(inst.lipschitz > 0.0) || !(inst.radius > 0.0))
    throw std::invalid_argument("HardInstance: L > 0, R > 0");
  if (!(inst.kappa > 0.0) || inst.kappa > 1.0)
    throw std::invalid_argument("HardInstance: kappa in (0, 1]");
}

}  // namespace

HardInstance make_hard_small(Eigen::VectorXi alpha, double delta, double lipschitz,
                             double radius, double kappa, Exponent q) {
  HardInstance inst{std::move(alpha), HardRegime::small_q, delta,
                    lipschitz,        radius,              kappa,
                    q,                0};
  validate_common(inst);
  if (!(delta > 0.0) || delta > 0.125)
    throw std::invalid_argument("make_hard_small: delta in (0, 1/8]");
  const double p = inst.bern_p();
  if (!(p > 0.0) || p > 0.5)
    throw std::invalid_argument("make_hard_small: bern_p outside (0, 1/2]");
  return inst;
}

HardInstance make_hard_large(Eigen::VectorXi alpha, double delta, double lipschitz,
                             double radius, double kappa, Exponent q, long horizon) {
  HardInstance inst{std::move(alpha), HardRegime::large_q, delta,
                    lipschitz,        radius,              kappa,
                    q,                horizon};
  validate_common(inst);
  if (!(delta > 0.0) || delta > 0.01)
    throw std::invalid_argument("make_hard_large: delta in (0, 1/100]");
  if (horizon < 1) throw std::invalid_argument("make_hard_large: horizon >= 1");
  return inst;
}

double g_alpha_value_small(const HardInstance& inst, const Eigen::Ref<const Vec>& x) {
  if (inst.regime != HardRegime::small_q)
    throw std::logic_error("g_alpha_value_small: wrong regime");
  const int d = inst.dim();
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    const double w = (2.0 + inst.alpha[i]) / 4.0 * inst.delta;
    sum += w * ((1 + inst.alpha[i]) * std::abs(x[i] + inst.radius) +
                (1 - inst.alpha[i]) * std::abs(x[i] - inst.radius));
  }
  return inst.lipschitz / d * sum;
}

double g_alpha_value_large(const HardInstance& inst, const Eigen::Ref<const Vec>& x) {
  if (inst.regime != HardRegime::large_q)
    throw std::logic_error("g_alpha_value_large: wrong regime");
  const int d = inst.dim();
  const double pref = inst.large_payout_scale() / inst.horizon;  // L T^{-k/(1+k)} d^{-1/q}
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    sum += (0.5 + inst.alpha[i] * inst.delta) * std::abs(x[i] + inst.radius) +
           (0.5 - inst.alpha[i] * inst.delta) * std::abs(x[i] - inst.radius);
  }
  return pref * sum;
}

double hard_value(const HardInstance& inst, const Eigen::Ref<const Vec>& x) {
  return inst.regime == HardRegime::small_q ? g_alpha_value_small(inst, x)
                                            : g_alpha_value_large(inst, x);
}

double hard_min_value(const HardInstance& inst) {
  if (inst.regime == HardRegime::small_q) return 0.0;
  const double pref = inst.large_payout_scale() / inst.horizon;
  return pref * inst.dim() * (1.0 - 2.0 * inst.delta) * inst.radius;
}

Vec hard_minimizer(const HardInstance& inst) {
  Vec x(inst.dim());
  for (int i = 0; i < inst.dim(); ++i) x[i] = -inst.radius * inst.alpha[i];
  return x;
}

OracleResponse oracle_small(const HardInstance& inst, const Eigen::Ref<const Vec>& x,
                            SeededRng& rng) {
  if (inst.regime != HardRegime::small_q)
    throw std::logic_error("oracle_small: wrong regime");
  const int d = inst.dim();
  const int i = rng.uniform_int(d);
  const double keep_prob = (2.0 + inst.alpha[i]) / 4.0 * inst.bern_p();
  const bool b = rng.bernoulli(1.0 - keep_prob);

  OracleResponse resp;
  resp.g_hat = DualVec(Vec::Zero(d));
  if (b) return resp;  // payout suppressed: value 0, gradient 0

  const double scale = inst.lipschitz * inst.lambda();
  resp.f_hat = scale * h_value(inst.alpha[i], x[i], inst.radius);
  resp.g_hat.v[i] = scale * h_slope(inst.alpha[i], x[i], inst.radius);
  return resp;
}

OracleResponse oracle_large(const HardInstance& inst, const Eigen::Ref<const Vec>& x,
                            SeededRng& rng) {
  if (inst.regime != HardRegime::large_q)
    throw std::logic_error("oracle_large: wrong regime");
  const int d = inst.dim();
  OracleResponse resp;
  resp.g_hat = DualVec(Vec::Zero(d));
  if (!rng.bernoulli(1.0 / static_cast<double>(inst.horizon))) return resp;

  const double scale = inst.large_payout_scale();
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    const bool heads = rng.bernoulli(0.5 + inst.alpha[i] * inst.delta);
    if (heads) {
      sum += std::abs(x[i] + inst.radius);
      resp.g_hat.v[i] = scale * sgn(x[i] + inst.radius);
    } else {
      sum += std::abs(x[i] - inst.radius);
      resp.g_hat.v[i] = scale * sgn(x[i] - inst.radius);
    }
  }
  resp.f_hat = scale * sum;
  return resp;
}

OracleResponse hard_sample(const HardInstance& inst, const Eigen::Ref<const Vec>& x,
                           SeededRng& rng) {
  return inst.regime == HardRegime::small_q ? oracle_small(inst, x, rng)
                                            : oracle_large(inst, x, rng);
}

namespace {

// Per-coordinate weights (cp, cm) with f_i(z) = cp |z+R| + cm |z-R|.
void hard_coefficients(const HardInstance& inst, int i, double& cp, double& cm) {
  if (inst.regime == HardRegime::small_q) {
    const double w = inst.lipschitz / inst.dim() * (2.0 + inst.alpha[i]) / 4.0 * inst.delta;
    cp = w * (1 + inst.alpha[i]);
    cm = w * (1 - inst.alpha[i]);
  } else {
    const double pref = inst.large_payout_scale() / inst.horizon;
    cp = pref * (0.5 + inst.alpha[i] * inst.delta);
    cm = pref * (0.5 - inst.alpha[i] * inst.delta);
  }
}

}  // namespace

double discrepancy_exact(const HardInstance& a, const HardInstance& b) {
  if (a.regime != b.regime || a.dim() != b.dim() || a.radius != b.radius)
    throw std::invalid_argument("discrepancy_exact: instances not from one family");
  const double r = a.radius;
  double joint_min = 0.0, min_a = 0.0, min_b = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    double cpa, cma, cpb, cmb;
    hard_coefficients(a, i, cpa, cma);
    hard_coefficients(b, i, cpb, cmb);
    // On [-R, R] each term is linear: cp (z+R) + cm (R-z), minimized at an
    // endpoint with value 2R min(cp, cm).
    joint_min += 2.0 * r * std::min(cpa + cpb, cma + cmb);
    min_a += 2.0 * r * std::min(cpa, cma);
    min_b += 2.0 * r * std::min(cpb, cmb);
  }
  return joint_min - min_a - min_b;
}

double discrepancy_rho(const std::function<double(const Vec&)>& fa,
                       const std::function<double(const Vec&)>& fb, const Box& box,
                       int points_per_axis) {
  if (box.dim > 3) throw std::invalid_argument("discrepancy_rho: grid search needs d <= 3");
  if (points_per_axis < 2) throw std::invalid_argument("discrepancy_rho: need >= 2 points");

  const int n = points_per_axis;
  const int d = box.dim;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= n;

  double min_joint = std::numeric_limits<double>::infinity();
  double min_a = min_joint, min_b = min_joint;
  Vec x(d);
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int i = 0; i < d; ++i) {
      const int k = static_cast<int>(rest % n);
      rest /= n;
      x[i] = -box.radius + 2.0 * box.radius * k / (n - 1);
    }
    const double va = fa(x), vb = fb(x);
    min_a = std::min(min_a, va);
    min_b = std::min(min_b, vb);
    min_joint = std::min(min_joint, va + vb);
  }
  return min_joint - min_a - min_b;
}

OracleHandle make_oracle(const SyntheticOracle& oracle) {
  OracleHandle h;
  h.sample = [oracle](const Eigen::Ref<const Vec>& x, SeededRng& rng) {
    return oracle.sample(x, rng);
  };
  h.objective = [oracle](const Eigen::Ref<const Vec>& x) { return oracle.value(x); };
  h.min_value = oracle.min_value();
  return h;
}

OracleHandle make_oracle(const HardInstance& inst) {
  OracleHandle h;
  h.sample = [inst](const Eigen::Ref<const Vec>& x, SeededRng& rng) {
    return hard_sample(inst, x, rng);
  };
  h.objective = [inst](const Eigen::Ref<const Vec>& x) { return hard_value(inst, x); };
  h.min_value = hard_min_value(inst);
  return h;
}

}  // namespace smd
