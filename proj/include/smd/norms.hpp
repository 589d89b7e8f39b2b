#ifndef SMD_NORMS_HPP
#define SMD_NORMS_HPP

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "smd/exponent.hpp"

namespace smd {

/// Primal coordinates. Entries are expected finite; constructors of the
/// higher-level types enforce this.
using Vec = Eigen::VectorXd;

/// Dual-space (gradient) coordinates. Deliberately a distinct type from Vec
/// so primal/dual mix-ups fail to compile.
struct DualVec {
  Eigen::VectorXd v;

  DualVec() = default;
  explicit DualVec(Eigen::VectorXd coords) : v(std::move(coords)) {}

  Eigen::Index size() const { return v.size(); }
};

inline bool all_finite(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return x.allFinite();
}

/// log ||x||_p for finite p >= 1; -inf for the zero vector. Evaluated with a
/// max-shift so that large p and extreme entry scales do not overflow.
template <typename Derived>
double log_p_norm(const Eigen::MatrixBase<Derived>& x, double p) {
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double t = std::abs(x[i]) / m;
    if (t > 0.0) sum += std::pow(t, p);
  }
  return std::log(m) + std::log(sum) / p;
}

/// ||x||_p, p in [1, inf]. The max-norm handles the infinite tag.
template <typename Derived>
double p_norm(const Eigen::MatrixBase<Derived>& x, const Exponent& p) {
  if (x.size() == 0) throw std::invalid_argument("p_norm: empty vector");
  if (p.is_infinite()) return x.cwiseAbs().maxCoeff();
  const double pv = p.value();
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i]) / m, pv);
  return m * std::pow(sum, 1.0 / pv);
}

/// ||x||_p^r for r real, via the log-domain norm. Exponents like
/// (1+kappa)/kappa at kappa = 0.1 stay finite this way.
template <typename Derived>
double norm_power(const Eigen::MatrixBase<Derived>& x, const Exponent& p, double r) {
  if (p.is_infinite()) {
    const double m = x.cwiseAbs().maxCoeff();
    return m == 0.0 ? 0.0 : std::exp(r * std::log(m));
  }
  const double ln = log_p_norm(x, p.value());
  if (std::isinf(ln)) return 0.0;
  return std::exp(r * ln);
}

/// Signed power map: component i is sgn(x_i) |x_i|^{p-1}. Odd, zero at zero,
/// the identity at p = 2. Finite p > 1 only.
template <typename Derived>
Vec vpow(const Eigen::MatrixBase<Derived>& x, const Exponent& p) {
  if (p.is_infinite()) throw std::invalid_argument("vpow: p must be finite");
  const double pv = p.value();
  if (pv <= 1.0) throw std::invalid_argument("vpow: p must exceed 1");
  Vec out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    out[i] = a == 0.0 ? 0.0 : std::copysign(std::pow(a, pv - 1.0), x[i]);
  }
  return out;
}

/// Components sgn(x_i) exp(log_scale + (r - p) log||x||_p + (p-1) log|x_i|),
/// i.e. a scaled version of ||x||_p^{r-p} vpow(x, p) assembled in log space.
/// Zero vector maps to zero. Shared backend for the norm-power gradients.
template <typename Derived>
Vec signed_power_scaled(const Eigen::MatrixBase<Derived>& x, double p, double r,
                        double log_scale) {
  Vec out = Vec::Zero(x.size());
  const double ln = log_p_norm(x, p);
  if (std::isinf(ln)) return out;
  const double base = log_scale + (r - p) * ln;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    if (a > 0.0) out[i] = std::copysign(std::exp(base + (p - 1.0) * std::log(a)), x[i]);
  }
  return out;
}

/// Gradient of ||x||_p^r: r ||x||_p^{r-p} vpow(x, p), with the zero-vector
/// convention ||0||^{r-p} vpow(0, p) := 0. Finite p > 1, r > 1.
template <typename Derived>
Vec grad_norm_power(const Eigen::MatrixBase<Derived>& x, const Exponent& p, double r) {
  if (p.is_infinite()) throw std::invalid_argument("grad_norm_power: p must be finite");
  const double pv = p.value();
  if (pv <= 1.0 || r <= 1.0)
    throw std::invalid_argument("grad_norm_power: requires p > 1 and r > 1");
  return signed_power_scaled(x, pv, r, std::log(r));
}

}  // namespace smd

#endif  // SMD_NORMS_HPP
