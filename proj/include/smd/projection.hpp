#ifndef SMD_PROJECTION_HPP
#define SMD_PROJECTION_HPP

#include <stdexcept>
#include <string>

#include "smd/mirror.hpp"

namespace smd {

/// The feasible set: the centered sup-norm ball B_inf(radius) in dimension dim.
struct Box {
  double radius;
  int dim;

  Box(double r, int d) : radius(r), dim(d) {
    if (!(r > 0.0) || d < 1) throw std::invalid_argument("Box: radius > 0, dim >= 1");
  }

  bool contains(const Eigen::Ref<const Vec>& x, double slack = 0.0) const {
    return x.size() == dim && x.cwiseAbs().maxCoeff() <= radius + slack;
  }
};

/// Coordinate-wise clamp onto the box (the Euclidean projection).
Vec clamp_to(const Eigen::Ref<const Vec>& y, const Box& box);

/// Raised when the projection solver hits its iteration cap before meeting
/// the stationarity tolerance. Carries a convexity-based bound on the
/// remaining objective suboptimality.
class ProjectionError : public std::runtime_error {
 public:
  ProjectionError(const std::string& what, double gap)
      : std::runtime_error(what), objective_gap_(gap) {}
  double objective_gap() const { return objective_gap_; }

 private:
  double objective_gap_;
};

/// Bregman projection argmin_{x in box} D_Psi(x, y). Interior points are
/// returned unchanged. Otherwise minimizes the equivalent convex objective
/// Psi(x) - <grad Psi(y), x> by projected gradient descent with backtracking,
/// warm-started at clamp(y); see the implementation for the stopping rule.
Vec bregman_project(const MirrorMap& m, const Eigen::Ref<const Vec>& y, const Box& box);

/// Projects y and checks the generalized Pythagorean inequality
/// D(x, yhat) + D(yhat, y) <= D(x, y) for a feasible x, up to 1e-8 relative
/// slack.
bool pythagorean_check(const MirrorMap& m, const Eigen::Ref<const Vec>& x,
                       const Eigen::Ref<const Vec>& y, const Box& box);

}  // namespace smd

#endif  // SMD_PROJECTION_HPP
